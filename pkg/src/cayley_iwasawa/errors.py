"""Typed exceptions.

Two umbrella classes drive the CLI exit codes: :class:`ConfigError`
(exit 2) and :class:`UnsupportedDomain` (exit 3).  Everything else that
signals a failed mathematical check derives from :class:`CheckFailed`.
"""

from __future__ import annotations


class ArtifactError(Exception):
    """Base class for all errors raised by this package."""

    hint: str = ""


class ConfigError(ArtifactError):
    pass


class UnsupportedDomain(ArtifactError):
    pass


class CheckFailed(ArtifactError):
    pass


# groups
class MalformedSpec(ConfigError):
    hint = "group descriptors look like cyclic:5, heisenberg:3 or product(cyclic:3,symmetric:3)"


class NonAssociativeTable(ConfigError):
    pass


class CatalogBoundExceeded(UnsupportedDomain):
    hint = "pick a smaller catalog member"


class ConnectionSetError(ConfigError):
    """A connection set violates one of the four Cayley bullets."""


class ContainsIdentity(ConnectionSetError):
    pass


class NotSymmetric(ConnectionSetError):
    pass


class NotConjugationStable(ConnectionSetError):
    pass


class DoesNotGenerate(ConnectionSetError):
    pass


# cyclo
class NotCoprime(ArtifactError):
    pass


class RamifiedUnsupported(UnsupportedDomain):
    hint = "choose a prime ell not dividing the group exponent (odd part when ell = 2)"


class ConductorMismatch(ArtifactError):
    pass


# chartab
class EqualCharactersNotIrreducible(ArtifactError):
    pass


# graphs
class BaseDisconnected(ArtifactError):
    pass


class Disconnected(ArtifactError):
    pass


class CoverDisconnected(ArtifactError):
    pass


class EulerCharacteristicZero(UnsupportedDomain):
    hint = "the Cayley graph is a cycle; use a larger connection set"


class DegreeOneVertex(UnsupportedDomain):
    hint = "prune leaves before computing the Ihara polynomial"


class AmbivalenceTrap(UserWarning):
    """Class invariance plus antisymmetry force beta to vanish on S."""


class BetaConditionError(ConfigError):
    """Base for the five numbered conditions on a beta function."""

    condition = 0


class Condition1(BetaConditionError):
    condition = 1


class Condition2(BetaConditionError):
    condition = 2


class Condition3(BetaConditionError):
    condition = 3


class Condition4(BetaConditionError):
    condition = 4


class Condition5(BetaConditionError):
    condition = 5


# iwasawa
class DeterminantDegenerate(ArtifactError):
    pass


class ZeroSeries(ArtifactError):
    pass


class DegreeDivisible(UnsupportedDomain):
    hint = "the lemma needs ell prime to the character degree"


class DegreeMismatch(ArtifactError):
    pass


class FactorizationMismatch(CheckFailed):
    pass


class NeitherConventionMatches(CheckFailed):
    pass


class FormulaNeverStabilizes(CheckFailed):
    pass
