"""Exact Z_ell-towers of Cayley graphs: Iwasawa polynomials, Jacobians and character factorizations."""

from .chartab import CharacterTable, character_table
from .cyclo import CyclotomicInteger, padic_context
from .graphs import (BetaAssignment, Multigraph, VoltageAssignment, cayley_graph, derived_graph,
                     jacobian, validate_beta)
from .groups import FiniteGroup, all_nonidentity, build_group, validate_connection_set
from .iwasawa import iwasawa_laurent, iwasawa_polynomial, q_chi, verify_factorization
from .kernels import BACKEND
from .laurent import XLaurent

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BetaAssignment", "CharacterTable", "CyclotomicInteger", "FiniteGroup", "Multigraph",
    "VoltageAssignment", "XLaurent", "all_nonidentity", "build_group", "cayley_graph", "character_table",
    "derived_graph", "iwasawa_laurent", "iwasawa_polynomial", "jacobian", "padic_context", "q_chi",
    "validate_beta", "validate_connection_set", "verify_factorization", "__version__",
]
