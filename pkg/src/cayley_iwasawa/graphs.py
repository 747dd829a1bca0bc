"""Multigraphs, Cayley graphs, voltage covers, Jacobians and Ihara polynomials.

Directed edges of a :class:`Multigraph` are numbered 2k (the listed
orientation of undirected edge k) and 2k+1 (its reverse), so the inversion
is ``d ^ 1``.  A loop contributes two directed edges at its vertex, which
makes the adjacency diagonal count twice the number of loops.
"""

from __future__ import annotations

import json
import math
import warnings
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Mapping

import numpy as np

from . import kernels
from .cyclo import CyclotomicInteger, ring
from .errors import (AmbivalenceTrap, BaseDisconnected, Condition1, Condition2, Condition3,
                     Condition4, Condition5, ConfigError, CoverDisconnected, DegreeOneVertex,
                     Disconnected, EulerCharacteristicZero)
from .groups import ConnectionSet, FiniteGroup
from .polydet import bareiss_det, integer_det, poly_matrix_det
from .reports import CheckReport


@dataclass(frozen=True, eq=False)
class Multigraph:
    nV: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple((int(o), int(t)) for o, t in self.edges))
        for o, t in self.edges:
            if not (0 <= o < self.nV and 0 <= t < self.nV):
                raise ConfigError(f"edge ({o}, {t}) has an endpoint outside 0..{self.nV - 1}")

    @property
    def nE(self) -> int:
        return len(self.edges)

    @property
    def euler_characteristic(self) -> int:
        return self.nV - self.nE

    @cached_property
    def origins(self) -> np.ndarray:
        e = np.array(self.edges, dtype=np.int64).reshape(-1, 2)
        return np.stack([e[:, 0], e[:, 1]], axis=1).reshape(-1)

    @cached_property
    def targets(self) -> np.ndarray:
        e = np.array(self.edges, dtype=np.int64).reshape(-1, 2)
        return np.stack([e[:, 1], e[:, 0]], axis=1).reshape(-1)

    @staticmethod
    def inverse(d: int) -> int:
        return d ^ 1

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.bincount(self.origins, minlength=self.nV)

    @cached_property
    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.nV, self.nV), dtype=np.int64)
        np.add.at(A, (self.origins, self.targets), 1)
        return A

    def laplacian(self) -> np.ndarray:
        return np.diag(self.degrees) - self.adjacency

    def reduced_laplacian(self) -> np.ndarray:
        return self.laplacian()[1:, 1:]

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.nV)]
        for d, o in enumerate(self.origins.tolist()):
            out[o].append(d)
        return tuple(tuple(x) for x in out)

    def components(self) -> list[list[int]]:
        seen = [False] * self.nV
        tg = self.targets.tolist()
        comps = []
        for s in range(self.nV):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [], deque([s])
            while queue:
                v = queue.popleft()
                comp.append(v)
                for d in self.out_edges[v]:
                    w = tg[d]
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return self.nV > 0 and len(self.components()) == 1

    def to_json(self) -> dict:
        return {"nV": self.nV, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict | str | Path) -> Multigraph:
        if isinstance(data, (str, Path)):
            data = json.loads(Path(data).read_text())
        try:
            return cls(int(data["nV"]), tuple(tuple(e) for e in data["edges"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed multigraph JSON: {exc}") from exc


def cayley_graph(G: FiniteGroup, S: ConnectionSet) -> Multigraph:
    """Vertices are group elements; v_i -- v_j when g_i g_j^-1 lies in S."""
    members = np.zeros(G.order, dtype=bool)
    members[list(S)] = True
    quot = G.mult[:, G.inv]  # quot[i, j] = g_i g_j^-1
    ii, jj = np.nonzero(np.triu(members[quot], k=1))
    return Multigraph(G.order, tuple(zip(ii.tolist(), jj.tolist())))


# -- beta functions and voltages ---------------------------------------------

@dataclass(frozen=True, eq=False)
class BetaAssignment:
    """Integer function on S, stored as a vector over all group elements (0 off S)."""

    group: FiniteGroup
    S: ConnectionSet
    values: tuple[int, ...]

    def __call__(self, g: int) -> int:
        return self.values[g]

    @classmethod
    def from_values(cls, G: FiniteGroup, S: ConnectionSet, values: Mapping[int, int]) -> BetaAssignment:
        """Use the given values verbatim on S (missing entries are 0); no completion."""
        vec = [0] * G.order
        for g, v in values.items():
            if g not in S:
                raise ConfigError(f"beta given on {G.labels[g]}, which is not in S")
            if int(v) != v:
                raise Condition4(f"beta({G.labels[g]}) = {v} is not an integer")
            vec[g] = int(v)
        return cls(G, S, tuple(vec))

    @classmethod
    def from_partial(cls, G: FiniteGroup, S: ConnectionSet, partial: Mapping[int, int]) -> BetaAssignment:
        """Complete values given on some elements by class invariance and beta(s^-1) = -beta(s).

        Classes of S not reached stay 0.  Contradictory input raises Condition1
        (two values on one class) or Condition3 (a class and its inverse class
        not negated, including a nonzero value on a self-inverse class).
        """
        C = G.conjugacy
        cls_val: dict[int, int] = {}
        source: dict[int, str] = {}
        for g, v in partial.items():
            if g not in S:
                raise ConfigError(f"beta given on {G.labels[g]}, which is not in S")
            if int(v) != v:
                raise Condition4(f"beta({G.labels[g]}) = {v} is not an integer")
            v = int(v)
            k = C.class_of[g]
            kinv = C.class_of[int(G.inv[g])]
            for cl, val, how in ((k, v, "class"), (kinv, -v, "inverse")):
                if cl in cls_val and cls_val[cl] != val:
                    err = Condition1 if how == "class" and source[cl] == "class" else Condition3
                    raise err(f"conflicting beta values on the class of {G.labels[C.reps[cl]]}:"
                              f" {cls_val[cl]} vs {val}")
                cls_val[cl] = val
                source[cl] = how
        vec = [0] * G.order
        for s in S:
            vec[s] = cls_val.get(C.class_of[s], 0)
        return cls(G, S, tuple(vec))

    def class_values(self) -> dict[str, int]:
        G, C = self.group, self.group.conjugacy
        reps = sorted({C.reps[C.class_of[s]] for s in self.S})
        return {G.labels[r]: self.values[r] for r in reps}

    def serialize(self) -> dict[str, int]:
        return {self.group.labels[s]: self.values[s] for s in self.S}

    def nonzero_pairs(self) -> list[int]:
        """beta_1..beta_k: one value per inverse pair {s, s^-1} with s != s^-1."""
        G = self.group
        out = []
        for s in self.S:
            si = int(G.inv[s])
            if s < si:
                out.append(self.values[s])
        return out


@dataclass(frozen=True, eq=False)
class VoltageAssignment:
    graph: Multigraph
    values: tuple[int, ...]  # one per undirected edge, in the listed orientation

    def __post_init__(self) -> None:
        if len(self.values) != self.graph.nE:
            raise ConfigError("one voltage per undirected edge is required")

    @classmethod
    def from_beta(cls, X: Multigraph, beta: BetaAssignment) -> VoltageAssignment:
        G = beta.group
        vals = tuple(beta(G.mul(o, int(G.inv[t]))) for o, t in X.edges)
        return cls(X, vals)

    @cached_property
    def directed(self) -> np.ndarray:
        v = np.array(self.values, dtype=np.int64)
        return np.stack([v, -v], axis=1).reshape(-1)


@dataclass
class BetaReport:
    conditions: dict[int, bool]
    witness: tuple[str, ...] | None
    ambivalence_trap: bool
    messages: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return all(self.conditions.values())

    def raise_if_invalid(self) -> None:
        errs = {1: Condition1, 2: Condition2, 3: Condition3, 4: Condition4, 5: Condition5}
        for k in sorted(self.conditions):
            if not self.conditions[k]:
                raise errs[k]("; ".join(self.messages) or f"condition {k} fails")

    def to_json(self) -> dict:
        return {"conditions": {str(k): v for k, v in self.conditions.items()},
                "witness": list(self.witness) if self.witness else "NotFoundWithinBound",
                "ambivalence_trap": self.ambivalence_trap, "messages": self.messages}


def find_condition5_witness(beta: BetaAssignment, ell: int, m_max: int = 4) -> tuple[int, ...] | None:
    """Shortest (h_1, ..., h_m), 2 <= m <= m_max, with product in S and beta not additive mod ell.

    Breadth-first over states (partial product, partial sum mod ell); h_1 is
    restricted to class representatives since conjugating a tuple preserves
    both sides.
    """
    G, S = beta.group, beta.S
    C = G.conjugacy
    Slist = list(S)
    bvals = [beta(s) % ell for s in Slist]
    firsts = sorted({C.reps[C.class_of[s]] for s in Slist})
    parent: dict[tuple[int, int], tuple[tuple[int, int] | None, int]] = {}
    frontier = []
    for h in firsts:
        st = (h, beta(h) % ell)
        if st not in parent:
            parent[st] = (None, h)
            frontier.append(st)
    for _ in range(2, m_max + 1):
        nxt = []
        for st in frontier:
            g, acc = st
            for h, b in zip(Slist, bvals):
                new = (int(G.mult[g, h]), (acc + b) % ell)
                if new in parent:
                    continue
                parent[new] = (st, h)
                nxt.append(new)
        for st in nxt:
            g, acc = st
            if g in S and beta(g) % ell != acc:
                seq = []
                cur: tuple[int, int] | None = st
                while cur is not None:
                    prev, h = parent[cur]
                    seq.append(h)
                    cur = prev
                return tuple(reversed(seq))
        frontier = nxt
    return None


def validate_beta(beta: BetaAssignment, ell: int, m_max: int = 4) -> BetaReport:
    G, S = beta.group, beta.S
    C = G.conjugacy
    conds = {}
    msgs = []
    conds[1] = all(beta(G.conj(g, s)) == beta(s) for s in S for g in range(G.order))
    if not conds[1]:
        msgs.append("beta is not constant on conjugacy classes")
    conds[3] = all(beta(int(G.inv[s])) == -beta(s) for s in S)
    if not conds[3]:
        msgs.append("beta(s^-1) != -beta(s) for some s")
    conds[4] = all(isinstance(v, int) for v in beta.values)
    trap = all(C.class_of[s] == C.class_of[int(G.inv[s])] for s in S)
    if trap:
        warnings.warn(f"{G.name}: every element of S is conjugate to its inverse, so beta vanishes",
                      AmbivalenceTrap, stacklevel=2)
        msgs.append("AmbivalenceTrap: class invariance and antisymmetry force beta = 0")
    conds[2] = any(beta(s) % ell for s in S)
    if not conds[2]:
        msgs.append(f"every beta value is divisible by {ell}")
    witness = find_condition5_witness(beta, ell, m_max)
    conds[5] = witness is not None
    if witness is None:
        msgs.append(f"no non-additive tuple of length <= {m_max} (NotFoundWithinBound)")
    labels = tuple(G.labels[h] for h in witness) if witness else None
    return BetaReport(dict(sorted(conds.items())), labels, trap, msgs)


# -- covers --------------------------------------------------------------------

def derived_graph(X: Multigraph, alpha: VoltageAssignment, ell: int, n: int) -> Multigraph:
    """The cover X(Z/ell^n, alpha): vertex (v, s) has index v * ell^n + s."""
    L = ell ** n
    edges = []
    for (o, t), a in zip(X.edges, alpha.values):
        for s in range(L):
            edges.append((o * L + s, t * L + (s + a) % L))
    Y = Multigraph(X.nV * L, tuple(edges))
    check_covering(X, Y, L)
    return Y


def check_covering(X: Multigraph, Y: Multigraph, L: int) -> None:
    """Assert that projecting Y onto X is a bijection on every vertex star."""
    d = np.arange(2 * Y.nE)
    proj = (d // 2 // L) * 2 + d % 2
    if not (Y.origins // L == X.origins[proj]).all():
        raise AssertionError("projection does not commute with origins")
    if not (Y.targets // L == X.targets[proj]).all():
        raise AssertionError("projection does not commute with targets")
    pairs = Y.origins * (2 * X.nE) + proj
    if len(np.unique(pairs)) != len(pairs):
        raise AssertionError("star map is not injective")
    if not (Y.degrees == np.repeat(X.degrees, L)).all():
        raise AssertionError("star map is not surjective")


def _spanning_potential(X: Multigraph, alpha: VoltageAssignment) -> list[int]:
    """Sum of voltages along BFS-tree paths from vertex 0."""
    pot: list[int | None] = [None] * X.nV
    pot[0] = 0
    tg = X.targets.tolist()
    dv = alpha.directed.tolist()
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for d in X.out_edges[v]:
            w = tg[d]
            if pot[w] is None:
                pot[w] = pot[v] + dv[d]
                queue.append(w)
    if any(p is None for p in pot):
        raise BaseDisconnected("base graph is disconnected")
    return pot  # type: ignore[return-value]


def voltage_image_gcd(X: Multigraph, alpha: VoltageAssignment) -> int:
    """gcd of the voltages of the fundamental cycles (tree chords)."""
    pot = _spanning_potential(X, alpha)
    g = 0
    for (o, t), a in zip(X.edges, alpha.values):
        g = math.gcd(g, pot[o] + a - pot[t])
    return g


def voltage_connectivity(X: Multigraph, alpha: VoltageAssignment, ell: int, n: int) -> bool:
    """Whether the cycle voltages generate Z/ell^n, i.e. the level-n cover is connected."""
    return math.gcd(voltage_image_gcd(X, alpha), ell ** n) == 1


# -- Jacobians ------------------------------------------------------------------

@dataclass(frozen=True)
class JacobianData:
    invariant_factors: tuple[int, ...]
    kappa: int | None
    ell: int | None = None
    kappa_ell_valuation: int | None = None
    precision: int | None = None

    def serialize(self) -> dict:
        return {"invariant_factors": [str(d) for d in self.invariant_factors],
                "kappa": None if self.kappa is None else str(self.kappa),
                "ell": self.ell, "kappa_ell_valuation": self.kappa_ell_valuation}


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def smith_form_mod_det(mat, D: int) -> list[int]:
    """Invariant factors of a nonsingular integer matrix with |det| = D.

    D kills the cokernel, so the elimination runs over Z/D with unimodular
    gcd steps; each diagonal entry d is read as gcd(d, D).
    """
    D = abs(D)
    n = len(mat)
    if D == 1:
        return [1] * n
    A = [[int(x) % D for x in row] for row in mat]
    diag = []
    for k in range(n):
        piv = None
        for i in range(k, n):
            for j in range(k, n):
                if A[i][j]:
                    g = math.gcd(A[i][j], D)
                    if piv is None or g < piv[0]:
                        piv = (g, i, j)
                        if g == 1:
                            break
            if piv is not None and piv[0] == 1:
                break
        if piv is None:
            diag.extend([0] * (n - k))
            break
        _, pi, pj = piv
        A[k], A[pi] = A[pi], A[k]
        for row in A:
            row[k], row[pj] = row[pj], row[k]
        while True:
            rk = A[k]
            for i in range(k + 1, n):
                b = A[i][k]
                if not b:
                    continue
                a, ri = rk[k], A[i]
                if b % a == 0:
                    q = b // a
                    A[i] = [(x - q * y) % D for x, y in zip(ri, rk)]
                else:
                    g, s, t = _xgcd(a, b)
                    u, v = a // g, b // g
                    rk, A[i] = ([(s * x + t * y) % D for x, y in zip(rk, ri)],
                                [(u * y - v * x) % D for x, y in zip(rk, ri)])
                    A[k] = rk
            for j in range(k + 1, n):
                b = A[k][j]
                if not b:
                    continue
                a = A[k][k]
                if b % a == 0:
                    q = b // a
                    for row in A:
                        row[j] = (row[j] - q * row[k]) % D
                else:
                    g, s, t = _xgcd(a, b)
                    u, v = a // g, b // g
                    for row in A:
                        x, y = row[k], row[j]
                        row[k], row[j] = (s * x + t * y) % D, (u * y - v * x) % D
            # column operations with a gcd step can refill column k
            if not any(A[i][k] for i in range(k + 1, n)):
                break
        diag.append(A[k][k])
    d = [math.gcd(x, D) for x in diag]  # gcd(0, D) = D
    for i in range(n):
        for j in range(i + 1, n):
            g = math.gcd(d[i], d[j])
            d[i], d[j] = g, d[i] * d[j] // g
    return d


TRIAL_PRIME_BOUND = 1 << 16


def _split_smooth(D: int) -> tuple[dict[int, int], int]:
    """Trial-divide D by the primes below TRIAL_PRIME_BOUND; return (factors, cofactor)."""
    from sympy import primerange

    found = {}
    for p in primerange(2, TRIAL_PRIME_BOUND):
        if p * p > D:
            break
        if D % p == 0:
            e = 0
            while D % p == 0:
                D //= p
                e += 1
            found[p] = e
    if 1 < D < TRIAL_PRIME_BOUND ** 2:
        found[D] = found.get(D, 0) + 1
        D = 1
    return found, D


def smith_form(mat, D: int) -> list[int]:
    """Invariant factors of a nonsingular integer matrix with |det| = D.

    The invariant factors are assembled one prime at a time from local Smith
    forms at precision v_p(D) + 1, which never saturates.  Primes of D that
    trial division does not reach are handled together by elimination modulo
    their product, unless that product is itself prime.
    """
    from sympy import isprime

    D = abs(D)
    n = len(mat)
    if D == 1:
        return [1] * n
    primes, rough = _split_smooth(D)
    if rough > 1 and isprime(rough):
        primes[rough] = 1
        rough = 1
    d = [1] * n
    for p, e in primes.items():
        vals = kernels.local_smith(mat, p, e + 1)
        if vals is None or sum(vals) != e:
            raise ArithmeticError(f"local Smith form at {p} disagrees with the determinant")
        for i, v in enumerate(vals):
            d[i] *= p ** v
    if rough > 1:
        r = smith_form_mod_det(mat, rough)
        d = [x * y for x, y in zip(d, r)]
    return d


def jacobian(X: Multigraph, ell: int | None = None, cross_check: bool = True,
             precision: int | None = None) -> JacobianData:
    """Invariant factors of Pic^0(X).

    With ``ell`` unset the full integer Smith form is computed and kappa is
    checked against the Kirchhoff cofactor.  With ``ell`` set only the
    ell-parts are computed, modulo ell^N with N doubled until no factor
    vanishes.
    """
    if not X.is_connected():
        raise Disconnected(f"graph has {len(X.components())} components")
    Lr = X.reduced_laplacian()
    if ell is None:
        if X.nV == 1:
            return JacobianData((), 1)
        D = integer_det(Lr)
        factors = smith_form(Lr.tolist(), D)
        kappa = abs(D)
        if math.prod(factors) != kappa:
            raise ArithmeticError("invariant factors do not multiply to the tree count")
        if cross_check and bareiss_det(Lr.tolist()) != D:
            raise ArithmeticError("multimodular determinant disagrees with the Kirchhoff cofactor")
        return JacobianData(tuple(factors), kappa)
    if X.nV == 1:
        return JacobianData((), None, ell, 0, 0)
    N = precision or max(1, int(30 / math.log2(ell)))
    while True:
        vals = kernels.local_smith(Lr, ell, N)
        if vals is not None:
            break
        N *= 2
    return JacobianData(tuple(ell ** v for v in vals), None, ell, sum(vals), N)


# -- Ihara polynomials ------------------------------------------------------------

def _require_ihara_hypotheses(X: Multigraph) -> None:
    if not X.is_connected():
        raise Disconnected("graph is disconnected")
    if X.euler_characteristic == 0:
        raise EulerCharacteristicZero("Euler characteristic is 0 (cycle graph)")
    if (X.degrees == 1).any():
        raise DegreeOneVertex("graph has a vertex of degree 1")


def ihara_h(X: Multigraph) -> list[int]:
    """Coefficients (low to high) of h_X(u) = det(I - A u + (D - I) u^2)."""
    _require_ihara_hypotheses(X)
    A = X.adjacency
    deg = X.degrees
    n = X.nV
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            e = {1: -int(A[i, j])} if A[i, j] else {}
            if i == j:
                e[0] = 1
                e[2] = int(deg[i]) - 1
            row.append({k: v for k, v in e.items() if v})
        entries.append(row)
    det = poly_matrix_det(entries)
    top = max(det, default=0)
    return [det.get(k, 0) for k in range(top + 1)]


def class_number_formula_check(X: Multigraph) -> CheckReport:
    """h'(1) = -2 chi(X) kappa(X)."""
    h = ihara_h(X)
    dh1 = sum(k * c for k, c in enumerate(h))
    jac = jacobian(X)
    chi = X.euler_characteristic
    rhs = -2 * chi * jac.kappa
    return CheckReport("class_number", dh1 == rhs,
                       {"h_prime_1": dh1, "euler_characteristic": chi, "kappa": jac.kappa, "rhs": rhs,
                        "h_at_1": sum(h)})


# -- twisted determinants -------------------------------------------------------------

def fiber_adjacency(X: Multigraph, Y: Multigraph, L: int) -> np.ndarray:
    """A[s, i, j] = number of directed edges of Y from (v_i, 0) to (v_j, s)."""
    A = np.zeros((L, X.nV, X.nV), dtype=np.int64)
    o, t = Y.origins, Y.targets
    base = o % L == 0
    np.add.at(A, (t[base] % L, o[base] // L, t[base] // L), 1)
    return A


def twisted_determinant_poly(X: Multigraph, alpha: VoltageAssignment, ell: int, n: int,
                             cover: Multigraph | None = None, require_connected: bool = True) -> dict[int, int]:
    """det(D - sum_s A(s) y^s) as an integer polynomial in y (exponent -> coefficient)."""
    L = ell ** n
    Y = cover if cover is not None else derived_graph(X, alpha, ell, n)
    if require_connected and not Y.is_connected():
        raise CoverDisconnected(f"level-{n} cover is disconnected")
    A = fiber_adjacency(X, Y, L)
    deg = X.degrees
    entries = []
    for i in range(X.nV):
        row = []
        for j in range(X.nV):
            e = {s: -int(A[s, i, j]) for s in range(L) if A[s, i, j]}
            if i == j:
                e[0] = e.get(0, 0) + int(deg[i])
            row.append({k: v for k, v in e.items() if v})
        entries.append(row)
    return poly_matrix_det(entries)


def twisted_h_values(X: Multigraph, alpha: VoltageAssignment, ell: int, n: int,
                     cover: Multigraph | None = None, require_connected: bool = True) -> list[CyclotomicInteger]:
    """h(1, psi_j) for j = 0, ..., ell^n - 1 with psi_j(s) = zeta^(j s), in Z[zeta_{ell^n}].

    The determinant formula makes sense for a disconnected cover too; pass
    ``require_connected=False`` to evaluate it there.
    """
    L = ell ** n
    P = twisted_determinant_poly(X, alpha, ell, n, cover, require_connected)
    R = ring(L)
    out = []
    for j in range(L):
        terms: dict[int, int] = {}
        for e, c in P.items():
            k = e * j % L
            terms[k] = terms.get(k, 0) + c
        out.append(CyclotomicInteger(L, R.from_exponents(terms)))
    return out


def twisted_h_at_1(X: Multigraph, alpha: VoltageAssignment, ell: int, n: int, j: int) -> CyclotomicInteger:
    return twisted_h_values(X, alpha, ell, n)[j % ell ** n]


def artin_corollary_check(X: Multigraph, alpha: VoltageAssignment, ell: int, n: int) -> CheckReport:
    """ell^n kappa(X_n) = kappa(X) prod_{psi != 1} h(1, psi), exactly."""
    _require_ihara_hypotheses(X)
    for k in range(n + 1):
        if not voltage_connectivity(X, alpha, ell, k):
            raise CoverDisconnected(f"level-{k} cover is disconnected")
    L = ell ** n
    Y = derived_graph(X, alpha, ell, n)
    kX = jacobian(X).kappa
    kY = jacobian(Y).kappa
    lhs = L * kY
    hs = twisted_h_values(X, alpha, ell, n, Y)
    prod = CyclotomicInteger.one(L)
    for h in hs[1:]:
        prod = prod * h
    rational = prod.is_rational()
    rhs = kX * prod.to_int() if rational else None
    nonzero = all(bool(h) for h in hs[1:])
    return CheckReport("artin", rational and nonzero and lhs == rhs,
                       {"n": n, "lhs": lhs, "rhs": rhs, "kappa_base": kX, "kappa_cover": kY,
                        "product_rational": rational, "factors_nonzero": nonzero,
                        "factors": [str(h) for h in hs[1:]]})


def random_multigraph(rng: np.random.Generator, max_vertices: int = 12, min_degree: int = 2) -> Multigraph:
    """Random connected multigraph (loops and parallel edges allowed) with chi != 0."""
    while True:
        n = int(rng.integers(2, max_vertices + 1))
        edges = [(int(rng.integers(0, v)), v) for v in range(1, n)]  # spanning tree
        extra = int(rng.integers(1, 2 * n + 1))
        for _ in range(extra):
            a, b = int(rng.integers(0, n)), int(rng.integers(0, n))
            edges.append((a, b))
        X = Multigraph(n, tuple(edges))
        if X.degrees.min() >= min_degree and X.euler_characteristic != 0:
            return X


def random_class_beta(G: FiniteGroup, S: ConnectionSet, rng: np.random.Generator,
                      bound: int = 3) -> BetaAssignment:
    """Uniform class-antisymmetric beta with values in [-bound, bound]."""
    C = G.conjugacy
    partial = {}
    done: set[int] = set()
    for s in S:
        k = C.class_of[s]
        kinv = C.class_of[int(G.inv[s])]
        if k in done or k == kinv:
            continue
        done.update((k, kinv))
        partial[C.reps[k]] = int(rng.integers(-bound, bound + 1))
    return BetaAssignment.from_partial(G, S, partial)
