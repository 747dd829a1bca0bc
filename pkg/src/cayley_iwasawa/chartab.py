"""Irreducible character tables by the Burnside-Dixon method.

The class-sum structure constants are reduced modulo a prime p = 1 (mod m),
the common eigenvectors of the class matrices over F_p give the central
characters, the degrees come out of the orthogonality normalisation, and each
value chi(g) is lifted to Z[zeta_m] from the eigenvalue multiplicities of g,
read off by a discrete Fourier transform over the powers of g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from sympy import isprime, primitive_root

from . import kernels
from .cyclo import CyclotomicInteger, ring, root_of_unity
from .errors import CatalogBoundExceeded, EqualCharactersNotIrreducible
from .groups import FiniteGroup, gl2

MAX_ORDER = 1000


@dataclass(frozen=True, eq=False)
class CharacterTable:
    group: FiniteGroup
    m: int
    rows: tuple[tuple[CyclotomicInteger, ...], ...]

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(row[0].to_int() for row in self.rows)

    @property
    def class_sizes(self) -> tuple[int, ...]:
        return self.group.conjugacy.sizes

    def __len__(self) -> int:
        return len(self.rows)

    def value(self, chi: int, g: int) -> CyclotomicInteger:
        return self.rows[chi][self.group.conjugacy.class_of[g]]

    def index_of_row(self, row) -> int | None:
        row = tuple(row)
        for i, r in enumerate(self.rows):
            if r == row:
                return i
        return None

    @cached_property
    def inverse_class(self) -> tuple[int, ...]:
        C = self.group.conjugacy
        return tuple(C.class_of[int(self.group.inv[r])] for r in C.reps)

    def serialize(self) -> dict:
        G, C = self.group, self.group.conjugacy
        return {
            "group": G.name,
            "order": G.order,
            "exponent": self.m,
            "classes": [{"index": k, "size": len(c), "representative": G.labels[C.reps[k]]}
                        for k, c in enumerate(C.classes)],
            "characters": [{"index": i, "degree": d, "values": [v.serialize() for v in row]}
                           for i, (d, row) in enumerate(zip(self.degrees, self.rows))],
        }


def class_multiplication_coefficients(G: FiniteGroup) -> np.ndarray:
    """a[i, j, k] with C_i C_j = sum_k a[i, j, k] C_k for the class sums C."""
    C = G.conjugacy
    c = len(C)
    class_of = np.array(C.class_of)
    reps = np.array(C.reps)
    a = np.zeros((c, c, c), dtype=np.int64)
    for i, cls in enumerate(C.classes):
        for x in cls:
            # x y = rep_k  <=>  y = x^-1 rep_k
            ys = G.mult[G.inv[x], reps]
            np.add.at(a[i], (class_of[ys], np.arange(c)), 1)
    return a


def dixon_prime(order: int, exponent: int) -> int:
    """Smallest prime p = 1 (mod exponent) with p > 2 sqrt(order)."""
    p = exponent + 1
    while not (isprime(p) and p * p > 4 * order):
        p += exponent
    return p


def _rref_mod(rows: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = np.array(rows, dtype=np.int64) % p
    r, pivots = 0, []
    nrows, ncols = A.shape
    for col in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, col])[0]
        if not len(nz):
            continue
        i = r + int(nz[0])
        A[[r, i]] = A[[i, r]]
        A[r] = A[r] * pow(int(A[r, col]), -1, p) % p
        others = np.arange(nrows) != r
        A[others] = (A[others] - np.outer(A[others, col], A[r])) % p
        pivots.append(col)
        r += 1
    return A[:r], pivots


def _nullspace_mod(M: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {v : M v = 0} over F_p."""
    R, pivots = _rref_mod(M, p)
    n = M.shape[1]
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for row, pc in zip(R, pivots):
            v[pc] = (-row[f]) % p
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), n)


def _split(space: np.ndarray, M: np.ndarray, p: int) -> list[np.ndarray]:
    """Split an M-invariant subspace (rows, in RREF) into eigenspaces of M."""
    B, pivots = _rref_mod(space, p)
    d = len(B)
    images = (M @ B.T) % p  # columns are M b_t
    R = images[pivots, :]  # coordinates w.r.t. the RREF basis
    lams = np.arange(p, dtype=np.int64)
    stack = (R[None, :, :] - lams[:, None, None] * np.eye(d, dtype=np.int64)[None]) % p
    dets = kernels.det_mod_batch(stack, p)
    out = []
    for lam in np.nonzero(dets == 0)[0]:
        coords = _nullspace_mod((R - int(lam) * np.eye(d, dtype=np.int64)) % p, p)
        out.append(_rref_mod((coords @ B) % p, p)[0])
    if sum(len(s) for s in out) != d:
        raise ArithmeticError("class matrix is not diagonalisable modulo the Dixon prime")
    return out


def character_table(G: FiniteGroup) -> CharacterTable:
    n = G.order
    if n > MAX_ORDER:
        raise CatalogBoundExceeded(f"order {n} beyond the character-table bound {MAX_ORDER}")
    C = G.conjugacy
    c = len(C)
    m = C.exponent
    p = dixon_prime(n, m)
    a = class_multiplication_coefficients(G) % p
    sizes = C.sizes
    # (M_j)[i, k] = a[j, i, k]; central characters are common eigenvectors
    spaces = [np.eye(c, dtype=np.int64)]
    for j in range(1, c):
        if all(len(s) == 1 for s in spaces):
            break
        Mj = a[j]
        nxt = []
        for s in spaces:
            nxt.extend([s] if len(s) == 1 else _split(s, Mj, p))
        spaces = nxt
    if len(spaces) != c or any(len(s) != 1 for s in spaces):
        raise ArithmeticError("class matrices did not separate the characters")

    inv_class = [C.class_of[int(G.inv[r])] for r in C.reps]
    z = pow(primitive_root(p), (p - 1) // m, p)
    power_class = _power_classes(G)
    rows = []
    for s in spaces:
        w = s[0] * pow(int(s[0][0]), -1, p) % p
        norm = sum(int(w[k]) * int(w[inv_class[k]]) * pow(sizes[k], -1, p) for k in range(c)) % p
        deg_sq = n * pow(norm, -1, p) % p
        deg = next((d for d in range(1, math.isqrt(n) + 1) if d * d % p == deg_sq and n % d == 0), None)
        if deg is None:
            raise ArithmeticError("no admissible degree found; Dixon prime too small")
        vals_p = [int(w[k]) * deg * pow(sizes[k], -1, p) % p for k in range(c)]
        rows.append(tuple(_lift(vals_p, k, m, p, z, deg, power_class) for k in range(c)))

    trivial = next(r for r in rows if all(v == 1 for v in r))
    rest = sorted((r for r in rows if r is not trivial),
                  key=lambda r: (r[0].to_int(), tuple(v.coeffs for v in r)))
    table = CharacterTable(G, m, (trivial, *rest))
    if sum(d * d for d in table.degrees) != n:
        raise ArithmeticError("sum of squared degrees differs from the group order")
    return table


def _power_classes(G: FiniteGroup) -> list[list[int]]:
    """power_class[k][j] = class of rep_k^j for 0 <= j < order(rep_k)."""
    C = G.conjugacy
    out = []
    for r in C.reps:
        o = G.element_orders[r]
        cur, seq = G.identity, []
        for _ in range(o):
            seq.append(C.class_of[cur])
            cur = G.mul(cur, r)
        out.append(seq)
    return out


def _lift(vals_p, k, m, p, z, deg, power_class) -> CyclotomicInteger:
    seq = power_class[k]
    o = len(seq)
    zo = pow(z, m // o, p)
    inv_o = pow(o, -1, p)
    terms: dict[int, int] = {}
    total = 0
    for i in range(o):
        s = 0
        zi = pow(zo, (-i) % o, p)
        acc = 1
        for j in range(o):
            s += vals_p[seq[j]] * acc
            acc = acc * zi % p
        mult = s * inv_o % p
        if mult > deg:
            raise ArithmeticError("eigenvalue multiplicity out of range")
        if mult:
            terms[i * (m // o)] = mult
            total += mult
    if total != deg:
        raise ArithmeticError("eigenvalue multiplicities do not add up to the degree")
    return CyclotomicInteger(m, ring(m).from_exponents(terms))


def _cyclo_inner(table: CharacterTable, x, y) -> CyclotomicInteger:
    out = CyclotomicInteger.zero(table.m)
    for size, a, b in zip(table.class_sizes, x, y):
        out = out + a * b.conj() * size
    return out


def check_orthogonality(table: CharacterTable) -> list[str]:
    """Both orthogonality relations, exactly; returns a list of violations."""
    G = table.group
    n = G.order
    problems = []
    for i, ri in enumerate(table.rows):
        for j, rj in enumerate(table.rows[i:], start=i):
            got = _cyclo_inner(table, ri, rj)
            want = n if i == j else 0
            if got != want:
                problems.append(f"rows {i},{j}: {got} != {want}")
    sizes = table.class_sizes
    c = len(sizes)
    for k in range(c):
        for l in range(k, c):
            s = CyclotomicInteger.zero(table.m)
            for row in table.rows:
                s = s + row[k] * row[l].conj()
            want = n // sizes[k] if k == l else 0
            if s != want:
                problems.append(f"columns {k},{l}: {s} != {want}")
    if any(n % d for d in table.degrees):
        problems.append("a degree does not divide the group order")
    return problems


# -- the GL_2(F_q) characters of the worked example ---------------------------

def _gl2_setup(q: int, G: FiniteGroup | None):
    if q not in (2, 3, 4, 5):
        raise CatalogBoundExceeded(f"gl2:{q} outside the catalog")
    G = G if G is not None else gl2(q)
    if G.meta.get("q") != q:
        raise ValueError(f"{G!r} is not gl2:{q}")
    return G, G.meta["field"], G.meta["elements"]


def permutation_character_P1(q: int, G: FiniteGroup | None = None) -> tuple[CyclotomicInteger, ...]:
    """Fixed points on the projective line minus one, per conjugacy class."""
    G, F, mats = _gl2_setup(q, G)
    points = [(x, 1) for x in range(q)] + [(1, 0)]
    m = G.exponent

    def fixed(mat) -> int:
        a, b, c, d = mat
        count = 0
        for u, v in points:
            u2, v2 = F.add(F.mul(a, u), F.mul(b, v)), F.add(F.mul(c, u), F.mul(d, v))
            # proportional iff u v2 - v u2 = 0
            if F.add(F.mul(u, v2), F.neg(F.mul(v, u2))) == 0:
                count += 1
        return count

    return tuple(CyclotomicInteger.from_int(m, fixed(mats[r]) - 1) for r in G.conjugacy.reps)


def principal_series_character(q: int, alpha: int, beta: int,
                               G: FiniteGroup | None = None) -> tuple[CyclotomicInteger, ...]:
    """Character of Ind_B^G(alpha x beta), alpha, beta given as powers of a generator character.

    alpha = k means gamma^i -> zeta_(q-1)^(k i) for the canonical generator gamma
    of F_q^x.
    """
    G, F, mats = _gl2_setup(q, G)
    if (alpha - beta) % (q - 1) == 0:
        raise EqualCharactersNotIrreducible("alpha = beta: the induced representation is reducible")
    m = G.exponent
    step = m // (q - 1)
    borel_order = (q - 1) ** 2 * q
    out = []
    for r in G.conjugacy.reps:
        terms: dict[int, int] = {}
        for x in range(G.order):
            y = mats[G.conj(x, r)]
            a, b, c, d = y
            if c == 0:
                e = (alpha * F.log(a) + beta * F.log(d)) % (q - 1)
                terms[e * step] = terms.get(e * step, 0) + 1
        total = CyclotomicInteger(m, ring(m).from_exponents(terms))
        out.append(total.exact_div(borel_order))
    return tuple(out)


def scalar_class(G: FiniteGroup, a: int) -> int:
    """Conjugacy class of the scalar matrix a*Id in gl2:q."""
    mats = G.meta["elements"]
    return G.conjugacy.class_of[mats.index((a, 0, 0, a))]


def generator_character_value(G: FiniteGroup, k: int, a: int) -> CyclotomicInteger:
    """Value at a in F_q^x of the k-th power of the canonical generator character."""
    F = G.meta["field"]
    q = G.meta["q"]
    m = G.exponent
    return root_of_unity(k * F.log(a) * (m // (q - 1)), m)
