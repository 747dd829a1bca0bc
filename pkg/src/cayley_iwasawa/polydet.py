"""Exact determinants of integer and Laurent-polynomial matrices.

Polynomial determinants are found by evaluation and interpolation: clear the
minimal x-exponent of every row, bound the degree by the sum of row maxima,
evaluate at the points 1, 2, ..., D+1, take the determinants modulo enough
31-bit primes to exceed twice a Hadamard bound on the coefficients, and
recombine by interpolation and the Chinese remainder theorem.  The result is
exact; no coefficient is guessed.

:func:`bareiss_det` is the classical fraction-free elimination over Z and
serves as an independent route for cross-checks.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np
from sympy import prevprime

from . import kernels

PRIME_CEILING = 1 << 31

Poly = Mapping[int, int]  # exponent -> integer coefficient


@lru_cache(maxsize=None)
def crt_primes(count: int) -> tuple[int, ...]:
    out = []
    p = PRIME_CEILING
    for _ in range(count):
        p = prevprime(p)
        out.append(p)
    return tuple(out)


def primes_for_bound(bound: int) -> tuple[int, ...]:
    """Enough primes that their product exceeds 2*bound + 1."""
    k, prod = 0, 1
    while prod <= 2 * bound + 1:
        k += 1
        prod *= crt_primes(k)[-1]
    return crt_primes(k)


def bareiss_det(mat: Sequence[Sequence[int]]) -> int:
    A = [list(map(int, row)) for row in mat]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def _row_bound(norms: Sequence[int]) -> int:
    return math.isqrt(sum(x * x for x in norms)) + 1


def integer_det(mat) -> int:
    """Exact determinant of an integer matrix by multimodular reduction."""
    A = np.array(mat, dtype=object)
    n = A.shape[0]
    if n == 0:
        return 1
    bound = 1
    for row in A:
        bound *= _row_bound([abs(int(x)) for x in row])
    primes = primes_for_bound(bound)
    residues = [kernels.det_mod(A % p, p) for p in primes]
    return _crt_symmetric([[r] for r in residues], primes)[0]


def _crt_symmetric(residues: Sequence[Sequence[int]], primes: Sequence[int]) -> list[int]:
    """Combine coefficient vectors given modulo each prime; symmetric representatives."""
    vals = [int(r) for r in residues[0]]
    M = primes[0]
    for res, p in zip(residues[1:], primes[1:]):
        inv = pow(M, -1, p)
        vals = [v + M * (((int(r) - v) * inv) % p) for v, r in zip(vals, res)]
        M *= p
    half = M // 2
    return [v - M if v > half else v for v in vals]


def _interpolate_mod(xs: Sequence[int], ys: Sequence[int], p: int) -> list[int]:
    """Monomial coefficients of the polynomial through (xs, ys) over F_p."""
    n = len(xs)
    # Newton divided differences
    coef = [int(y) % p for y in ys]
    inverses: dict[int, int] = {}
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            d = xs[i] - xs[i - j]
            if d not in inverses:
                inverses[d] = pow(d, -1, p)
            coef[i] = (coef[i] - coef[i - 1]) * inverses[d] % p
    out = [0] * n
    for i in range(n - 1, -1, -1):
        # out = out * (x - xs[i]) + coef[i]
        xi = xs[i]
        for k in range(n - 1, 0, -1):
            out[k] = (out[k - 1] - xi * out[k]) % p
        out[0] = (coef[i] - xi * out[0]) % p
    return out


def poly_matrix_det(entries: Sequence[Sequence[Poly]]) -> dict[int, int]:
    """Exact determinant of a square matrix of integer Laurent polynomials.

    Entries map exponent to coefficient (negative exponents allowed); the
    result has the same form with zero coefficients dropped.
    """
    n = len(entries)
    if n == 0:
        return {0: 1}
    shift = 0
    rows: list[list[dict[int, int]]] = []
    degree = 0
    for row in entries:
        exps = [e for ent in row for e, c in ent.items() if c]
        if not exps:
            return {}
        lo, hi = min(exps), max(exps)
        shift += lo
        degree += hi - lo
        rows.append([{e - lo: c for e, c in ent.items() if c} for ent in row])
    bound = 1
    for row in rows:
        bound *= _row_bound([sum(abs(c) for c in ent.values()) for ent in row])
    primes = primes_for_bound(bound)
    maxdeg = max((e for row in rows for ent in row for e in ent), default=0)
    coeff = np.zeros((maxdeg + 1, n, n), dtype=object)
    for i, row in enumerate(rows):
        for j, ent in enumerate(row):
            for e, c in ent.items():
                coeff[e, i, j] = c
    xs = list(range(1, degree + 2))
    per_prime = []
    for p in primes:
        cp = (coeff % p).astype(np.int64)
        x = np.array(xs, dtype=np.int64)[:, None, None]
        vals = np.broadcast_to(cp[maxdeg], (len(xs), n, n)).copy()
        for e in range(maxdeg - 1, -1, -1):
            vals = (vals * x + cp[e]) % p
        dets = kernels.det_mod_batch(vals, p)
        per_prime.append(_interpolate_mod(xs, [int(d) for d in dets], p))
    coeffs = _crt_symmetric(per_prime, primes)
    return {k + shift: c for k, c in enumerate(coeffs) if c}


def poly_det_cofactor(entries: Sequence[Sequence[Poly]]) -> dict[int, int]:
    """Laplace expansion along the first row; exponential, for small oracles only."""
    n = len(entries)
    if n == 0:
        return {0: 1}
    if n == 1:
        return {e: c for e, c in entries[0][0].items() if c}
    out: dict[int, int] = {}
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in entries[1:]]
        sub = poly_det_cofactor(minor)
        sgn = -1 if j % 2 else 1
        for e1, c1 in entries[0][j].items():
            for e2, c2 in sub.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + sgn * c1 * c2
    return {e: c for e, c in out.items() if c}
