"""Laurent polynomials in x = 1 + T over Z or Z[zeta_m].

Storage is dense: the lowest exponent ``lo`` and an object array of
coefficients, one row per exponent.  Over Z[zeta_m] each row holds the
phi(m) power-basis coordinates, so multiplication by a coefficient is a
small integer matrix product.
"""

from __future__ import annotations

import math
from typing import Iterator, Mapping, Union

import numpy as np

from .cyclo import CyclotomicInteger, ring

Coeff = Union[int, CyclotomicInteger]


def _mult_matrix(m: int, coords) -> np.ndarray:
    """Matrix of multiplication by an element of Z[zeta_m] acting on row vectors."""
    R = ring(m)
    d = R.degree
    rows = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        rows.append(R.mul(e, coords))
    return np.array(rows, dtype=object)


def binom_general(a: int, k: int) -> int:
    """Generalised binomial coefficient a choose k for any integer a."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= a - i
    return num // math.factorial(k)


class XLaurent:
    __slots__ = ("m", "lo", "c")

    def __init__(self, m: int | None, lo: int, c: np.ndarray) -> None:
        self.m = m
        c = np.asarray(c, dtype=object)
        width = 1 if m is None else ring(m).degree
        c = c.reshape(-1) if m is None else c.reshape(-1, width)
        nz = np.nonzero(c != 0)[0] if m is None else np.nonzero((c != 0).any(axis=1))[0]
        if len(nz) == 0:
            self.lo, self.c = 0, c[:0]
        else:
            self.lo = lo + int(nz[0])
            self.c = c[nz[0]: nz[-1] + 1]

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_terms(cls, terms: Mapping[int, Coeff], m: int | None = None) -> XLaurent:
        terms = {e: c for e, c in terms.items() if c != 0}
        if m is None:
            m = next((c.m for c in terms.values() if isinstance(c, CyclotomicInteger)), None)
        if not terms:
            return cls.zero(m)
        lo, hi = min(terms), max(terms)
        if m is None:
            arr = np.zeros(hi - lo + 1, dtype=object)
            for e, c in terms.items():
                arr[e - lo] += int(c)
        else:
            d = ring(m).degree
            arr = np.zeros((hi - lo + 1, d), dtype=object)
            for e, c in terms.items():
                cc = c if isinstance(c, CyclotomicInteger) else CyclotomicInteger.from_int(m, c)
                arr[e - lo] += np.array(cc.coeffs, dtype=object)
        return cls(m, lo, arr)

    @classmethod
    def zero(cls, m: int | None = None) -> XLaurent:
        width = 1 if m is None else ring(m).degree
        return cls(m, 0, np.zeros((0,) if m is None else (0, width), dtype=object))

    @classmethod
    def constant(cls, c: Coeff, m: int | None = None) -> XLaurent:
        return cls.from_terms({0: c}, m)

    @classmethod
    def monomial(cls, e: int, c: Coeff = 1, m: int | None = None) -> XLaurent:
        return cls.from_terms({e: c}, m)

    # -- structure --------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return len(self.c) == 0

    @property
    def hi(self) -> int:
        return self.lo + len(self.c) - 1

    @property
    def ring_tag(self) -> str:
        return "integer" if self.m is None else f"cyclotomic({self.m})"

    def coeff(self, e: int) -> Coeff:
        k = e - self.lo
        if self.m is None:
            return int(self.c[k]) if 0 <= k < len(self.c) else 0
        if 0 <= k < len(self.c):
            return CyclotomicInteger(self.m, tuple(int(v) for v in self.c[k]))
        return CyclotomicInteger.zero(self.m)

    def items(self) -> Iterator[tuple[int, Coeff]]:
        for k in range(len(self.c)):
            e = self.lo + k
            c = self.coeff(e)
            if c != 0:
                yield e, c

    def to_dict(self) -> dict[int, Coeff]:
        return dict(self.items())

    def promote(self, m: int) -> XLaurent:
        if self.m == m:
            return self
        if self.m is not None:
            if m % self.m:
                raise ValueError(f"cannot promote Z[zeta_{self.m}] coefficients to conductor {m}")
            return XLaurent.from_terms({e: c.embed(m) for e, c in self.items()}, m)
        d = ring(m).degree
        arr = np.zeros((len(self.c), d), dtype=object)
        arr[:, 0] = self.c
        return XLaurent(m, self.lo, arr)

    def _align(self, other) -> tuple[XLaurent, XLaurent]:
        if not isinstance(other, XLaurent):
            other = XLaurent.constant(other, self.m if not isinstance(other, CyclotomicInteger) else other.m)
        if self.m == other.m:
            return self, other
        if self.m is None:
            return self.promote(other.m), other
        if other.m is None:
            return self, other.promote(self.m)
        L = math.lcm(self.m, other.m)
        return self.promote(L), other.promote(L)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> XLaurent:
        a, b = self._align(other)
        if a.is_zero:
            return b
        if b.is_zero:
            return a
        lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
        shape = (hi - lo + 1,) + a.c.shape[1:]
        arr = np.zeros(shape, dtype=object)
        arr[a.lo - lo: a.lo - lo + len(a.c)] += a.c
        arr[b.lo - lo: b.lo - lo + len(b.c)] += b.c
        return XLaurent(a.m, lo, arr)

    __radd__ = __add__

    def __neg__(self) -> XLaurent:
        return XLaurent(self.m, self.lo, -self.c)

    def __sub__(self, other) -> XLaurent:
        return self + (-other if isinstance(other, XLaurent) else -other)

    def __rsub__(self, other) -> XLaurent:
        return (-self) + other

    def __mul__(self, other) -> XLaurent:
        if isinstance(other, int):
            return XLaurent(self.m, self.lo, self.c * other)
        a, b = self._align(other)
        if a.is_zero or b.is_zero:
            return XLaurent.zero(a.m)
        if a.m is None:
            return XLaurent(None, a.lo + b.lo, np.convolve(a.c, b.c))
        if len(a.c) < len(b.c):
            a, b = b, a
        d = a.c.shape[1]
        arr = np.zeros((len(a.c) + len(b.c) - 1, d), dtype=object)
        for t in range(len(b.c)):
            row = b.c[t]
            if not row.any():
                continue
            if not row[1:].any():
                arr[t: t + len(a.c)] += a.c * row[0]
            else:
                arr[t: t + len(a.c)] += a.c.dot(_mult_matrix(a.m, tuple(row)))
        return XLaurent(a.m, a.lo + b.lo, arr)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> XLaurent:
        if k < 0:
            c = self.coeff(self.lo)
            if len(self.c) != 1 or c not in (1, -1):
                raise ValueError("only monomials with coefficient +-1 are invertible")
            return XLaurent.monomial(self.lo * k, c ** (-k) if isinstance(c, int) else c ** (-k), self.m)
        out = XLaurent.constant(1, self.m)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, XLaurent):
            other = XLaurent.constant(other, self.m if not isinstance(other, CyclotomicInteger) else other.m)
        a, b = self._align(other)
        if a.is_zero or b.is_zero:
            return a.is_zero and b.is_zero
        return a.lo == b.lo and a.c.shape == b.c.shape and bool((a.c == b.c).all())

    def __hash__(self) -> int:
        return hash((self.m, self.lo, tuple(map(str, self.c.reshape(-1)))))

    def shift(self, k: int) -> XLaurent:
        """Multiply by x^k."""
        return XLaurent(self.m, self.lo + k, self.c.copy())

    def inverse_substitution(self) -> XLaurent:
        """The Laurent polynomial f(1/x)."""
        if self.is_zero:
            return self
        return XLaurent(self.m, -self.hi, self.c[::-1].copy())

    # -- evaluation and T-expansion -----------------------------------------
    def clearing_power(self) -> int:
        """Minimal K with x^K f a polynomial in x whose constant term is nonzero."""
        return -self.lo if not self.is_zero else 0

    def cleared_x_coeffs(self) -> list[Coeff]:
        """Coefficients of x^K f, lowest degree first."""
        return [self.coeff(self.lo + k) for k in range(len(self.c))]

    def t_coefficients(self) -> tuple[int, list[Coeff]]:
        """(K, coefficients of x^K f(x) with x = 1 + T, lowest degree first)."""
        xs = self.cleared_x_coeffs()
        K = self.clearing_power()
        n = len(xs)
        zero = 0 if self.m is None else CyclotomicInteger.zero(self.m)
        out = [zero] * n
        for k, c in enumerate(xs):
            if c == 0:
                continue
            for j in range(k + 1):
                out[j] = out[j] + c * math.comb(k, j)
        return K, out

    def series_coefficient(self, j: int) -> Coeff:
        """Coefficient of T^j in the power-series expansion of f(1 + T) itself."""
        zero = 0 if self.m is None else CyclotomicInteger.zero(self.m)
        out = zero
        for e, c in self.items():
            b = binom_general(e, j)
            if b:
                out = out + c * b
        return out

    def evaluate(self, x: Coeff) -> Coeff:
        """Value at x; negative exponents need x to be a root of unity (or +-1)."""
        if self.is_zero:
            return 0 if self.m is None else CyclotomicInteger.zero(self.m)
        if isinstance(x, CyclotomicInteger):
            lo_pow = _unit_power(x, self.lo)
            acc = CyclotomicInteger.zero(x.m)
            for c in reversed(self.cleared_x_coeffs()):
                cc = c.embed(x.m) if isinstance(c, CyclotomicInteger) and c.m != x.m else c
                acc = acc * x + cc
            return acc * lo_pow
        if self.lo < 0 and x not in (1, -1):
            raise ValueError("cannot evaluate negative powers at a non-unit")
        acc = 0 if self.m is None else CyclotomicInteger.zero(self.m)
        for c in reversed(self.cleared_x_coeffs()):
            acc = acc * x + c
        return acc * (x ** self.lo if self.lo >= 0 else x ** (-self.lo))

    # -- display / serialisation ----------------------------------------------
    def serialize(self) -> dict:
        terms = []
        for e, c in self.items():
            terms.append([e, str(c) if isinstance(c, int) else c.serialize()])
        return {"ring": self.ring_tag, "terms": terms}

    def __repr__(self) -> str:
        return f"XLaurent({self})"

    def __str__(self) -> str:
        parts = []
        for e, c in self.items():
            cs = str(c)
            if isinstance(c, CyclotomicInteger) and not c.is_rational():
                cs = f"({cs})"
            mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") or "0"


def _unit_power(x: CyclotomicInteger, k: int) -> CyclotomicInteger:
    """x^k for a root of unity x, allowing negative k."""
    if k >= 0:
        return x ** k
    # x^-1 = x^(order-1)
    inv = x.conj()
    if x * inv != 1:
        raise ValueError("negative powers need a root of unity")
    return inv ** (-k)
