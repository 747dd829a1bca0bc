"""Exact arithmetic in Z[zeta_m] and in its completion at one unramified prime.

Elements of Z[zeta_m] are coordinate vectors in the power basis
1, zeta, ..., zeta^(phi(m)-1) modulo the m-th cyclotomic polynomial.

The l-adic side realises the embedding of Q(zeta_m) into an unramified
extension of Q_l concretely: the ring of integers modulo l^N is
(Z/l^N)[y] / (h_N) where h_N is a Hensel lift of one irreducible factor of
the cyclotomic polynomial modulo l.  The factor is chosen canonically so
that every invariant computed downstream is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence, Union

from sympy import ZZ
from sympy.polys.galoistools import gf_factor_sqf

from .errors import ConductorMismatch, NotCoprime, RamifiedUnsupported

DEFAULT_PRECISION = 64


# -- integer polynomials as coefficient lists, lowest degree first ----------

def _trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _pmul(a: Sequence[int], b: Sequence[int], mod: int | None = None) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    if mod is not None:
        out = [c % mod for c in out]
    return _trim(out)


def _pdivmod_monic(a: Sequence[int], b: Sequence[int], mod: int | None = None) -> tuple[list[int], list[int]]:
    """Quotient and remainder of a by the monic polynomial b."""
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [0], _trim([c % mod for c in a] if mod else a)
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] % mod if mod else a[k]
        if c:
            q[k - db] = c
            for t in range(db + 1):
                a[k - db + t] -= c * b[t]
    r = a[:db] or [0]
    if mod:
        r = [c % mod for c in r]
        q = [c % mod for c in q]
    return _trim(q), _trim(r)


def _padd(a: Sequence[int], b: Sequence[int], mod: int | None = None) -> list[int]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    if mod:
        out = [c % mod for c in out]
    return _trim(out)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("conductor must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num, rem = _pdivmod_monic(num, cyclotomic_polynomial(d))
            assert rem == [0]
    return tuple(num)


def euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


class CyclotomicRing:
    """Shared arithmetic tables for one conductor."""

    def __init__(self, m: int) -> None:
        self.m = m
        self.phi_poly = cyclotomic_polynomial(m)
        self.degree = len(self.phi_poly) - 1

    @cached_property
    def zeta_powers(self) -> tuple[tuple[int, ...], ...]:
        """Coordinates of zeta^k for 0 <= k < m."""
        d = self.degree
        out = []
        cur = [1] + [0] * (d - 1)
        for _ in range(self.m):
            out.append(tuple(cur))
            # multiply by zeta, reduce by the monic Phi_m
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [c - top * p for c, p in zip(cur, self.phi_poly)]
        return tuple(out)

    def reduce(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        d = self.degree
        c = list(coeffs)
        phi = self.phi_poly
        for k in range(len(c) - 1, d - 1, -1):
            t = c[k]
            if t:
                for i in range(d):
                    c[k - d + i] -= t * phi[i]
        c = c[:d]
        return tuple(c) + (0,) * (d - len(c))

    def mul(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return self.reduce(_pmul(a, b))

    def from_exponents(self, terms: dict[int, int]) -> tuple[int, ...]:
        """Coordinates of sum c * zeta^k."""
        out = [0] * self.degree
        zp = self.zeta_powers
        for k, c in terms.items():
            if c:
                for i, z in enumerate(zp[k % self.m]):
                    if z:
                        out[i] += c * z
        return tuple(out)


@lru_cache(maxsize=None)
def ring(m: int) -> CyclotomicRing:
    return CyclotomicRing(m)


Scalar = Union[int, "CyclotomicInteger"]


class CyclotomicInteger:
    """An element of Z[zeta_m]."""

    __slots__ = ("m", "coeffs", "_hash")

    def __init__(self, m: int, coeffs: Sequence[int]) -> None:
        R = ring(m)
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != R.degree:
            coeffs = R.reduce(coeffs)
        self.m = m
        self.coeffs = coeffs
        self._hash = None

    # constructors
    @classmethod
    def from_int(cls, m: int, n: int) -> CyclotomicInteger:
        return cls(m, (n,) + (0,) * (ring(m).degree - 1))

    @classmethod
    def zero(cls, m: int) -> CyclotomicInteger:
        return cls.from_int(m, 0)

    @classmethod
    def one(cls, m: int) -> CyclotomicInteger:
        return cls.from_int(m, 1)

    def _coerce(self, other) -> CyclotomicInteger | None:
        if isinstance(other, CyclotomicInteger):
            if other.m == self.m:
                return other
            raise ConductorMismatch(f"conductors {self.m} and {other.m} differ; embed first")
        if isinstance(other, int):
            return CyclotomicInteger.from_int(self.m, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicInteger(self.m, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInteger(self.m, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicInteger(self.m, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInteger(self.m, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicInteger(self.m, ring(self.m).mul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined in Z[zeta_m]")
        out, base = CyclotomicInteger.one(self.m), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def exact_div(self, n: int) -> CyclotomicInteger:
        if any(c % n for c in self.coeffs):
            raise ValueError(f"{self} is not divisible by {n}")
        return CyclotomicInteger(self.m, tuple(c // n for c in self.coeffs))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        if isinstance(other, CyclotomicInteger):
            if other.m == self.m:
                return self.coeffs == other.coeffs
            L = math.lcm(self.m, other.m)
            return self.embed(L).coeffs == other.embed(L).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs) if any(self.coeffs[1:]) else hash(self.coeffs[0])
        return self._hash

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_int(self) -> int:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational integer")
        return self.coeffs[0]

    def galois_twist(self, k: int) -> CyclotomicInteger:
        """Apply zeta -> zeta^k."""
        if math.gcd(k, self.m) != 1:
            raise NotCoprime(f"{k} is not coprime to the conductor {self.m}")
        R = ring(self.m)
        return CyclotomicInteger(self.m, R.from_exponents(_accumulate(
            ((i * k) % self.m, c) for i, c in enumerate(self.coeffs))))

    def conj(self) -> CyclotomicInteger:
        return self.galois_twist(-1)

    def embed(self, m2: int) -> CyclotomicInteger:
        """Image under Z[zeta_m] -> Z[zeta_m2], zeta_m -> zeta_m2^(m2/m)."""
        if m2 % self.m:
            raise ConductorMismatch(f"{self.m} does not divide {m2}")
        step = m2 // self.m
        return CyclotomicInteger(m2, ring(m2).from_exponents(_accumulate(
            (i * step, c) for i, c in enumerate(self.coeffs))))

    def norm(self) -> int:
        out = CyclotomicInteger.one(self.m)
        for k in range(1, self.m + 1):
            if math.gcd(k, self.m) == 1:
                out = out * self.galois_twist(k)
        return out.to_int()

    def serialize(self) -> dict:
        return {"m": self.m, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def deserialize(cls, d: dict) -> CyclotomicInteger:
        return cls(int(d["m"]), [int(c) for c in d["coeffs"]])

    def __repr__(self) -> str:
        return f"CyclotomicInteger({self.m}, {list(self.coeffs)})"

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            z = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not z:
                terms.append(str(c))
            elif c == 1:
                terms.append(z)
            elif c == -1:
                terms.append("-" + z)
            else:
                terms.append(f"{c}*{z}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


def _accumulate(pairs) -> dict[int, int]:
    out: dict[int, int] = {}
    for k, c in pairs:
        if c:
            out[k] = out.get(k, 0) + c
    return out


def root_of_unity(k: int, m: int) -> CyclotomicInteger:
    return CyclotomicInteger(m, ring(m).zeta_powers[k % m])


# -- l-adic completion ---------------------------------------------------------

def normalize_conductor(m: int) -> int:
    return m // 2 if m % 4 == 2 else m


def multiplicative_order(a: int, m: int) -> int:
    if m == 1:
        return 1
    k, x = 1, a % m
    while x != 1:
        x = x * a % m
        k += 1
    return k


def _gf_xgcd(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    """s, t with s a + t b = 1 over F_p (a, b coprime)."""
    r0, r1 = _trim([c % p for c in a]), _trim([c % p for c in b])
    s0, s1, t0, t1 = [1], [0], [0], [1]
    while r1 != [0]:
        inv = pow(r1[-1], -1, p)
        monic = [c * inv % p for c in r1]
        q, r = _pdivmod_monic(r0, monic, p)
        q = [c * inv % p for c in q]
        r0, r1 = r1, r
        s0, s1 = s1, _padd(s0, [-c for c in _pmul(q, s1)], p)
        t0, t1 = t1, _padd(t0, [-c for c in _pmul(q, t1)], p)
    assert len(r0) == 1
    inv = pow(r0[0], -1, p)
    return [c * inv % p for c in s0], [c * inv % p for c in t0]


def hensel_lift(f: Sequence[int], h0: Sequence[int], p: int, N: int) -> list[int]:
    """Lift the monic factor h0 of f modulo p to a monic factor modulo p^N."""
    g0, rem = _pdivmod_monic(f, h0, p)
    if rem != [0]:
        raise ValueError("h0 does not divide f modulo p")
    s, t = _gf_xgcd(h0, g0, p)
    h, g = list(h0), list(g0)
    pk = p
    for _ in range(1, N):
        # e = (f - h g) / p^k  (mod p)
        diff = _padd(f, [-c for c in _pmul(h, g)])
        assert all(c % pk == 0 for c in diff)
        e = [(c // pk) % p for c in diff]
        q, dh = _pdivmod_monic(_pmul(e, t, p), h0, p)
        dg = _padd(_pmul(e, s, p), _pmul(q, g0, p), p)
        h = _padd(h, [pk * c for c in dh])
        g = _padd(g, [pk * c for c in dg])
        pk *= p
        h = [c % pk for c in h]
        g = [c % pk for c in g]
    h = h + [0] * (len(h0) - len(h))
    return h


class AboveN:
    """Valuation marker for an element that vanishes modulo l^N."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "AboveN"


ABOVE_N = AboveN()


@dataclass(frozen=True, eq=False)
class PadicCyclotomicContext:
    ell: int
    m: int
    m_norm: int
    N: int
    h: tuple[int, ...]
    f: int
    e: int = 1

    @property
    def modulus(self) -> int:
        return self.ell ** self.N

    @property
    def residue_field_size(self) -> int:
        return self.ell ** self.f

    @cached_property
    def y_powers(self) -> tuple[tuple[int, ...], ...]:
        """Image of zeta_{m_norm}^k, k < m_norm, as reduced polynomials in y."""
        M = self.modulus
        out = []
        cur = [1] + [0] * (self.f - 1)
        for _ in range(self.m_norm):
            out.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(c - top * hc) % M for c, hc in zip(cur, self.h)]
        return tuple(out)

    def with_precision(self, N: int) -> PadicCyclotomicContext:
        return padic_context(self.ell, self.m, N)

    def zero(self) -> PadicElement:
        return PadicElement(self, (0,) * self.f)

    def embedding_exponent(self, m_a: int) -> tuple[int, int]:
        """(sign, k) with zeta_{m_a} -> sign * zeta_{m_norm}^k."""
        m_n = normalize_conductor(m_a)
        if self.m_norm % m_n:
            raise ConductorMismatch(
                f"Z[zeta_{m_a}] does not embed in the context of conductor {self.m}")
        step = self.m_norm // m_n
        if m_n != m_a:
            return -1, step * ((m_n + 1) // 2)
        return 1, step

    def reduce(self, a: CyclotomicInteger | int) -> PadicElement:
        if isinstance(a, int):
            return PadicElement(self, (a % self.modulus,) + (0,) * (self.f - 1))
        sign, k = self.embedding_exponent(a.m)
        M = self.modulus
        out = [0] * self.f
        yp = self.y_powers
        for i, c in enumerate(a.coeffs):
            if c:
                cc = c * sign ** i
                for t, y in enumerate(yp[(i * k) % self.m_norm]):
                    out[t] += cc * y
        return PadicElement(self, tuple(c % M for c in out))


@lru_cache(maxsize=None)
def padic_context(ell: int, m: int, N: int = DEFAULT_PRECISION) -> PadicCyclotomicContext:
    m_norm = normalize_conductor(m)
    if m_norm % ell == 0:
        raise RamifiedUnsupported(
            f"ell = {ell} divides the normalized conductor {m_norm}; the completion is ramified")
    phi = list(cyclotomic_polynomial(m_norm))
    # gf_factor_sqf wants highest degree first
    _, factors = gf_factor_sqf([c % ell for c in reversed(phi)], ell, ZZ)
    candidates = sorted(tuple(int(c) for c in reversed(fac)) for fac in factors)
    h0 = list(candidates[0])
    f = multiplicative_order(ell, m_norm)
    assert len(h0) - 1 == f
    hN = hensel_lift(phi, h0, ell, N)
    return PadicCyclotomicContext(ell, m, m_norm, N, tuple(hN), f)


def valuation_int(n: int, ell: int) -> int | None:
    if n == 0:
        return None
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


@dataclass(frozen=True, eq=False)
class PadicElement:
    ctx: PadicCyclotomicContext
    poly: tuple[int, ...]

    def _check(self, other: PadicElement) -> None:
        if other.ctx is not self.ctx:
            raise ConductorMismatch("elements live in different l-adic contexts")

    def __add__(self, other: PadicElement) -> PadicElement:
        self._check(other)
        M = self.ctx.modulus
        return PadicElement(self.ctx, tuple((a + b) % M for a, b in zip(self.poly, other.poly)))

    def __sub__(self, other: PadicElement) -> PadicElement:
        self._check(other)
        M = self.ctx.modulus
        return PadicElement(self.ctx, tuple((a - b) % M for a, b in zip(self.poly, other.poly)))

    def __mul__(self, other: PadicElement) -> PadicElement:
        self._check(other)
        M = self.ctx.modulus
        _, r = _pdivmod_monic(_pmul(self.poly, other.poly, M), self.ctx.h, M)
        return PadicElement(self.ctx, tuple(r) + (0,) * (self.ctx.f - len(r)))

    def __eq__(self, other) -> bool:
        return isinstance(other, PadicElement) and other.ctx is self.ctx and other.poly == self.poly

    def __hash__(self) -> int:
        return hash(self.poly)

    def valuation(self) -> int | AboveN:
        vals = [valuation_int(c, self.ctx.ell) for c in self.poly if c]
        return min(vals) if vals else ABOVE_N

    def residue(self) -> tuple[int, ...]:
        return tuple(c % self.ctx.ell for c in self.poly)

    def serialize(self) -> dict:
        return {"ell": self.ctx.ell, "N": self.ctx.N, "poly": [str(c) for c in self.poly]}


def reduce_to_padic(ctx: PadicCyclotomicContext, a: CyclotomicInteger | int) -> PadicElement:
    return ctx.reduce(a)


def padic_valuation(x: PadicElement) -> int | AboveN:
    return x.valuation()


def residue(x: PadicElement) -> tuple[int, ...]:
    return x.residue()
