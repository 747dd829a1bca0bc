"""Finite groups as explicit multiplication tables.

Elements are the indices ``0 .. n-1``.  Every catalog constructor places the
identity at index 0, so class 0 is always the identity class and row 0 of a
character table is the trivial character.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property, reduce
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    CatalogBoundExceeded,
    ContainsIdentity,
    DoesNotGenerate,
    MalformedSpec,
    NonAssociativeTable,
    NotConjugationStable,
    NotSymmetric,
)

EXHAUSTIVE_ASSOCIATIVITY_BOUND = 512


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    mult: np.ndarray
    labels: tuple[str, ...]
    name: str = ""
    meta: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.mult.setflags(write=False)

    @property
    def order(self) -> int:
        return self.mult.shape[0]

    @cached_property
    def identity(self) -> int:
        diag = np.nonzero((self.mult == np.arange(self.order)).all(axis=1))[0]
        return int(diag[0])

    @cached_property
    def inv(self) -> np.ndarray:
        out = np.argmax(self.mult == self.identity, axis=1)
        out.setflags(write=False)
        return out

    def mul(self, g: int, h: int) -> int:
        return int(self.mult[g, h])

    def product(self, elems: Iterable[int]) -> int:
        return reduce(self.mul, elems, self.identity)

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = int(self.inv[g]), -k
        out, base = self.identity, g
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def conj(self, g: int, x: int) -> int:
        """Return g x g^-1."""
        return int(self.mult[self.mult[g, x], self.inv[g]])

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            k += 1
        return k

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        n, base = self.order, np.arange(self.order)
        orders = np.zeros(n, dtype=np.int64)
        cur = base.copy()
        for k in range(1, n + 1):
            orders[(cur == self.identity) & (orders == 0)] = k
            if orders.all():
                break
            cur = self.mult[cur, base]
        return tuple(int(o) for o in orders)

    def center(self) -> list[int]:
        commutes = (self.mult == self.mult.T).all(axis=1)
        return [int(g) for g in np.nonzero(commutes)[0]]

    def index_of(self, label: str) -> int:
        label = label.strip()
        try:
            return self._label_index[label]
        except KeyError:
            raise MalformedSpec(f"unknown element label {label!r} in {self.name or 'group'}") from None

    @cached_property
    def _label_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def conjugacy(self) -> "ConjugacyData":
        return conjugacy_classes(self)

    @property
    def exponent(self) -> int:
        return self.conjugacy.exponent

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"


@dataclass(frozen=True)
class ConjugacyData:
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]
    reps: tuple[int, ...]
    exponent: int

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    def __len__(self) -> int:
        return len(self.classes)


@dataclass(frozen=True)
class ConnectionSet:
    S: tuple[int, ...]
    not_cycle: bool

    @property
    def r(self) -> int:
        return len(self.S)

    def __contains__(self, g: int) -> bool:
        return g in self._members

    def __iter__(self):
        return iter(self.S)

    @cached_property
    def _members(self) -> frozenset[int]:
        return frozenset(self.S)


def check_group_axioms(mult: np.ndarray) -> None:
    n = mult.shape[0]
    if mult.shape != (n, n) or n == 0:
        raise NonAssociativeTable("table must be square and non-empty")
    if mult.min() < 0 or mult.max() >= n:
        raise NonAssociativeTable("table entries out of range")
    ids = np.nonzero((mult == np.arange(n)).all(axis=1) & (mult.T == np.arange(n)).all(axis=1))[0]
    if len(ids) != 1:
        raise NonAssociativeTable("no two-sided identity")
    ident = int(ids[0])
    if not ((mult == ident).sum(axis=1) == 1).all():
        raise NonAssociativeTable("some element has no inverse")
    inv = np.argmax(mult == ident, axis=1)
    if not (mult[inv, np.arange(n)] == ident).all():
        raise NonAssociativeTable("left and right inverses differ")
    if n <= EXHAUSTIVE_ASSOCIATIVITY_BOUND:
        for a in range(n):
            # (a b) c == a (b c) for all b, c
            if not (mult[mult[a]] == mult[a][mult]).all():
                raise NonAssociativeTable(f"associativity fails for first factor {a}")
    else:
        rng = np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, 20000))
        if not (mult[mult[a, b], c] == mult[a, mult[b, c]]).all():
            raise NonAssociativeTable("associativity fails on a sampled triple")


def _make(elements: Sequence, op: Callable, label: Callable[[object], str], name: str,
          identity=None, check: bool = True, meta: dict | None = None) -> FiniteGroup:
    elements = list(elements)
    if identity is not None:
        elements.remove(identity)
        elements.insert(0, identity)
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    mult = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            mult[i, j] = index[op(a, b)]
    if check:
        check_group_axioms(mult)
    if meta is not None:
        meta["elements"] = tuple(elements)
    return FiniteGroup(mult, tuple(label(e) for e in elements), name, meta or {})


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise MalformedSpec("cyclic:n needs n >= 1")
    return _make(range(n), lambda a, b: (a + b) % n, str, f"cyclic:{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, elements r^i s^j stored as (i, j)."""
    if n < 3:
        raise MalformedSpec("dihedral:n needs n >= 3")

    def op(a, b):
        (i, j), (k, l) = a, b
        return ((i + (-1) ** j * k) % n, (j + l) % 2)

    def label(a):
        i, j = a
        r = "" if i == 0 else ("r" if i == 1 else f"r^{i}")
        return (r + ("s" if j else "")) or "e"

    elems = [(i, j) for j in range(2) for i in range(n)]
    return _make(elems, op, label, f"dihedral:{n}")


def _cycle_label(p: tuple[int, ...]) -> str:
    seen, parts = set(), []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(str(x + 1))
            x = p[x]
        parts.append("(" + "".join(cyc) + ")")
    return "".join(parts) or "()"


def symmetric(k: int) -> FiniteGroup:
    if not 1 <= k <= 5:
        raise CatalogBoundExceeded(f"symmetric:{k} outside catalog bound k <= 5")
    perms = list(itertools.permutations(range(k)))
    # (g h)(x) = g(h(x))
    return _make(perms, lambda g, h: tuple(g[h[x]] for x in range(k)), _cycle_label,
                 f"symmetric:{k}")


_QUAT = {  # unit products (sign, unit)
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}


def quaternion8() -> FiniteGroup:
    elems = [(s, u) for u in "1ijk" for s in (1, -1)]

    def op(a, b):
        s, u = _QUAT[a[1], b[1]]
        return (a[0] * b[0] * s, u)

    return _make(elems, op, lambda a: ("" if a[0] > 0 else "-") + a[1], "quaternion8")


def heisenberg(p: int) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over F_p as triples (a, b, c)."""
    if p not in (2, 3, 5):
        raise CatalogBoundExceeded(f"heisenberg:{p} needs a prime p <= 5")

    def op(x, y):
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p)

    def label(x):
        out = ""
        for sym, e in zip("xyz", x):
            if e:
                out += sym if e == 1 else f"{sym}^{e}"
        return out or "e"

    elems = list(itertools.product(range(p), repeat=3))
    return _make(elems, op, label, f"heisenberg:{p}")


class GF:
    """The field with q elements, q in {2, 3, 4, 5}; elements are ints 0..q-1.

    For q = 4 the int b0 + 2*b1 encodes b0 + b1*w with w^2 = w + 1.
    """

    def __init__(self, q: int) -> None:
        if q not in (2, 3, 4, 5):
            raise CatalogBoundExceeded(f"F_{q} outside catalog bound q in {{2,3,4,5}}")
        self.q = q

    def add(self, a: int, b: int) -> int:
        return a ^ b if self.q == 4 else (a + b) % self.q

    def neg(self, a: int) -> int:
        return a if self.q == 4 else (-a) % self.q

    def mul(self, a: int, b: int) -> int:
        if self.q != 4:
            return a * b % self.q
        # carry-less product reduced by w^2 = w + 1
        prod = 0
        for i in range(2):
            if b >> i & 1:
                prod ^= a << i
        if prod & 4:
            prod ^= 0b111
        return prod

    def pow(self, a: int, k: int) -> int:
        out = 1
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def units(self) -> list[int]:
        return list(range(1, self.q))

    def order(self, a: int) -> int:
        k, x = 1, a
        while x != 1:
            x = self.mul(x, a)
            k += 1
        return k

    @cached_property
    def generator(self) -> int:
        return min(a for a in self.units() if self.order(a) == self.q - 1)

    def log(self, a: int) -> int:
        """Discrete log to the canonical generator."""
        g, x = self.generator, 1
        for k in range(self.q - 1):
            if x == a:
                return k
            x = self.mul(x, g)
        raise ValueError(f"{a} is not a unit")

    def label(self, a: int) -> str:
        if self.q != 4:
            return str(a)
        return ("0", "1", "w", "w+1")[a]


def gl2(q: int) -> FiniteGroup:
    F = GF(q)

    def det(m):
        a, b, c, d = m
        return F.add(F.mul(a, d), F.neg(F.mul(b, c)))

    def op(m, n):
        a, b, c, d = m
        e, f, g, h = n
        return (F.add(F.mul(a, e), F.mul(b, g)), F.add(F.mul(a, f), F.mul(b, h)),
                F.add(F.mul(c, e), F.mul(d, g)), F.add(F.mul(c, f), F.mul(d, h)))

    def label(m):
        a, b, c, d = (F.label(x) for x in m)
        return f"[{a},{b};{c},{d}]"

    elems = [m for m in itertools.product(range(q), repeat=4) if det(m) != 0]
    return _make(elems, op, label, f"gl2:{q}", identity=(1, 0, 0, 1), meta={"field": F, "q": q})


def direct_product(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    na, nb = A.order, B.order
    ia = np.repeat(np.arange(na), nb)
    ib = np.tile(np.arange(nb), na)
    mult = A.mult[ia][:, ia] * nb + B.mult[ib][:, ib]
    labels = tuple(f"({A.labels[i]},{B.labels[j]})" for i in range(na) for j in range(nb))
    return FiniteGroup(np.ascontiguousarray(mult), labels, f"product({A.name},{B.name})")


def read_table(path: str | Path) -> FiniteGroup:
    """Parse a Cayley-table file: n, then n rows of n 1-based indices, optional #labels line."""
    lines = [ln.rstrip("\n") for ln in Path(path).read_text().splitlines()]
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise MalformedSpec(f"{path}: empty table file")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise MalformedSpec(f"{path}:1: expected the group order") from None
    if n < 1:
        raise MalformedSpec(f"{path}:1: order must be positive")
    rows = []
    for lineno in range(1, n + 1):
        if lineno >= len(lines):
            raise MalformedSpec(f"{path}: expected {n} table rows, found {lineno - 1}")
        toks = lines[lineno].split()
        if len(toks) != n:
            raise MalformedSpec(f"{path}:{lineno + 1}: expected {n} entries, found {len(toks)}")
        try:
            rows.append([int(t) - 1 for t in toks])
        except ValueError:
            raise MalformedSpec(f"{path}:{lineno + 1}: non-integer entry") from None
    rest = lines[n + 1:]
    labels = tuple(str(i + 1) for i in range(n))
    if rest:
        head = rest[0]
        if len(rest) > 1 or not head.startswith("#labels"):
            raise MalformedSpec(f"{path}:{n + 2}: trailing content after table")
        toks = head[len("#labels"):].split()
        if len(toks) != n or len(set(toks)) != n:
            raise MalformedSpec(f"{path}:{n + 2}: need {n} distinct labels")
        labels = tuple(toks)
    mult = np.array(rows, dtype=np.int64)
    check_group_axioms(mult)
    return FiniteGroup(mult, labels, f"file:{path}")


def write_table(G: FiniteGroup, path: str | Path) -> None:
    rows = [str(G.order)]
    rows += [" ".join(str(int(x) + 1) for x in row) for row in G.mult]
    rows.append("#labels " + " ".join(G.labels))
    Path(path).write_text("\n".join(rows) + "\n")


_SIMPLE = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "symmetric": symmetric,
    "heisenberg": heisenberg,
    "gl2": gl2,
}


def split_top(s: str) -> list[str]:
    """Split on commas that are not nested in brackets."""
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts


def build_group(spec: str) -> FiniteGroup:
    s = spec.strip()
    if s == "quaternion8":
        return quaternion8()
    if s.startswith("file:"):
        return read_table(s[5:])
    m = re.fullmatch(r"product\((.*)\)", s)
    if m:
        parts = split_top(m.group(1))
        if len(parts) != 2:
            raise MalformedSpec(f"product takes two factors: {spec!r}")
        return direct_product(build_group(parts[0]), build_group(parts[1]))
    m = re.fullmatch(r"([a-z0-9]+):(\d+)", s)
    if not m or m.group(1) not in _SIMPLE:
        raise MalformedSpec(f"unrecognised group descriptor {spec!r}")
    return _SIMPLE[m.group(1)](int(m.group(2)))


def conjugacy_classes(G: FiniteGroup) -> ConjugacyData:
    n = G.order
    class_of = [-1] * n
    found = []
    ident = G.identity
    order = [ident] + [g for g in range(n) if g != ident]
    for x in order:
        if class_of[x] >= 0:
            continue
        orbit = sorted(set(G.mult[G.mult[:, x], G.inv].tolist()))
        for y in orbit:
            class_of[y] = len(found)
        found.append(tuple(orbit))
    exponent = math.lcm(*G.element_orders)
    return ConjugacyData(tuple(found), tuple(class_of), tuple(c[0] for c in found), exponent)


def generated_subgroup(G: FiniteGroup, gens: Iterable[int]) -> set[int]:
    gens = list(gens)
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = G.mul(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def validate_connection_set(G: FiniteGroup, S: Iterable[int]) -> ConnectionSet:
    S = sorted(set(int(s) for s in S))
    members = set(S)
    if G.identity in members:
        raise ContainsIdentity("connection set contains the identity")
    for s in S:
        if int(G.inv[s]) not in members:
            raise NotSymmetric(f"S is not closed under inverses: {G.labels[s]}^-1 missing")
    for s in S:
        for g in range(G.order):
            c = G.conj(g, s)
            if c not in members:
                raise NotConjugationStable(
                    f"S is not conjugation stable: {G.labels[g]} {G.labels[s]} {G.labels[g]}^-1"
                    f" = {G.labels[c]} is missing")
    if len(generated_subgroup(G, S)) != G.order:
        raise DoesNotGenerate("S does not generate G")
    return ConnectionSet(tuple(S), len(S) >= 3)


def all_nonidentity(G: FiniteGroup) -> ConnectionSet:
    return validate_connection_set(G, [g for g in range(G.order) if g != G.identity])
