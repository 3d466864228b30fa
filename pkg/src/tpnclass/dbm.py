"""Difference bound matrices over exact rationals.

Entries are stored as raw integers on the grid ``1/scale``: ``2*c + 1``
encodes ``x - y <= c`` and ``2*c`` encodes ``x - y < c``. Strict bounds only
appear in the output of :func:`difference`; every other constructor works with
non-strict bounds. Index 0 is the reference variable (named ``"0"``), fixed
at zero.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .kernels import INF, LE_ZERO

REF = "0"


class DbmError(ValueError):
    pass


class UnknownVariable(DbmError):
    pass


def encode(value, scale: int = 1, strict: bool = False) -> int:
    """Raw bound for ``<= value`` (or ``< value``); ``None`` is +inf."""
    if value is None:
        return INF
    v = Fraction(value) * scale
    if v.denominator != 1:
        raise DbmError(f"bound {value} is not a multiple of 1/{scale}")
    return 2 * v.numerator + (0 if strict else 1)


def decode(raw: int, scale: int = 1):
    """``(value, strict)`` for a raw bound; value is None for +inf."""
    raw = int(raw)
    if raw >= INF:
        return None, False
    return Fraction(raw >> 1, scale), not raw & 1


def _add(a: int, b: int) -> int:
    if a >= INF or b >= INF:
        return INF
    return a + b - ((a | b) & 1)


class Dbm:
    """Conjunction of atomic constraints over named variables.

    Instances are treated as immutable values: every operation returns a new
    matrix. Equality and hashing go through the canonical form and ignore the
    order in which variables are listed.
    """

    __slots__ = ("vars", "scale", "_m", "_canonical", "_consistent", "_index", "_hash")

    def __init__(self, vars: Sequence[str], matrix, scale: int = 1, canonical=False, consistent=None):
        self.vars = tuple(vars)
        self.scale = scale
        self._m = matrix
        self._canonical = canonical
        self._consistent = consistent
        self._index = None
        self._hash = None
        if len(set(self.vars)) != len(self.vars) or REF in self.vars:
            raise DbmError(f"invalid variable list {self.vars}")

    # construction

    @classmethod
    def universe(cls, vars: Sequence[str], scale: int = 1) -> "Dbm":
        n = len(vars) + 1
        m = np.full((n, n), INF, dtype=np.int64)
        np.fill_diagonal(m, LE_ZERO)
        return cls(vars, m, scale, canonical=True, consistent=True)

    @classmethod
    def from_constraints(cls, vars, constraints, scale: int = 1) -> "Dbm":
        """Build from ``(x, y, c)`` or ``(x, y, c, strict)`` tuples meaning ``x - y <= c``."""
        d = cls.universe(vars, scale)
        m = d._m
        for con in constraints:
            x, y, c = con[:3]
            strict = con[3] if len(con) > 3 else False
            i, j = d.index(x), d.index(y)
            m[i, j] = min(m[i, j], encode(c, scale, strict))
        d._canonical = False
        d._consistent = None
        return d

    def _new(self, vars, matrix, canonical=False, consistent=None) -> "Dbm":
        return Dbm(vars, matrix, self.scale, canonical, consistent)

    # accessors

    @property
    def matrix(self) -> np.ndarray:
        """Read-only view of the raw bound matrix."""
        view = self._m.view()
        view.flags.writeable = False
        return view

    @property
    def is_canonical(self) -> bool:
        return self._canonical

    def index(self, x: str) -> int:
        if x == REF:
            return 0
        if self._index is None:
            self._index = {v: i + 1 for i, v in enumerate(self.vars)}
        try:
            return self._index[x]
        except KeyError:
            raise UnknownVariable(f"unknown variable {x!r}") from None

    def raw(self, x: str, y: str) -> int:
        return int(self._m[self.index(x), self.index(y)])

    def bound(self, x: str, y: str = REF):
        """Upper bound on ``x - y`` as a Fraction, or None when unbounded."""
        return decode(self.raw(x, y), self.scale)[0]

    def is_strict(self, x: str, y: str = REF) -> bool:
        return decode(self.raw(x, y), self.scale)[1]

    def atoms(self):
        """Finite off-diagonal entries as ``(x, y, value, strict)`` tuples."""
        names = (REF,) + self.vars
        out = []
        n = len(names)
        for i in range(n):
            for j in range(n):
                if i != j and self._m[i, j] < INF:
                    value, strict = decode(self._m[i, j], self.scale)
                    out.append((names[i], names[j], value, strict))
        return out

    # closure and consistency

    def canonical(self) -> "Dbm":
        if self._canonical:
            return self
        m = self._m.copy()
        ok = kernels.close(m)
        return self._new(self.vars, m, canonical=True, consistent=ok)

    def is_consistent(self) -> bool:
        return bool(self.canonical()._consistent)

    # constraint operations

    def conjoin(self, x: str, y: str, c, strict: bool = False) -> "Dbm":
        """Add ``x - y <= c`` (``< c`` when strict)."""
        return self._tighten(self.index(x), self.index(y), encode(c, self.scale, strict))

    def conjoin_all(self, constraints: Iterable) -> "Dbm":
        d = self
        for con in constraints:
            d = d.conjoin(*con)
        return d

    def _tighten(self, i: int, j: int, raw: int) -> "Dbm":
        if raw >= self._m[i, j]:
            return self
        m = self._m.copy()
        m[i, j] = raw
        if self._canonical and self._consistent:
            ok = kernels.close_edge(m, i, j)
            return self._new(self.vars, m, canonical=True, consistent=ok)
        if self._canonical:  # already inconsistent
            return self._new(self.vars, m, canonical=True, consistent=False)
        return self._new(self.vars, m)

    def extend(self, new_vars: Sequence[str]) -> "Dbm":
        """Add unconstrained variables."""
        new_vars = tuple(new_vars)
        clash = set(new_vars) & set(self.vars)
        if clash or len(set(new_vars)) != len(new_vars):
            raise DbmError(f"variable name collision: {sorted(clash) or new_vars}")
        n, k = len(self.vars) + 1, len(new_vars)
        m = np.full((n + k, n + k), INF, dtype=np.int64)
        m[:n, :n] = self._m
        for i in range(n, n + k):
            m[i, i] = LE_ZERO
        return self._new(self.vars + new_vars, m, self._canonical, self._consistent)

    def rename(self, mapping) -> "Dbm":
        """Relabel variables; entries are untouched."""
        for x in mapping:
            self.index(x)
        new = tuple(mapping.get(v, v) for v in self.vars)
        if len(set(new)) != len(new) or REF in new:
            raise DbmError(f"renaming {dict(mapping)} collides")
        return self._new(new, self._m, self._canonical, self._consistent)

    def reorder(self, vars: Sequence[str]) -> "Dbm":
        vars = tuple(vars)
        if vars == self.vars:
            return self
        if sorted(vars) != sorted(self.vars):
            raise DbmError(f"variable mismatch: {self.vars} vs {vars}")
        idx = [0] + [self.index(v) for v in vars]
        return self._new(vars, self._m[np.ix_(idx, idx)].copy(), self._canonical, self._consistent)

    def project_out(self, drop: Iterable[str]) -> "Dbm":
        """Existentially eliminate variables (closure first, then delete rows/columns)."""
        drop = set(drop)
        for x in drop:
            self.index(x)
        c = self.canonical()
        if not drop:
            return c
        keep_vars = tuple(v for v in self.vars if v not in drop)
        idx = [0] + [c.index(v) for v in keep_vars]
        return self._new(keep_vars, c._m[np.ix_(idx, idx)].copy(), True, c._consistent)

    def substitute_shift(self, shifted: Iterable[str], by: str) -> "Dbm":
        """Replace each ``x`` in ``shifted`` by ``x + by`` and keep ``x >= 0``.

        Differences among shifted variables are preserved and their simple
        bounds become the differences against ``by``. Relations between
        shifted and other variables (``by`` included) are dropped, so the
        result is exact on the shifted variables once ``by`` is eliminated,
        which is how class firing uses it (every other variable is shifted).
        """
        shifted = list(shifted)
        b = self.index(by)
        sidx = [self.index(x) for x in shifted]
        if b in sidx:
            raise DbmError("cannot shift a variable by itself")
        c = self.canonical()
        if not sidx:
            return c
        m = c._m.copy()
        src = c._m
        sset = set(sidx)
        others = [i for i in range(1, len(self.vars) + 1) if i not in sset]
        for i in sidx:
            m[i, 0] = src[i, b]
            m[0, i] = min(src[b, i], LE_ZERO)
            for j in others:
                m[i, j] = INF
                m[j, i] = INF
        return self._new(self.vars, m, consistent=None if c._consistent else False)

    def includes(self, other: "Dbm") -> bool:
        """True iff every solution of ``other`` is a solution of ``self``."""
        _check_same_vars(self, other)
        b = other.canonical().reorder(self.vars)
        if not b._consistent:
            return True
        a = self.canonical()
        if not a._consistent:
            return False
        return bool(np.all(b._m <= a._m))

    def triangular_view(self) -> "Dbm":
        """Drop all simple bounds, keeping only differences between variables."""
        c = self.canonical()
        m = c._m.copy()
        m[0, 1:] = INF
        m[1:, 0] = INF
        return self._new(self.vars, m, canonical=bool(c._consistent), consistent=c._consistent)

    # value semantics

    def _key(self):
        c = self.canonical()
        if not c._consistent:
            return (frozenset(self.vars), self.scale, None)
        order = sorted(self.vars)
        s = c.reorder(order)
        return (tuple(order), self.scale, s._m.tobytes())

    def __eq__(self, other):
        if not isinstance(other, Dbm):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def constraints(self) -> list:
        """Sorted ``x - y <= c`` strings of the canonical form (debug serialization)."""
        c = self.canonical()
        if not c._consistent:
            return ["false"]
        out = []
        for x, y, value, strict in c.atoms():
            out.append(f"{x} - {y} {'<' if strict else '<='} {_fmt(value)}")
        return sorted(out)

    def __repr__(self):
        return f"Dbm({', '.join(self.constraints()) or 'true'})"


def _fmt(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _check_same_vars(a: Dbm, b: Dbm):
    if set(a.vars) != set(b.vars):
        raise DbmError(f"variable mismatch: {a.vars} vs {b.vars}")
    if a.scale != b.scale:
        raise DbmError(f"scale mismatch: {a.scale} vs {b.scale}")


# module-level operations


def canonicalize(d: Dbm) -> Dbm:
    return d.canonical()


def is_consistent(d: Dbm) -> bool:
    return d.is_consistent()


def enclosing(ds: Sequence[Dbm]) -> Dbm:
    """Smallest DBM containing the union: entry-wise maximum of canonical forms."""
    if not ds:
        raise DbmError("enclosing of an empty list")
    first = ds[0]
    live = []
    for d in ds:
        _check_same_vars(first, d)
        c = d.canonical().reorder(first.vars)
        if c._consistent:
            live.append(c._m)
    if not live:
        return first.canonical()
    m = np.maximum.reduce(live) if len(live) > 1 else live[0].copy()
    return Dbm(first.vars, m, first.scale, canonical=True, consistent=True)


def difference(a: Dbm, b: Dbm) -> list:
    """Disjoint zones whose union is ``sol(a) - sol(b)``.

    Constraints of ``b`` are negated one at a time in row-major order; the
    negation of ``x - y <= c`` is the strict ``y - x < -c``.
    """
    _check_same_vars(a, b)
    rest = a.canonical()
    if not rest._consistent:
        return []
    bc = b.canonical().reorder(a.vars)
    if not bc._consistent:
        return [rest]
    out = []
    bm = bc._m
    n = bm.shape[0]
    for i in range(n):
        for j in range(n):
            r = int(bm[i, j])
            if i == j or r >= INF or rest._m[i, j] <= r:
                continue
            piece = rest._tighten(j, i, 1 - r)
            if piece._consistent:
                out.append(piece)
            rest = rest._tighten(i, j, r)
            if not rest._consistent:
                return out
    return out


def convex_union(ds: Sequence[Dbm]):
    """The enclosing DBM when it equals the union of ``ds``, else None.

    Subtracts ``ds[0] .. ds[-2]`` from the enclosing DBM in list order and
    checks that what remains lies inside ``ds[-1]``.
    """
    if not ds:
        raise DbmError("convex union of an empty list")
    hull = enclosing(ds)
    residue = [hull]
    for d in ds[:-1]:
        residue = [piece for z in residue for piece in difference(z, d)]
        if not residue:
            return hull
    last = ds[-1]
    if all(last.includes(z) for z in residue):
        return hull
    return None


def triangular_view(d: Dbm) -> Dbm:
    return d.triangular_view()
