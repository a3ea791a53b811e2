"""Exact row reduction over GF(2) and the rationals.

Vectors are sparse dicts from sortable keys to nonzero field elements.  The
echelon forms produced here are fully reduced with the pivot of each row at
its smallest key, so two spans are equal exactly when their reduced bases
are equal.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable


class Field:
    name = ""

    def coerce(self, n):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.name


class GF2(Field):
    name = "gf2"

    def coerce(self, n):
        return int(n) & 1

    def inv(self, a):
        if a != 1:
            raise ZeroDivisionError("division by zero in GF(2)")
        return 1


class Rationals(Field):
    name = "q"

    def coerce(self, n):
        return Fraction(n)

    def inv(self, a):
        return 1 / Fraction(a)


FIELDS = {"gf2": GF2(), "q": Rationals()}


def get_field(field: str | Field) -> Field:
    if isinstance(field, Field):
        return field
    try:
        return FIELDS[field]
    except KeyError:
        raise ValueError(f"unknown field {field!r}; expected one of {sorted(FIELDS)}") from None


Vector = dict


def normalize(vec: dict, F: Field) -> dict:
    out = {}
    for k, c in vec.items():
        c = F.coerce(c)
        if c:
            out[k] = c
    return out


def _axpy(target: dict, c, source: dict, F: Field) -> None:
    """target -= c * source, in place."""
    for k, s in source.items():
        v = F.coerce(target.get(k, 0) - c * s)
        if v:
            target[k] = v
        else:
            target.pop(k, None)


class Echelon:
    """Incrementally maintained fully reduced row echelon form."""

    def __init__(self, F: Field):
        self.F = F
        self.rows: dict[Hashable, dict] = {}

    def reduce(self, vec: dict) -> dict:
        """The remainder of ``vec`` modulo the current span."""
        vec = dict(vec)
        for k in [k for k in vec if k in self.rows]:
            c = vec.get(k)
            if c:
                _axpy(vec, c, self.rows[k], self.F)
        return vec

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; returns False if it was already in the span."""
        vec = self.reduce(normalize(vec, self.F))
        if not vec:
            return False
        pivot = min(vec)
        inv = self.F.inv(vec[pivot])
        vec = {k: self.F.coerce(c * inv) for k, c in vec.items()}
        for row in self.rows.values():
            c = row.get(pivot)
            if c:
                _axpy(row, c, vec, self.F)
        self.rows[pivot] = vec
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(normalize(vec, self.F))

    def basis(self) -> list[tuple]:
        """Canonical basis: rows sorted by pivot, entries sorted by key."""
        return [tuple(sorted(self.rows[p].items())) for p in sorted(self.rows)]

    def __len__(self) -> int:
        return len(self.rows)


def rref(vectors: Iterable[dict], F: Field) -> list[tuple]:
    ech = Echelon(F)
    for v in vectors:
        ech.add(v)
    return ech.basis()


def rank(columns: Iterable[dict], F: Field) -> int:
    ech = Echelon(F)
    return sum(ech.add(v) for v in columns)


def kernel(columns: list[dict], F: Field) -> list[dict]:
    """Basis of the kernel of the linear map sending basis vector j to ``columns[j]``.

    Kernel vectors are dicts indexed by column position.  Each column is
    reduced against the span of its predecessors while tracking how it was
    combined, so a dependent column yields one kernel vector.
    """
    ech = Echelon(F)
    # Track combinations: pivot row -> dict of column positions.
    combos: dict[Hashable, dict] = {}
    out = []
    for j, col in enumerate(columns):
        vec = normalize(col, F)
        comb = {j: F.coerce(1)}
        for k in sorted(vec):
            if k not in ech.rows:
                continue
            c = vec.get(k)
            if c:
                _axpy(vec, c, ech.rows[k], F)
                _axpy(comb, c, combos[k], F)
        if not vec:
            out.append(comb)
            continue
        pivot = min(vec)
        inv = F.inv(vec[pivot])
        vec = {k: F.coerce(c * inv) for k, c in vec.items()}
        comb = {k: F.coerce(c * inv) for k, c in comb.items()}
        for p, row in ech.rows.items():
            c = row.get(pivot)
            if c:
                _axpy(row, c, vec, F)
                _axpy(combos[p], c, comb, F)
        ech.rows[pivot] = vec
        combos[pivot] = comb
    return out
