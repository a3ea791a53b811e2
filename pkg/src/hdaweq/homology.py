"""Cubical homology, the labeling chain map and homology languages.

The labeling chain map sends an n-cube x to the wedge of the letter sums of
its starting edges, an element of the exterior algebra on the alphabet.
Its target is regarded as a complex with zero differential, so being a
chain map means that it kills every boundary.

Consequently the image of the induced map on homology in degree n equals
the image of the n-cycles: two cycles that differ by a boundary have the
same image.  The homology language is therefore computed as the span of
the labels of a basis of ker(d_n), without forming homology quotients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .hda import Hda
from .linalg import Echelon, Field, get_field, kernel, rank
from .precubical import PrecubicalError, PrecubicalSet

Monomial = tuple[str, ...]


# -- chain complex ------------------------------------------------------------


@dataclass(frozen=True)
class ChainComplex:
    """Integer boundary data; reduced into a field on demand.

    ``boundary[n][x]`` is the boundary of the n-cube x as a dict from
    (n-1)-cubes to integer coefficients.
    """

    bases: Mapping[int, tuple[str, ...]]
    boundary: Mapping[int, Mapping[str, dict]]

    @property
    def top(self) -> int:
        return max(self.bases, default=-1)

    def columns(self, n: int) -> list[dict]:
        return [self.boundary[n][x] for x in self.bases.get(n, ())] if n > 0 else [{} for _ in self.bases.get(0, ())]

    def matrix(self, n: int, field: str | Field = "gf2") -> list[list]:
        """Dense d_n with rows indexed by (n-1)-cubes and columns by n-cubes."""
        F = get_field(field)
        rows = self.bases.get(n - 1, ())
        cols = self.bases.get(n, ())
        return [[F.coerce(self.boundary[n][x].get(r, 0)) if n > 0 else 0 for x in cols] for r in rows]

    def squares_to_zero(self) -> bool:
        for n in range(2, self.top + 1):
            for x in self.bases[n]:
                total: dict[str, int] = {}
                for f, c in self.boundary[n][x].items():
                    for g, e in self.boundary[n - 1][f].items():
                        total[g] = total.get(g, 0) + c * e
                if any(total.values()):
                    return False
        return True


def boundary_of(P: PrecubicalSet, x: str) -> dict[str, int]:
    """sum_i (-1)^i (d0_i x - d1_i x) with integer coefficients."""
    out: dict[str, int] = {}
    if P.dims[x] == 0:
        return out
    front, back = P.faces[x]
    for i, (f, b) in enumerate(zip(front, back), 1):
        sign = -1 if i % 2 else 1
        out[f] = out.get(f, 0) + sign
        out[b] = out.get(b, 0) - sign
    return {k: v for k, v in out.items() if v}


def chain_complex(P: PrecubicalSet) -> ChainComplex:
    bases = {n: P.cubes(n) for n in range(P.dim + 1)}
    boundary = {n: {x: boundary_of(P, x) for x in bases[n]} for n in bases}
    C = ChainComplex(bases, boundary)
    if not C.squares_to_zero():
        raise PrecubicalError("d o d != 0; the precubical identities must be violated")
    return C


def betti(P: PrecubicalSet, field: str | Field = "gf2") -> list[int]:
    F = get_field(field)
    C = chain_complex(P)
    ranks = {n: rank(C.columns(n), F) if n > 0 else 0 for n in C.bases}
    return [len(C.bases[n]) - ranks[n] - ranks.get(n + 1, 0) for n in range(C.top + 1)]


def starting_edge(P: PrecubicalSet, x: str, i: int) -> str:
    """e_i x = d0_1 ... d0_{i-1} d0_{i+1} ... d0_n x."""
    n = P.dims[x]
    if not 1 <= i <= n:
        raise PrecubicalError(f"starting edge e_{i} undefined on the {n}-cube {x!r}")
    c = x
    for j in range(n, 0, -1):
        if j != i:
            c = P.face(c, 0, j)
    return c


# -- exterior algebra ---------------------------------------------------------


def wedge_monomials(m1: Monomial, m2: Monomial) -> tuple[int, Monomial] | None:
    """Sign and sorted product of two sorted monomials, or None if they overlap."""
    if set(m1) & set(m2):
        return None
    inversions = sum(1 for a in m1 for b in m2 if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(m1 + m2))


def sort_monomial(letters: Iterable[str]) -> tuple[int, Monomial] | None:
    letters = list(letters)
    if len(set(letters)) != len(letters):
        return None
    inversions = sum(1 for p in range(len(letters)) for q in range(p + 1, len(letters)) if letters[p] > letters[q])
    return (-1 if inversions % 2 else 1), tuple(sorted(letters))


@dataclass(frozen=True)
class ExteriorElement:
    """A finite linear combination of wedge monomials over a field."""

    field: Field
    terms: Mapping[Monomial, object]

    @classmethod
    def make(cls, field: str | Field, terms: Mapping[Monomial, object]) -> "ExteriorElement":
        F = get_field(field)
        clean = {}
        for m, c in terms.items():
            c = F.coerce(c)
            if c:
                clean[tuple(m)] = c
        return cls(F, clean)

    @classmethod
    def unit(cls, field: str | Field = "gf2") -> "ExteriorElement":
        return cls.make(field, {(): 1})

    @classmethod
    def letter_sum(cls, field: str | Field, word: Iterable[str]) -> "ExteriorElement":
        terms: dict[Monomial, int] = {}
        for a in word:
            terms[(a,)] = terms.get((a,), 0) + 1
        return cls.make(field, terms)

    def __add__(self, other: "ExteriorElement") -> "ExteriorElement":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return ExteriorElement.make(self.field, terms)

    def scale(self, c) -> "ExteriorElement":
        return ExteriorElement.make(self.field, {m: c * v for m, v in self.terms.items()})

    def wedge(self, other: "ExteriorElement") -> "ExteriorElement":
        terms: dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                prod = wedge_monomials(m1, m2)
                if prod is None:
                    continue
                sign, m = prod
                terms[m] = terms.get(m, 0) + sign * c1 * c2
        return ExteriorElement.make(self.field, terms)

    __xor__ = wedge

    def map_letters(self, mapping: Mapping[str, str]) -> "ExteriorElement":
        """Lambda(sigma): the algebra map induced by a letter map."""
        terms: dict[Monomial, object] = {}
        for m, c in self.terms.items():
            s = sort_monomial(mapping[a] for a in m)
            if s is None:
                continue
            sign, mono = s
            terms[mono] = terms.get(mono, 0) + sign * c
        return ExteriorElement.make(self.field, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        return format_vector(sorted(self.terms.items()))


def format_monomial(m: Monomial) -> str:
    return "^".join(m) if m else "1"


def format_vector(items) -> str:
    if not items:
        return "0"
    parts = []
    for m, c in items:
        mono = format_monomial(m)
        neg = c < 0
        mag = -c if neg else c
        body = mono if mag == 1 else f"{mag}*{mono}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def cube_label(A: Hda, x: str, field: str | Field = "gf2") -> ExteriorElement:
    """The labeling chain map on a single cube."""
    P = A.cubes
    out = ExteriorElement.unit(field)
    for i in range(1, P.dims[x] + 1):
        out = out.wedge(ExteriorElement.letter_sum(field, A.labels[starting_edge(P, x, i)]))
    return out


def labeling_chain_map(A: Hda, field: str | Field = "gf2") -> dict[int, dict[str, ExteriorElement]]:
    P = A.cubes
    return {n: {x: cube_label(A, x, field) for x in P.cubes(n)} for n in range(P.dim + 1)}


# -- homology languages ------------------------------------------------------------


@dataclass(frozen=True)
class HomologyLanguage:
    """A graded subspace of the exterior algebra, stored as reduced echelon bases."""

    field: Field
    letters: tuple[str, ...]
    basis: Mapping[int, tuple[tuple, ...]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomologyLanguage):
            return NotImplemented
        return hl_eq(self, other)

    __hash__ = None

    @classmethod
    def span(cls, field: str | Field, letters: Iterable[str], vectors: Iterable[Mapping[Monomial, object]]) -> "HomologyLanguage":
        F = get_field(field)
        by_degree: dict[int, Echelon] = {}
        for v in vectors:
            for m, c in v.items():
                by_degree.setdefault(len(m), Echelon(F))
            for n in {len(m) for m in v}:
                by_degree[n].add({m: c for m, c in v.items() if len(m) == n})
        basis = {n: tuple(e.basis()) for n, e in sorted(by_degree.items()) if len(e)}
        return cls(F, tuple(sorted(letters)), basis)

    @classmethod
    def exterior(cls, field: str | Field, letters: Iterable[str], generators: Iterable[str] | None = None) -> "HomologyLanguage":
        """Lambda(S): the full exterior algebra on ``generators`` inside the ambient letters."""
        letters = tuple(sorted(letters))
        gens = sorted(letters if generators is None else generators)
        vecs = [{m: 1} for n in range(len(gens) + 1) for m in itertools.combinations(gens, n)]
        return cls.span(field, letters, vecs)

    def degree(self, n: int) -> tuple[tuple, ...]:
        return self.basis.get(n, ())

    def dims(self) -> list[int]:
        top = max(self.basis, default=-1)
        return [len(self.degree(n)) for n in range(top + 1)]

    def vectors(self):
        for n in sorted(self.basis):
            for row in self.basis[n]:
                yield dict(row)

    def lines(self) -> list[str]:
        return [format_vector(row) for n in sorted(self.basis) for row in self.basis[n]]

    def embed(self, mapping: Mapping[str, str], letters: Iterable[str]) -> "HomologyLanguage":
        """Image under the letter map into a larger ambient alphabet."""
        vecs = [ExteriorElement.make(self.field, v).map_letters(mapping).terms for v in self.vectors()]
        return HomologyLanguage.span(self.field, letters, vecs)


def homology_language(A: Hda, field: str | Field = "gf2") -> HomologyLanguage:
    F = get_field(field)
    P = A.cubes
    C = chain_complex(P)
    vectors = []
    for n in range(P.dim + 1):
        cubes = C.bases[n]
        labels = [cube_label(A, x, F) for x in cubes]
        for z in kernel(C.columns(n), F):
            total: dict[Monomial, object] = {}
            for j, c in z.items():
                for m, v in labels[j].terms.items():
                    total[m] = total.get(m, 0) + c * v
            vectors.append(total)
    return HomologyLanguage.span(F, A.alphabet.letters, vectors)


def _check_ambient(L1: HomologyLanguage, L2: HomologyLanguage) -> None:
    if L1.letters != L2.letters or L1.field.name != L2.field.name:
        raise ValueError("homology languages live in different exterior algebras")


def hl_leq(L1: HomologyLanguage, L2: HomologyLanguage) -> bool:
    _check_ambient(L1, L2)
    for n, rows in L1.basis.items():
        ech = Echelon(L2.field)
        for row in L2.degree(n):
            ech.add(dict(row))
        if not all(ech.contains(dict(r)) for r in rows):
            return False
    return True


def hl_eq(L1: HomologyLanguage, L2: HomologyLanguage) -> bool:
    _check_ambient(L1, L2)
    return dict(L1.basis) == dict(L2.basis)


def hl_witness(L1: HomologyLanguage, L2: HomologyLanguage) -> tuple[int, tuple] | None:
    """A basis element of L1 outside L2, with its degree."""
    _check_ambient(L1, L2)
    for n in sorted(L1.basis):
        ech = Echelon(L2.field)
        for row in L2.degree(n):
            ech.add(dict(row))
        for r in L1.basis[n]:
            if not ech.contains(dict(r)):
                return n, r
    return None


def hl_wedge(L1: HomologyLanguage, L2: HomologyLanguage) -> HomologyLanguage:
    _check_ambient(L1, L2)
    F = L1.field
    vecs = []
    for v in L1.vectors():
        for w in L2.vectors():
            vecs.append(ExteriorElement.make(F, v).wedge(ExteriorElement.make(F, w)).terms)
    return HomologyLanguage.span(F, L1.letters, vecs)


def hl_sum(L1: HomologyLanguage, L2: HomologyLanguage) -> HomologyLanguage:
    _check_ambient(L1, L2)
    return HomologyLanguage.span(L1.field, L1.letters, list(L1.vectors()) + list(L2.vectors()))
