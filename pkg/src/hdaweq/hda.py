"""Higher-dimensional automata over concurrent alphabets."""

from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import precubical as pc
from .precubical import Path, PrecubicalSet, ValidationReport
from .tracemonoid import (
    AlphabetMorphism,
    ConcurrentAlphabet,
    Word,
    coprod_alphabet,
    tag,
    tensor_alphabet,
)


@dataclass(frozen=True, eq=False)
class Hda:
    cubes: PrecubicalSet
    initial: str
    finals: frozenset[str]
    alphabet: ConcurrentAlphabet
    labels: Mapping[str, Word]

    def __post_init__(self):
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "labels", {e: tuple(w) for e, w in self.labels.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hda):
            return NotImplemented
        return (
            self.cubes == other.cubes
            and self.initial == other.initial
            and self.finals == other.finals
            and self.alphabet == other.alphabet
            and self.labels == other.labels
        )

    __hash__ = None

    def label(self, edge: str) -> Word:
        return self.labels[edge]

    def counts(self) -> list[int]:
        return self.cubes.counts()

    def restrict(self, keep: Iterable[str]) -> "Hda":
        """Sub-HDA on a face-closed set of cubes that contains the initial state."""
        P = self.cubes.restrict(keep)
        return Hda(
            P,
            self.initial,
            frozenset(v for v in self.finals if v in P),
            self.alphabet,
            {e: w for e, w in self.labels.items() if e in P},
        )

    def remove(self, drop: Iterable[str]) -> "Hda":
        drop = set(drop)
        return self.restrict(c for c in self.cubes.dims if c not in drop)


def validate_hda(A: Hda) -> ValidationReport:
    P = A.cubes
    report = pc.validate(P)
    errors = list(report.errors)
    if P.dims.get(A.initial) != 0:
        errors.append(f"initial state {A.initial!r} is not a vertex")
    for v in sorted(A.finals):
        if P.dims.get(v) != 0:
            errors.append(f"final state {v!r} is not a vertex")
    for e in P.edges:
        if e not in A.labels:
            errors.append(f"edge {e!r} has no label")
    for e, w in A.labels.items():
        if P.dims.get(e) != 1:
            errors.append(f"label given for {e!r}, which is not an edge")
        for a in w:
            if a not in A.alphabet:
                errors.append(f"edge {e!r}: letter {a!r} is not in the alphabet")
    if errors:
        return ValidationReport(tuple(errors))
    for x in P.cubes(2):
        (f1, f2), (b1, b2) = P.faces[x]
        for i, (f, b) in enumerate(((f1, b1), (f2, b2)), 1):
            if A.labels[f] != A.labels[b]:
                errors.append(
                    f"parallel edges of {x!r} differ: lambda(d0_{i}) = {''.join(A.labels[f])!r}"
                    f" but lambda(d1_{i}) = {''.join(A.labels[b])!r}"
                )
        for a in sorted(set(A.labels[f1])):
            for b in sorted(set(A.labels[f2])):
                if A.alphabet.dependent(a, b):
                    errors.append(f"square {x!r} has dependent letters {a} and {b} on its two directions")
    return ValidationReport(tuple(errors))


def extended_label(A: Hda, omega: Path) -> Word:
    return tuple(a for e in omega.edges for a in A.labels[e])


# -- products and sums -----------------------------------------------------


def tensor_hda(A: Hda, B: Hda) -> Hda:
    P = pc.tensor(A.cubes, B.cubes)
    labels = {}
    for x, m in A.cubes.dims.items():
        for y, n in B.cubes.dims.items():
            if m == 1 and n == 0:
                labels[pc.pair_id(x, y)] = tuple(tag("L", a) for a in A.labels[x])
            elif m == 0 and n == 1:
                labels[pc.pair_id(x, y)] = tuple(tag("R", b) for b in B.labels[y])
    labels = {e: labels[e] for e in P.edges}
    finals = frozenset(pc.pair_id(f, g) for f in A.finals for g in B.finals)
    return Hda(P, pc.pair_id(A.initial, B.initial), finals, tensor_alphabet(A.alphabet, B.alphabet), labels)


def coprod_hda(A: Hda, B: Hda) -> Hda:
    """The wedge of A and B at their initial states."""
    T = tensor_hda(A, B)
    keep = {pc.pair_id(x, B.initial) for x in A.cubes.dims}
    keep |= {pc.pair_id(A.initial, y) for y in B.cubes.dims}
    finals = {pc.pair_id(f, B.initial) for f in A.finals} | {pc.pair_id(A.initial, g) for g in B.finals}
    P = T.cubes.restrict(keep)
    labels = {e: w for e, w in T.labels.items() if e in keep}
    return Hda(P, T.initial, frozenset(finals), coprod_alphabet(A.alphabet, B.alphabet), labels)


def relabel_letters(A: Hda, mapping: Mapping[str, str], alphabet: ConcurrentAlphabet) -> Hda:
    """Rename letters through ``mapping`` into ``alphabet``."""
    labels = {e: tuple(mapping[a] for a in w) for e, w in A.labels.items()}
    return Hda(A.cubes, A.initial, A.finals, alphabet, labels)


def rename_cubes(A: Hda, mapping: Mapping[str, str]) -> Hda:
    P = A.cubes
    cubes = []
    for c, n in P.dims.items():
        if n == 0:
            cubes.append((mapping[c], 0))
        else:
            front, back = P.faces[c]
            cubes.append((mapping[c], n, [mapping[f] for f in front], [mapping[b] for b in back]))
    return Hda(
        PrecubicalSet.build(cubes),
        mapping[A.initial],
        frozenset(mapping[v] for v in A.finals),
        A.alphabet,
        {mapping[e]: w for e, w in A.labels.items()},
    )


# -- accessibility -----------------------------------------------------------


def _closure(P: PrecubicalSet, seeds: Iterable[str], forward: bool) -> set[str]:
    seen = set(seeds)
    todo = deque(seen)
    while todo:
        v = todo.popleft()
        edges = P.out_edges(v) if forward else P.in_edges(v)
        for e in edges:
            w = P.target(e) if forward else P.source(e)
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def reachable_set(A: Hda) -> set[str]:
    return _closure(A.cubes, [A.initial], True)


def coreachable_set(A: Hda) -> set[str]:
    return _closure(A.cubes, A.finals, False)


def is_accessible(A: Hda) -> bool:
    return len(reachable_set(A)) == len(A.cubes.vertices)


def is_coaccessible(A: Hda) -> bool:
    return len(coreachable_set(A)) == len(A.cubes.vertices)


def accessible_part(A: Hda) -> Hda:
    """Cubes all of whose vertices are reachable; the alphabet is kept whole."""
    reach = reachable_set(A)
    keep = [c for c in A.cubes.dims if pc.vertices_of(A.cubes, c) <= reach]
    return A.restrict(keep)


# -- morphisms ---------------------------------------------------------------


@dataclass(frozen=True)
class HdaMorphismCandidate:
    cube_map: Mapping[str, str]
    letter_map: Mapping[str, str]


def check_morphism(A: Hda, B: Hda, cand: HdaMorphismCandidate) -> ValidationReport:
    f, errors = cand.cube_map, []
    for c, n in A.cubes.dims.items():
        if c not in f:
            errors.append(f"cube {c!r} is not mapped")
        elif B.cubes.dims.get(f[c]) != n:
            errors.append(f"cube {c!r} maps to {f[c]!r} of the wrong dimension")
    if errors:
        return ValidationReport(tuple(errors))
    for c, (front, back) in A.cubes.faces.items():
        for k, side in enumerate((front, back)):
            for i, face in enumerate(side, 1):
                if f[face] != B.cubes.face(f[c], k, i):
                    errors.append(f"d^{k}_{i} does not commute on {c!r}")
    sigma = AlphabetMorphism(A.alphabet, B.alphabet, cand.letter_map)
    errors += sigma.errors()
    if f[A.initial] != B.initial:
        errors.append("initial state is not preserved")
    for v in sorted(A.finals):
        if f[v] not in B.finals:
            errors.append(f"final state {v!r} maps to a non-final state")
    if not sigma.errors():
        for e in A.cubes.edges:
            if B.labels[f[e]] != sigma.word(A.labels[e]):
                errors.append(f"label of {e!r} is not preserved")
    return ValidationReport(tuple(errors))


def coproduct_injection(A: Hda, B: Hda, side: str = "L") -> HdaMorphismCandidate:
    """j_A: x -> (x, I_B) or j_B: y -> (I_A, y), with letters tagged accordingly."""
    if side == "L":
        cubes = {x: pc.pair_id(x, B.initial) for x in A.cubes.dims}
        letters = {a: tag("L", a) for a in A.alphabet.letters}
    else:
        cubes = {y: pc.pair_id(A.initial, y) for y in B.cubes.dims}
        letters = {b: tag("R", b) for b in B.alphabet.letters}
    return HdaMorphismCandidate(cubes, letters)


# -- isomorphism ---------------------------------------------------------------


def find_isomorphism(A: Hda, B: Hda) -> dict[str, str] | None:
    """A cube bijection A -> B preserving faces, labels, initial and final states.

    Both automata must share the same concurrent alphabet.  Backtracking by
    increasing dimension; cubes of A are matched in an order where the faces
    of a cube are always assigned before the cube itself.
    """
    if A.alphabet != B.alphabet or A.counts() != B.counts():
        return None
    PA, PB = A.cubes, B.cubes

    def signature(H: Hda, c: str):
        P = H.cubes
        n = P.dims[c]
        if n == 0:
            ins = sorted(H.labels[e] for e in P.in_edges(c))
            outs = sorted(H.labels[e] for e in P.out_edges(c))
            return (0, c == H.initial, c in H.finals, tuple(ins), tuple(outs))
        if n == 1:
            return (1, H.labels[c], len(P.cofaces(c)))
        return (n, len(P.cofaces(c)))

    sigA = {c: signature(A, c) for c in PA.dims}
    sigB = {c: signature(B, c) for c in PB.dims}
    order = []
    # vertices in BFS order from the initial state keep the branching low
    seen = set()
    for root in [A.initial] + sorted(PA.vertices):
        if root in seen:
            continue
        seen.add(root)
        todo = deque([root])
        while todo:
            v = todo.popleft()
            order.append(v)
            for e in PA.out_edges(v) + PA.in_edges(v):
                for w in (PA.source(e), PA.target(e)):
                    if w not in seen:
                        seen.add(w)
                        todo.append(w)
    for n in range(1, PA.dim + 1):
        order += list(PA.cubes(n))

    fwd: dict[str, str] = {}
    used: set[str] = set()

    def candidates(c: str):
        n = PA.dims[c]
        if n == 0:
            # prefer vertices adjacent to already mapped neighbours
            for e in PA.in_edges(c):
                s = PA.source(e)
                if s in fwd:
                    return [PB.target(g) for g in PB.out_edges(fwd[s])]
            for e in PA.out_edges(c):
                t = PA.target(e)
                if t in fwd:
                    return [PB.source(g) for g in PB.in_edges(fwd[t])]
            return list(PB.vertices)
        first = fwd[PA.faces[c][0][0]]
        return list(PB.cofaces(first))

    def consistent(c: str, d: str) -> bool:
        if d in used or sigA[c] != sigB[d]:
            return False
        if PA.dims[c] > 0:
            fa, ba = PA.faces[c]
            fb, bb = PB.faces[d]
            if any(fwd[x] != y for x, y in zip(fa + ba, fb + bb)):
                return False
        return True

    def search(pos: int) -> bool:
        if pos == len(order):
            return True
        c = order[pos]
        for d in dict.fromkeys(candidates(c)):
            if consistent(c, d):
                fwd[c] = d
                used.add(d)
                if search(pos + 1):
                    return True
                del fwd[c]
                used.discard(d)
        return False

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, len(order) + 100))
    try:
        found = search(0)
    finally:
        sys.setrecursionlimit(limit)
    return dict(fwd) if found else None


def isomorphic(A: Hda, B: Hda) -> bool:
    return find_isomorphism(A, B) is not None


# -- canonical dependence ----------------------------------------------------


def canonical_alphabet(P: PrecubicalSet, labels: Mapping[str, Word], letters: Iterable[str] | None = None) -> ConcurrentAlphabet:
    """Declare two letters dependent unless some square carries both on its boundary.

    The two letters must sit on the two different directions of the square.
    A square with the same letter in both directions has no canonical
    relation and raises ``ValueError``.
    """
    if letters is None:
        letters = {a for w in labels.values() for a in w}
    independent = set()
    for x in P.cubes(2):
        (f1, f2), _ = P.faces[x]
        for a in labels[f1]:
            for b in labels[f2]:
                if a == b:
                    raise ValueError(f"square {x!r} carries {a!r} in both directions")
                independent.add((a, b))
    return ConcurrentAlphabet.from_independence(letters, independent)
