"""Finite precubical sets, the standard cubes, iterated faces, stars and paths.

A cube of dimension n > 0 carries two face tuples, ``front`` and ``back``,
indexed 1..n in the mathematical convention (``front[i-1]`` is d^0_i).
Vertices and edges are ordinary cubes of dimension 0 and 1.

Elements of the standard cube [0,1]^{(x)n} are written as strings over the
alphabet ``"0"``, ``"1"`` and ``"x"``, where ``"x"`` stands for the interval
[0,1].  So ``"xx"`` is the top cell of the square and ``"0x"`` its face d^0_1.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

MAX_ADDRESS_DIM = 12


class PrecubicalError(ValueError):
    """Raised for structurally impossible requests (unknown cube, bad index)."""


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self) -> bool:
        return self.ok

    def merged(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.errors + other.errors)


@dataclass(frozen=True, eq=False)
class PrecubicalSet:
    """An immutable finite precubical set.

    ``dims`` maps each cube id to its dimension and ``faces`` maps each cube
    of positive dimension to ``(front, back)``.  Insertion order of ``dims``
    is the canonical cube order used for chain bases and serialization.
    """

    dims: Mapping[str, int]
    faces: Mapping[str, tuple[tuple[str, ...], tuple[str, ...]]]
    _by_dim: dict = field(init=False, repr=False, compare=False)
    _cofaces: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_dim: dict[int, list[str]] = {}
        for c, n in self.dims.items():
            by_dim.setdefault(n, []).append(c)
        object.__setattr__(self, "_by_dim", {n: tuple(v) for n, v in by_dim.items()})
        object.__setattr__(self, "_cofaces", None)

    @classmethod
    def build(cls, cubes: Iterable[tuple]) -> "PrecubicalSet":
        """Build from ``(id, dim)`` or ``(id, dim, front, back)`` tuples."""
        dims: dict[str, int] = {}
        faces = {}
        for entry in cubes:
            cid, n = entry[0], entry[1]
            if cid in dims:
                raise PrecubicalError(f"duplicate cube id {cid!r}")
            dims[cid] = n
            if n > 0:
                faces[cid] = (tuple(entry[2]), tuple(entry[3]))
        return cls(dims, faces)

    # -- basic access ---------------------------------------------------

    def __contains__(self, cid: object) -> bool:
        return cid in self.dims

    def __len__(self) -> int:
        return len(self.dims)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrecubicalSet):
            return NotImplemented
        return list(self.dims.items()) == list(other.dims.items()) and dict(self.faces) == dict(other.faces)

    __hash__ = None

    @property
    def dim(self) -> int:
        return max(self._by_dim, default=-1)

    def cubes(self, n: int | None = None) -> tuple[str, ...]:
        if n is None:
            return tuple(self.dims)
        return self._by_dim.get(n, ())

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.cubes(0)

    @property
    def edges(self) -> tuple[str, ...]:
        return self.cubes(1)

    def counts(self) -> list[int]:
        return [len(self.cubes(n)) for n in range(self.dim + 1)]

    def face(self, cid: str, k: int, i: int) -> str:
        """d^k_i of ``cid`` with 1-based ``i``."""
        n = self.dims.get(cid)
        if n is None:
            raise PrecubicalError(f"unknown cube {cid!r}")
        if not 1 <= i <= n or k not in (0, 1):
            raise PrecubicalError(f"face d^{k}_{i} undefined on {n}-cube {cid!r}")
        return self.faces[cid][k][i - 1]

    def source(self, edge: str) -> str:
        return self.faces[edge][0][0]

    def target(self, edge: str) -> str:
        return self.faces[edge][1][0]

    def cofaces(self, cid: str) -> tuple[str, ...]:
        """Cubes having ``cid`` as an immediate face (any index, any side)."""
        if self._cofaces is None:
            co: dict[str, list[str]] = {c: [] for c in self.dims}
            for c, (front, back) in self.faces.items():
                for f in set(front) | set(back):
                    co[f].append(c)
            object.__setattr__(self, "_cofaces", {c: tuple(v) for c, v in co.items()})
        return self._cofaces[cid]

    def out_edges(self, v: str) -> list[str]:
        return sorted(e for e in self.cofaces(v) if self.dims[e] == 1 and self.source(e) == v)

    def in_edges(self, v: str) -> list[str]:
        return sorted(e for e in self.cofaces(v) if self.dims[e] == 1 and self.target(e) == v)

    def restrict(self, keep: Iterable[str]) -> "PrecubicalSet":
        """The graded subset on ``keep``; the caller guarantees closure under faces."""
        keep = set(keep)
        dims = {c: n for c, n in self.dims.items() if c in keep}
        faces = {c: f for c, f in self.faces.items() if c in keep}
        return PrecubicalSet(dims, faces)

    def remove(self, drop: Iterable[str]) -> "PrecubicalSet":
        drop = set(drop)
        return self.restrict(c for c in self.dims if c not in drop)


def validate(P: PrecubicalSet) -> ValidationReport:
    """Check face arities, dimensions of faces and the precubical identities."""
    errors = []
    for c, n in P.dims.items():
        if n < 0:
            errors.append(f"{c}: negative dimension")
            continue
        if n == 0:
            if c in P.faces:
                errors.append(f"{c}: vertex must not carry faces")
            continue
        if c not in P.faces:
            errors.append(f"{c}: missing faces")
            continue
        for k, side in enumerate(P.faces[c]):
            if len(side) != n:
                errors.append(f"{c}: expected {n} faces d^{k}_i, got {len(side)}")
                continue
            for i, f in enumerate(side, 1):
                if f not in P.dims:
                    errors.append(f"{c}: d^{k}_{i} = {f!r} is not a cube")
                elif P.dims[f] != n - 1:
                    errors.append(f"{c}: d^{k}_{i} = {f!r} has dimension {P.dims[f]}, expected {n - 1}")
    for c in P.faces:
        if c not in P.dims:
            errors.append(f"{c}: faces given for an unknown cube")
    if errors:
        return ValidationReport(tuple(errors))
    for c, n in P.dims.items():
        if n < 2:
            continue
        for i in range(1, n):
            for j in range(i + 1, n + 1):
                for k in (0, 1):
                    for l in (0, 1):
                        lhs = P.face(P.face(c, l, j), k, i)
                        rhs = P.face(P.face(c, k, i), l, j - 1)
                        if lhs != rhs:
                            errors.append(
                                f"{c}: d^{k}_{i} d^{l}_{j} = {lhs!r} but d^{l}_{j - 1} d^{k}_{i} = {rhs!r}"
                            )
    return ValidationReport(tuple(errors))


# -- constructions -------------------------------------------------------


def pair_id(x: str, y: str) -> str:
    return f"({x},{y})"


def tensor(P: PrecubicalSet, Q: PrecubicalSet) -> PrecubicalSet:
    """The tensor product; the cube (x, y) gets the id ``"(x,y)"``."""
    cubes = []
    for n in range(P.dim + Q.dim + 1):
        for p in range(n + 1):
            q = n - p
            for x in P.cubes(p):
                for y in Q.cubes(q):
                    if n == 0:
                        cubes.append((pair_id(x, y), 0))
                        continue
                    front, back = [], []
                    for i in range(1, n + 1):
                        for k, side in ((0, front), (1, back)):
                            if i <= p:
                                side.append(pair_id(P.face(x, k, i), y))
                            else:
                                side.append(pair_id(x, Q.face(y, k, i - p)))
                    cubes.append((pair_id(x, y), n, front, back))
    return PrecubicalSet.build(cubes)


def interval(k: int, l: int) -> PrecubicalSet:
    """The precubical interval [[k, l]] with vertices ``"j"`` and edges ``"[j-1,j]"``."""
    if l < k:
        raise PrecubicalError("empty interval")
    cubes = [(str(j), 0) for j in range(k, l + 1)]
    cubes += [(f"[{j - 1},{j}]", 1, [str(j - 1)], [str(j)]) for j in range(k + 1, l + 1)]
    return PrecubicalSet.build(cubes)


def address_id(address: str) -> str:
    """Cube id used by :func:`cube` for an element of the standard cube."""
    coords = ["[0,1]" if a == "x" else a for a in address]
    if len(coords) == 1:
        return coords[0]
    return "(" + ",".join(coords) + ")"


def addresses(n: int) -> list[str]:
    return ["".join(t) for t in itertools.product("01x", repeat=n)]


def address_face(address: str, k: int, i: int) -> str:
    """d^k_i on an element of the standard cube: fix the i-th free coordinate."""
    seen = 0
    for pos, a in enumerate(address):
        if a == "x":
            seen += 1
            if seen == i:
                return address[:pos] + str(k) + address[pos + 1:]
    raise PrecubicalError(f"d^{k}_{i} undefined on {address!r}")


def cube(n: int) -> PrecubicalSet:
    """The standard n-cube, with ids as produced by :func:`address_id`.

    For n = 0 this is the single vertex ``"0"`` (the empty tensor product),
    and ``iota(n)`` names the top cell.
    """
    if n == 0:
        return PrecubicalSet.build([("0", 0)])
    by_dim: dict[int, list[str]] = {}
    for a in addresses(n):
        by_dim.setdefault(a.count("x"), []).append(a)
    cubes = []
    for d in range(n + 1):
        for a in sorted(by_dim[d]):
            if d == 0:
                cubes.append((address_id(a), 0))
            else:
                front = [address_id(address_face(a, 0, i)) for i in range(1, d + 1)]
                back = [address_id(address_face(a, 1, i)) for i in range(1, d + 1)]
                cubes.append((address_id(a), d, front, back))
    return PrecubicalSet.build(cubes)


def iota(n: int) -> str:
    return address_id("x" * n) if n else "0"


# -- iterated faces and regularity ----------------------------------------


def iterated_faces(P: PrecubicalSet, x: str, max_dim: int = MAX_ADDRESS_DIM) -> dict[str, str]:
    """The morphism x#: [0,1]^{(x)n} -> P as a map from addresses to cube ids."""
    n = P.dims[x]
    if n > max_dim:
        raise PrecubicalError(f"{x!r} has dimension {n} > {max_dim}")
    out = {"x" * n: x}
    # Peel one fixed coordinate at a time, always the last one, so the
    # remaining free coordinates keep their indices.
    for a in sorted(addresses(n), key=lambda s: -s.count("x")):
        if a in out:
            continue
        last = max(p for p, c in enumerate(a) if c != "x")
        parent = a[:last] + "x" + a[last + 1:]
        i = parent[: last + 1].count("x")
        out[a] = P.face(out[parent], int(a[last]), i)
    return out


def _injective_on(image: Mapping[str, str], keys: Iterable[str]) -> bool:
    seen = set()
    for a in keys:
        c = image[a]
        if c in seen:
            return False
        seen.add(c)
    return True


def is_regular(P: PrecubicalSet, x: str) -> bool:
    image = iterated_faces(P, x)
    return _injective_on(image, image)


def is_weakly_regular(P: PrecubicalSet, x: str) -> bool:
    image = iterated_faces(P, x)
    lower = [a for a in image if "1" not in a]
    upper = [a for a in image if "0" not in a]
    return _injective_on(image, lower) and _injective_on(image, upper)


def all_weakly_regular(P: PrecubicalSet) -> bool:
    return all(is_weakly_regular(P, x) for x in P.dims if P.dims[x] >= 2)


def vertices_of(P: PrecubicalSet, x: str) -> set[str]:
    out = set()
    todo = [x]
    while todo:
        c = todo.pop()
        if P.dims[c] == 0:
            out.add(c)
        else:
            front, back = P.faces[c]
            todo.extend(set(front) | set(back))
    return out


def star(P: PrecubicalSet, x: str) -> frozenset[str]:
    """All cubes having ``x`` among their iterated faces (including ``x``)."""
    seen = {x}
    todo = [x]
    while todo:
        c = todo.pop()
        for up in P.cofaces(c):
            if up not in seen:
                seen.add(up)
                todo.append(up)
    return frozenset(seen)


# -- paths and dihomotopy -------------------------------------------------


@dataclass(frozen=True)
class Path:
    """A path given by its start vertex and its consecutive edges."""

    start: str
    edges: tuple[str, ...]
    end: str

    def __len__(self) -> int:
        return len(self.edges)

    @classmethod
    def make(cls, P: PrecubicalSet, start: str, edges: Iterable[str]) -> "Path":
        edges = tuple(edges)
        v = start
        if P.dims.get(start) != 0:
            raise PrecubicalError(f"{start!r} is not a vertex")
        for e in edges:
            if P.dims.get(e) != 1:
                raise PrecubicalError(f"{e!r} is not an edge")
            if P.source(e) != v:
                raise PrecubicalError(f"edge {e!r} does not start at {v!r}")
            v = P.target(e)
        return cls(start, edges, v)


def concat(omega: Path, nu: Path) -> Path:
    if omega.end != nu.start:
        raise PrecubicalError(f"cannot concatenate: {omega.end!r} != {nu.start!r}")
    return Path(omega.start, omega.edges + nu.edges, nu.end)


def iter_paths(P: PrecubicalSet, start: str, max_len: int) -> Iterator[Path]:
    """Depth-first, lexicographic by edge id, shorter prefixes first."""
    out = {v: P.out_edges(v) for v in P.vertices}
    stack = [(start, ())]
    while stack:
        v, edges = stack.pop()
        yield Path(start, edges, v)
        if len(edges) < max_len:
            for e in reversed(out[v]):
                stack.append((P.target(e), edges + (e,)))


def enumerate_paths(P: PrecubicalSet, start: str, max_len: int) -> list[Path]:
    return list(iter_paths(P, start, max_len))


def swap_table(P: PrecubicalSet) -> dict[tuple[str, str], list[tuple[str, str]]]:
    """For each 2-cube z, d0_1 z . d1_2 z  <->  d0_2 z . d1_1 z."""
    table: dict[tuple[str, str], list[tuple[str, str]]] = {}
    for z in P.cubes(2):
        (f1, f2), (b1, b2) = P.faces[z]
        u, w = (f1, b2), (f2, b1)
        table.setdefault(u, []).append(w)
        table.setdefault(w, []).append(u)
    return table


def elementary_neighbours(omega: Path, table) -> Iterator[Path]:
    e = omega.edges
    for p in range(len(e) - 1):
        for a, b in table.get((e[p], e[p + 1]), ()):
            yield Path(omega.start, e[:p] + (a, b) + e[p + 2:], omega.end)


def dihomotopy_class(P: PrecubicalSet, omega: Path, table=None) -> set[Path]:
    table = swap_table(P) if table is None else table
    seen = {omega}
    todo = deque([omega])
    while todo:
        cur = todo.popleft()
        for nxt in elementary_neighbours(cur, table):
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


def dihomotopic(P: PrecubicalSet, omega: Path, nu: Path) -> bool:
    if (omega.start, omega.end, len(omega)) != (nu.start, nu.end, len(nu)):
        return False
    return nu in dihomotopy_class(P, omega)
