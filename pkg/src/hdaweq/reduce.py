"""State-space reduction by cube collapses and edge-chain merges.

Every operation re-checks its own hypotheses and raises
:class:`CollapseRefused` naming the clause that failed.  Only the back-face
collapse of a square quantifies over paths; its checker is exact when the
relevant part of the remainder is acyclic and bounded by a path length
otherwise.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator

from . import precubical as pc
from .hda import Hda, is_accessible, is_coaccessible
from .homology import homology_language
from .languages import pi_up_to, tl_up_to
from .precubical import Path, PrecubicalSet

ELEMENTARY_HIGH = "elementary-high"
VERTEX_STAR = "vertex-star"
FRONT_2 = "front-2"
BACK_2 = "back-2"
MERGE = "merge"

DEFAULT_PRIORITY = (ELEMENTARY_HIGH, VERTEX_STAR, FRONT_2, BACK_2, MERGE)

THEOREMS = {
    ELEMENTARY_HIGH: "elementary collapse of a free face of a regular cube of degree >= 3",
    VERTEX_STAR: "vertex-star collapse inside a regular cube",
    FRONT_2: "collapse of a free front face of a regular square",
    BACK_2: "collapse of a free back face of a regular square",
    MERGE: "merge of an edge chain into one word-labeled edge",
}

EXACT = "verified-exact"
BOUNDED = "verified-up-to-N"
COUNTEREXAMPLE = "counterexample"
UNKNOWN = "unknown"

CLASS_LIMIT = 200_000


class CollapseRefused(ValueError):
    def __init__(self, clause: str, report: "HypothesisReport | None" = None):
        super().__init__(clause)
        self.clause = clause
        self.report = report


@dataclass(frozen=True)
class CollapseSite:
    kind: str
    cube: str | None = None
    k: int | None = None
    i: int | None = None
    ks: tuple[int, ...] | None = None
    edges: tuple[str, ...] | None = None
    witness: str | None = None

    def sort_key(self):
        return (
            DEFAULT_PRIORITY.index(self.kind),
            self.cube or "",
            self.k if self.k is not None else -1,
            self.i if self.i is not None else -1,
            self.ks or (),
            self.edges or (),
        )

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        for name in ("cube", "k", "i", "witness"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        if self.ks is not None:
            out["ks"] = list(self.ks)
        if self.edges is not None:
            out["edges"] = list(self.edges)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CollapseSite":
        return cls(
            data["kind"],
            data.get("cube"),
            data.get("k"),
            data.get("i"),
            tuple(data["ks"]) if "ks" in data else None,
            tuple(data["edges"]) if "edges" in data else None,
            data.get("witness"),
        )


@dataclass(frozen=True)
class HypothesisReport:
    status: str
    y: str | None = None
    bound: int | None = None
    paths_checked: int = 0
    counterexample: Path | None = None

    def to_json(self) -> dict:
        out = {"status": self.status, "y": self.y, "bound": self.bound, "paths_checked": self.paths_checked}
        if self.counterexample is not None:
            ce = self.counterexample
            out["counterexample"] = {"start": ce.start, "edges": list(ce.edges)}
        return out


# -- local structure --------------------------------------------------------------


def is_free_face(P: PrecubicalSet, x: str, k: int, i: int) -> bool:
    face = P.face(x, k, i)
    return pc.star(P, face) == {x, face}


def free_faces(A: Hda) -> list[tuple[str, int, int]]:
    """Free faces (x, k, i) of regular cubes x of degree >= 2."""
    P = A.cubes
    out = []
    for n in range(2, P.dim + 1):
        for x in sorted(P.cubes(n)):
            if not pc.is_regular(P, x):
                continue
            for k in (0, 1):
                for i in range(1, n + 1):
                    if is_free_face(P, x, k, i):
                        out.append((x, k, i))
    return out


def _require(cond: bool, clause: str) -> None:
    if not cond:
        raise CollapseRefused(clause)


def _require_free(A: Hda, x: str, k: int, i: int, degree: int | None = None) -> str:
    P = A.cubes
    _require(x in P.dims, f"{x!r} is not a cube")
    n = P.dims[x]
    if degree is None:
        _require(n >= 3, f"{x!r} has degree {n} < 3")
    else:
        _require(n == degree, f"{x!r} has degree {n}, expected {degree}")
    _require(1 <= i <= n, f"face index {i} out of range")
    _require(pc.is_regular(P, x), f"{x!r} is not regular")
    _require(is_free_face(P, x, k, i), f"d^{k}_{i} {x!r} is not a free face")
    return P.face(x, k, i)


# -- collapses ---------------------------------------------------------------------


def collapse_elementary_high(A: Hda, x: str, k: int, i: int) -> Hda:
    face = _require_free(A, x, k, i)
    return A.remove({x, face})


def collapse_front_2(A: Hda, x: str, i: int) -> Hda:
    P = A.cubes
    face = _require_free(A, x, 0, i, degree=2)
    w = P.target(face)
    _require(w != A.initial and w not in A.finals, f"end vertex {w!r} of the free face is initial or final")
    _require(
        any(y != face for y in P.in_edges(w)),
        f"no edge other than the free face ends at {w!r}",
    )
    keep_out = P.face(x, 1, 3 - i)
    extra = [z for z in P.out_edges(w) if z != keep_out]
    _require(not extra, f"extra outgoing edge {extra[0]!r} at {w!r}" if extra else "")
    return A.remove({x, face})


def collapse_vertex_star(A: Hda, x: str, ks: Iterable[int]) -> Hda:
    P = A.cubes
    ks = tuple(ks)
    _require(x in P.dims, f"{x!r} is not a cube")
    n = P.dims[x]
    _require(n >= 2, f"{x!r} has degree {n} < 2")
    _require(len(ks) == n and set(ks) <= {0, 1}, "ks must be a 0/1 vector of the cube's degree")
    _require(0 in ks and 1 in ks, "ks needs at least one 0 and at least one 1")
    _require(pc.is_regular(P, x), f"{x!r} is not regular")
    image = pc.iterated_faces(P, x)
    v = image["".join(map(str, ks))]
    _require(v != A.initial, f"vertex {v!r} is initial")
    _require(v not in A.finals, f"vertex {v!r} is final")
    st = pc.star(P, v)
    _require(st <= set(image.values()), f"star of {v!r} leaves the cube {x!r}")
    return A.remove(st)


def star_vertex(A: Hda, x: str, ks: Iterable[int]) -> str:
    return pc.iterated_faces(A.cubes, x)["".join(map(str, ks))]


def _paths_to(P: PrecubicalSet, sources: Iterable[str], target: str, max_len: int | None) -> tuple[list[Path], bool]:
    """All paths from ``sources`` to ``target``; exhaustive when the relevant graph is acyclic.

    Returns the paths and whether the enumeration is exhaustive.  In the
    cyclic case only paths of length <= ``max_len`` are produced.
    """
    sources = sorted(set(sources))
    back = {target}
    todo = [target]
    while todo:
        v = todo.pop()
        for e in P.in_edges(v):
            s = P.source(e)
            if s not in back:
                back.add(s)
                todo.append(s)
    fwd = set(s for s in sources if s in back)
    todo = list(fwd)
    while todo:
        v = todo.pop()
        for e in P.out_edges(v):
            t = P.target(e)
            if t in back and t not in fwd:
                fwd.add(t)
                todo.append(t)
    relevant = fwd
    out = {v: [e for e in P.out_edges(v) if P.target(e) in relevant] for v in relevant}

    # Kahn's algorithm on the relevant subgraph
    indeg = {v: 0 for v in relevant}
    for v in relevant:
        for e in out[v]:
            indeg[P.target(e)] += 1
    queue = [v for v in relevant if indeg[v] == 0]
    visited = 0
    while queue:
        v = queue.pop()
        visited += 1
        for e in out[v]:
            t = P.target(e)
            indeg[t] -= 1
            if indeg[t] == 0:
                queue.append(t)
    acyclic = visited == len(relevant)
    limit = None if acyclic else max_len

    paths = []
    for s in sources:
        if s not in relevant:
            continue
        stack = [(s, ())]
        while stack:
            v, edges = stack.pop()
            if v == target:
                paths.append(Path(s, edges, v))
            if limit is not None and len(edges) >= limit:
                continue
            for e in reversed(out[v]):
                stack.append((P.target(e), edges + (e,)))
    return paths, acyclic


def _reroutable(P: PrecubicalSet, omega: Path, e: str, forbidden: str, table) -> bool | None:
    """Whether some path dihomotopic to omega ends with e and avoids ``forbidden``."""
    if not omega.edges:
        return False
    if omega.edges[-1] == e:
        return True
    seen = {omega}
    todo = deque([omega])
    while todo:
        cur = todo.popleft()
        for nxt in pc.elementary_neighbours(cur, table):
            if nxt in seen:
                continue
            if nxt.edges[-1] == e and forbidden not in nxt.edges:
                return True
            seen.add(nxt)
            if len(seen) > CLASS_LIMIT:
                return None
            todo.append(nxt)
    return False


def check_back_2(A: Hda, x: str, i: int, N: int) -> HypothesisReport:
    """Check the path hypothesis for collapsing the free back face d^1_i x."""
    P = A.cubes
    face = _require_free(A, x, 1, i, degree=2)
    t = P.source(face)
    rest = P.remove({x, face})
    ys = [y for y in rest.out_edges(t)]
    _require(bool(ys), f"no edge y starting at {t!r} besides the free face")
    e = P.face(x, 0, 3 - i)
    top = P.face(P.face(x, 1, 1), 1, 1)
    table = pc.swap_table(P)
    first_failure = None
    for y in ys:
        starts = {A.initial, top, rest.target(y)}
        paths, acyclic = _paths_to(rest, starts, t, N)
        status = EXACT if acyclic else BOUNDED
        bad = None
        for omega in paths:
            ok = _reroutable(P, omega, e, face, table)
            if ok is None:
                status = UNKNOWN
            elif not ok:
                bad = omega
                break
        report = HypothesisReport(
            COUNTEREXAMPLE if bad else status, y, None if acyclic else N, len(paths), bad
        )
        if bad is None:
            return report
        if first_failure is None:
            first_failure = report
    return first_failure


def collapse_back_2(A: Hda, x: str, i: int, N: int) -> tuple[Hda, HypothesisReport]:
    report = check_back_2(A, x, i, N)
    if report.status == COUNTEREXAMPLE:
        ce = report.counterexample
        raise CollapseRefused(
            f"path {list(ce.edges)} from {ce.start!r} cannot be rerouted through d^0_{3 - i} {x!r}", report
        )
    face = A.cubes.face(x, 1, i)
    return A.remove({x, face}), report


# -- merging -------------------------------------------------------------------------


def mergeable_vertex(A: Hda, v: str) -> bool:
    P = A.cubes
    if v == A.initial or v in A.finals:
        return False
    ins, outs = P.in_edges(v), P.out_edges(v)
    if len(ins) != 1 or len(outs) != 1 or ins[0] == outs[0]:
        return False
    return all(P.dims[c] < 2 for c in pc.star(P, v))


def merged_edge_id(edges: Iterable[str]) -> str:
    return "+".join(edges)


def merge_edge_chain(A: Hda, edges: Iterable[str], full_check: bool = False) -> Hda:
    P = A.cubes
    edges = tuple(edges)
    _require(len(edges) >= 2, "a chain needs at least two edges")
    _require(all(P.dims.get(e) == 1 for e in edges), "chain entries must be edges")
    _require(len(set(edges)) == len(edges), "chain repeats an edge")
    inner = []
    for a, b in zip(edges, edges[1:]):
        v = P.target(a)
        _require(P.source(b) == v, f"{a!r} and {b!r} are not consecutive")
        _require(v != A.initial, f"intermediate vertex {v!r} is initial")
        _require(v not in A.finals, f"intermediate vertex {v!r} is final")
        _require(P.in_edges(v) == [a] and P.out_edges(v) == [b], f"intermediate vertex {v!r} has other edges")
        _require(all(P.dims[c] < 2 for c in pc.star(P, v)), f"intermediate vertex {v!r} lies in a higher cube")
        inner.append(v)
    _require(len(set(inner)) == len(inner), "chain revisits an intermediate vertex")
    # the subdivided automaton is the one whose weak regularity matters
    _require(pc.all_weakly_regular(P), "the automaton is not weakly regular")
    new = merged_edge_id(edges)
    _require(new not in P.dims, f"cube id {new!r} already in use")
    drop = set(edges) | set(inner)
    cubes = []
    for c, n in P.dims.items():
        if c in drop:
            continue
        cubes.append((c, n) if n == 0 else (c, n, *P.faces[c]))
    cubes.append((new, 1, [P.source(edges[0])], [P.target(edges[-1])]))
    labels = {e: w for e, w in A.labels.items() if e not in drop}
    labels[new] = tuple(a for e in edges for a in A.labels[e])
    B = Hda(PrecubicalSet.build(cubes), A.initial, A.finals, A.alphabet, labels)
    if full_check:
        _require(pc.all_weakly_regular(B.cubes), "the merged automaton is not weakly regular")
    return B


def subdivide_edge(A: Hda, edge: str) -> Hda:
    """Split a word-labeled edge into one edge per letter through fresh vertices."""
    P = A.cubes
    word = A.labels[edge]
    _require(len(word) >= 2, "only edges labeled by words of length >= 2 are subdivided")
    _require(all(P.dims[c] < 2 for c in P.cofaces(edge)), "edge lies in a higher cube")
    src, dst = P.source(edge), P.target(edge)
    verts = [src] + [f"{edge}/v{j}" for j in range(1, len(word))] + [dst]
    cubes = []
    for c, n in P.dims.items():
        if c == edge:
            continue
        cubes.append((c, n) if n == 0 else (c, n, *P.faces[c]))
    cubes += [(v, 0) for v in verts[1:-1]]
    labels = {e: w for e, w in A.labels.items() if e != edge}
    for j, a in enumerate(word):
        eid = f"{edge}/e{j + 1}"
        cubes.append((eid, 1, [verts[j]], [verts[j + 1]]))
        labels[eid] = (a,)
    return Hda(PrecubicalSet.build(cubes), A.initial, A.finals, A.alphabet, labels)


def edge_chains(A: Hda) -> list[tuple[str, ...]]:
    """Maximal chains of edges through mergeable vertices."""
    P = A.cubes
    mergeable = {v for v in P.vertices if mergeable_vertex(A, v)}
    chains = []
    for e in sorted(P.edges):
        if P.source(e) in mergeable or P.target(e) not in mergeable:
            continue
        chain = [e]
        while P.target(chain[-1]) in mergeable:
            nxt = P.out_edges(P.target(chain[-1]))[0]
            if nxt in chain:
                break
            chain.append(nxt)
        chains.append(tuple(chain))
    return chains


# -- site search ---------------------------------------------------------------------


def find_sites(A: Hda, mode: str = "all", kinds: Iterable[str] | None = None) -> list[CollapseSite]:
    """Candidate sites whose local preconditions hold, in deterministic order.

    ``mode`` is ``"all"``, ``"collapse"`` (no merges) or ``"merge"``;
    ``kinds`` restricts further.  The path hypothesis of back-face collapses
    is not checked here, only the existence of the edge y.
    """
    if kinds is None:
        kinds = {"all": DEFAULT_PRIORITY, "collapse": DEFAULT_PRIORITY[:4], "merge": (MERGE,)}[mode]
    kinds = set(kinds)
    P = A.cubes
    sites: list[CollapseSite] = []
    for x, k, i in free_faces(A):
        n = P.dims[x]
        if n >= 3 and ELEMENTARY_HIGH in kinds:
            sites.append(CollapseSite(ELEMENTARY_HIGH, x, k, i))
        elif n == 2 and k == 1 and BACK_2 in kinds:
            t = P.source(P.face(x, 1, i))
            ys = [y for y in P.out_edges(t) if y != P.face(x, 1, i)]
            if ys:
                sites.append(CollapseSite(BACK_2, x, 1, i))
        elif n == 2 and k == 0 and FRONT_2 in kinds:
            try:
                collapse_front_2(A, x, i)
            except CollapseRefused:
                continue
            sites.append(CollapseSite(FRONT_2, x, 0, i))
    if VERTEX_STAR in kinds:
        for n in range(2, P.dim + 1):
            for x in sorted(P.cubes(n)):
                if not pc.is_regular(P, x):
                    continue
                image = pc.iterated_faces(P, x)
                values = set(image.values())
                for ks in _mixed_vectors(n):
                    v = image["".join(map(str, ks))]
                    if v == A.initial or v in A.finals:
                        continue
                    if pc.star(P, v) <= values:
                        sites.append(CollapseSite(VERTEX_STAR, x, ks=ks))
    if MERGE in kinds:
        for chain in edge_chains(A):
            if len(chain) >= 2:
                sites.append(CollapseSite(MERGE, edges=chain))
    return sorted(sites, key=CollapseSite.sort_key)


def _mixed_vectors(n: int) -> Iterator[tuple[int, ...]]:
    for ks in itertools.product((0, 1), repeat=n):
        if 0 in ks and 1 in ks:
            yield ks


# -- driver ------------------------------------------------------------------------------


class AuditFailure(AssertionError):
    pass


@dataclass(frozen=True)
class Policy:
    priority: tuple[str, ...] = DEFAULT_PRIORITY
    strict: bool = False
    audit_bound: int | None = None


@dataclass
class LogStep:
    site: CollapseSite
    theorem: str
    before: list[int]
    after: list[int]
    hypothesis: HypothesisReport | None = None

    def to_json(self) -> dict:
        out = {"site": self.site.to_json(), "theorem": self.theorem, "before": self.before, "after": self.after}
        if self.hypothesis is not None:
            out["hypothesis"] = self.hypothesis.to_json()
        return out


@dataclass
class ReductionLog:
    steps: list[LogStep] = field(default_factory=list)
    bound: int | None = None
    strict: bool = False

    def __len__(self) -> int:
        return len(self.steps)

    def to_json(self) -> dict:
        return {"bound": self.bound, "strict": self.strict, "steps": [s.to_json() for s in self.steps]}

    @classmethod
    def from_json(cls, data: dict) -> "ReductionLog":
        steps = [
            LogStep(CollapseSite.from_json(s["site"]), s["theorem"], list(s["before"]), list(s["after"]))
            for s in data["steps"]
        ]
        return cls(steps, data.get("bound"), data.get("strict", False))


def apply_site(A: Hda, site: CollapseSite, N: int, strict: bool = False) -> tuple[Hda, HypothesisReport | None]:
    """Apply a site after re-verifying its hypotheses."""
    if site.kind == ELEMENTARY_HIGH:
        return collapse_elementary_high(A, site.cube, site.k, site.i), None
    if site.kind == FRONT_2:
        return collapse_front_2(A, site.cube, site.i), None
    if site.kind == VERTEX_STAR:
        return collapse_vertex_star(A, site.cube, site.ks), None
    if site.kind == MERGE:
        return merge_edge_chain(A, site.edges), None
    if site.kind == BACK_2:
        B, report = collapse_back_2(A, site.cube, site.i, N)
        if report.status == UNKNOWN or (strict and report.status != EXACT):
            raise CollapseRefused(f"path hypothesis only {report.status}", report)
        return B, report
    raise ValueError(f"unknown site kind {site.kind!r}")


def audit_step(A: Hda, B: Hda, N: int) -> None:
    """Compare the desk-scale invariants of weak equivalence before and after a step."""
    problems = []
    if homology_language(A) != homology_language(B):
        problems.append("homology language changed")
    if (is_accessible(A), is_coaccessible(A)) != (is_accessible(B), is_coaccessible(B)):
        problems.append("accessibility flags changed")
    if tl_up_to(A, N) != tl_up_to(B, N):
        problems.append(f"trace language up to {N} changed")
    if pi_up_to(A, N) != pi_up_to(B, N):
        problems.append(f"fundamental monoid up to {N} changed")
    if problems:
        raise AuditFailure("; ".join(problems))


def reduce_fixpoint(A: Hda, policy: Policy | None = None, N: int = 10) -> tuple[Hda, ReductionLog]:
    policy = policy or Policy()
    log = ReductionLog([], N, policy.strict)
    while True:
        step = None
        for kind in policy.priority:
            for site in find_sites(A, kinds=[kind]):
                try:
                    B, report = apply_site(A, site, N, policy.strict)
                except CollapseRefused:
                    continue
                if report is not None:
                    site = replace(site, witness=report.y)
                step = LogStep(site, THEOREMS[site.kind], A.counts(), B.counts(), report)
                break
            if step is not None:
                break
        if step is None:
            return A, log
        if policy.audit_bound is not None:
            audit_step(A, B, policy.audit_bound)
        log.steps.append(step)
        A = B


def replay(A: Hda, log: ReductionLog) -> Hda:
    N = log.bound if log.bound is not None else 10
    for step in log.steps:
        A, _ = apply_site(A, step.site, N, log.strict)
    return A
