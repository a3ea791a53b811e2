"""Trace languages, fundamental monoids, safety monitors and weak implementation.

Trace prefixes.  v is a prefix of u exactly when, for every dependent pair
{a, b} (the diagonal included), the projection of v onto {a, b} is a word
prefix of the projection of u.  :func:`tl_contains` runs this test along
the paths of an automaton, keeping one counter per dependent pair.

Bounded trace languages.  :func:`tl_up_to` instead enumerates, along every
path, the downward closed sets of letter occurrences ("ideals") of the
label's dependence order.  A letter occurrence may join the ideal only if no
dependent occurrence before it was left out.  The traces of these ideals
are exactly the prefixes of the path's label.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .hda import (
    Hda,
    is_accessible,
    is_coaccessible,
)
from .homology import format_vector, hl_witness, homology_language
from .precubical import Path
from .tracemonoid import (
    AlphabetError,
    ConcurrentAlphabet,
    Steps,
    Trace,
    foata_append,
    projection,
)


def _check_letters(A: Hda, v: Trace) -> None:
    foreign = v.letters() - set(A.alphabet.letters)
    if foreign:
        raise AlphabetError(f"letters {sorted(foreign)} are not in the alphabet of the automaton")


def _out_table(A: Hda) -> dict[str, list[tuple[str, str, tuple[str, ...]]]]:
    P = A.cubes
    return {v: [(e, P.target(e), A.labels[e]) for e in P.out_edges(v)] for v in P.vertices}


def _rebuild_path(start: str, parents: Mapping, state) -> tuple[str, ...]:
    edges = []
    while parents[state] is not None:
        state, e = parents[state]
        edges.append(e)
    return tuple(reversed(edges))


# -- trace language membership -------------------------------------------------------


def tl_witness(A: Hda, v: Trace) -> Path | None:
    """A path from the initial state whose label has ``v`` as a prefix, or None."""
    _check_letters(A, v)
    alph = A.alphabet
    pairs = alph.dependent_pairs()
    targets = [projection(v.word, p) for p in pairs]
    full = tuple(len(t) for t in targets)
    of_letter: dict[str, list[int]] = {a: [] for a in alph.letters}
    for idx, (a, b) in enumerate(pairs):
        of_letter[a].append(idx)
        if b != a:
            of_letter[b].append(idx)

    start = (A.initial, tuple(0 for _ in pairs))
    if start[1] == full:
        return Path(A.initial, (), A.initial)
    out = _out_table(A)
    parents = {start: None}
    todo = deque([start])
    while todo:
        state = todo.popleft()
        vertex, counters = state
        for e, w, word in out[vertex]:
            cnt = list(counters)
            alive, done = True, False
            for a in word:
                for idx in of_letter[a]:
                    k = cnt[idx]
                    if k < full[idx]:
                        if targets[idx][k] == a:
                            cnt[idx] = k + 1
                        else:
                            alive = False
                            break
                if not alive:
                    break
                if tuple(cnt) == full:
                    done = True
                    break
            if not alive:
                continue
            nxt = (w, tuple(cnt))
            if done:
                edges = _rebuild_path(A.initial, parents, state) + (e,)
                return Path(A.initial, edges, w)
            if nxt not in parents:
                parents[nxt] = (state, e)
                todo.append(nxt)
    return None


def tl_contains(A: Hda, v: Trace) -> bool:
    return tl_witness(A, v) is not None


# -- bounded enumeration -------------------------------------------------------------


@dataclass(frozen=True)
class BoundedSet:
    """All elements of length at most ``bound``; ``complete`` means nothing longer exists."""

    traces: frozenset[Trace]
    bound: int
    complete: bool

    def __contains__(self, t: object) -> bool:
        return t in self.traces

    def __iter__(self):
        return iter(sorted(self.traces, key=Trace.sort_key))

    def __len__(self) -> int:
        return len(self.traces)


def _size(c: Steps) -> int:
    return sum(len(s) for s in c)


class _Bits:
    def __init__(self, alphabet: ConcurrentAlphabet):
        self.index = {a: i for i, a in enumerate(alphabet.letters)}
        self.dep = {a: sum(1 << self.index[b] for b in alphabet.depends_on(a)) for a in alphabet.letters}
        self.all = (1 << len(alphabet.letters)) - 1

    def bit(self, a: str) -> int:
        return 1 << self.index[a]


def tl_explore(A: Hda, N: int) -> BoundedSet:
    if N < 0:
        raise ValueError("bound must be non-negative")
    alph = A.alphabet
    bits = _Bits(alph)
    out = _out_table(A)
    found: set[Steps] = {()}
    truncated = False
    frontier: set[tuple[str, int]] = set()

    def consume(c: Steps, blocked: int, word) -> set[tuple[Steps, int]]:
        nonlocal truncated
        cur = {(c, blocked)}
        for a in word:
            bit, dep = bits.bit(a), bits.dep[a]
            nxt = set()
            for c, b in cur:
                if b & bit:
                    nxt.add((c, b | dep))
                    continue
                if _size(c) < N:
                    c2 = foata_append(c, a, alph)
                    found.add(c2)
                    nxt.add((c2, b))
                else:
                    truncated = True
                nxt.add((c, b | dep))
            cur = nxt
        return cur

    start = (A.initial, (), 0)
    seen = {start}
    stack = [start]
    while stack:
        v, c, blocked = stack.pop()
        if blocked == bits.all:
            continue
        if _size(c) == N:
            frontier.add((v, blocked))
            continue
        for _, w, word in out[v]:
            for c2, b2 in consume(c, blocked, word):
                state = (w, c2, b2)
                if state not in seen:
                    seen.add(state)
                    stack.append(state)

    # A full ideal can still grow past the bound if some continuation reads
    # a letter that is not yet blocked.
    if not truncated and frontier:
        seen2 = set(frontier)
        todo = list(frontier)
        while todo and not truncated:
            v, b = todo.pop()
            for _, w, word in out[v]:
                for a in word:
                    if not b & bits.bit(a):
                        truncated = True
                        break
                    b |= bits.dep[a]
                if truncated:
                    break
                if (w, b) not in seen2:
                    seen2.add((w, b))
                    todo.append((w, b))
    return BoundedSet(frozenset(Trace(alph, c) for c in found), N, not truncated)


def tl_up_to(A: Hda, N: int) -> set[Trace]:
    """The elements of TL(A) of length at most N."""
    return set(tl_explore(A, N).traces)


def tl_up_to_by_membership(A: Hda, N: int) -> set[Trace]:
    """Same set, generated level by level and filtered with :func:`tl_contains`.

    TL(A) is prefix closed, and every trace of length l+1 is some trace of
    length l followed by a letter, so only extensions of members are tried.
    """
    alph = A.alphabet
    level = {()}
    found = {Trace(alph, ())}
    for _ in range(N):
        nxt = set()
        for c in level:
            for a in alph.letters:
                c2 = foata_append(c, a, alph)
                if c2 in nxt:
                    continue
                if tl_contains(A, Trace(alph, c2)):
                    nxt.add(c2)
        found |= {Trace(alph, c) for c in nxt}
        level = nxt
    return found


def pi_explore(A: Hda, N: int) -> BoundedSet:
    if N < 0:
        raise ValueError("bound must be non-negative")
    alph = A.alphabet
    out = _out_table(A)
    start = (A.initial, ())
    seen = {start}
    todo = deque([start])
    loops: set[Steps] = set()
    truncated = False
    while todo:
        v, c = todo.popleft()
        if v == A.initial:
            loops.add(c)
        for _, w, word in out[v]:
            if _size(c) + len(word) > N:
                truncated = True
                continue
            c2 = c
            for a in word:
                c2 = foata_append(c2, a, alph)
            state = (w, c2)
            if state not in seen:
                seen.add(state)
                todo.append(state)
    return BoundedSet(frozenset(Trace(alph, c) for c in loops), N, not truncated)


def pi_up_to(A: Hda, N: int) -> set[Trace]:
    """Labels of loops at the initial state, as traces of length at most N."""
    return set(pi_explore(A, N).traces)


def sorted_traces(traces: Iterable[Trace]) -> list[Trace]:
    return sorted(traces, key=Trace.sort_key)


# -- safety ------------------------------------------------------------------------------


class MonitorError(ValueError):
    pass


@dataclass(frozen=True)
class SafetyMonitor:
    """A complete deterministic automaton whose bad states are absorbing."""

    states: tuple[str, ...]
    letters: tuple[str, ...]
    initial: str
    bad: frozenset[str]
    delta: Mapping[tuple[str, str], str] = field(repr=False)

    def __post_init__(self):
        errors = self.errors()
        if errors:
            raise MonitorError("; ".join(errors))

    def errors(self) -> list[str]:
        errs = []
        states = set(self.states)
        if self.initial not in states:
            errs.append(f"initial state {self.initial!r} is not a state")
        for q in sorted(self.bad - states):
            errs.append(f"bad state {q!r} is not a state")
        for q in self.states:
            for a in self.letters:
                nxt = self.delta.get((q, a))
                if nxt is None:
                    errs.append(f"no transition from {q!r} on {a!r}")
                elif nxt not in states:
                    errs.append(f"transition from {q!r} on {a!r} leads to unknown state {nxt!r}")
                elif q in self.bad and nxt not in self.bad:
                    errs.append(f"bad state {q!r} is left on {a!r}")
        for (q, a) in self.delta:
            if a not in self.letters:
                errs.append(f"transition on unknown letter {a!r}")
        return errs

    def run(self, word: Iterable[str], state: str | None = None) -> str:
        q = self.initial if state is None else state
        for a in word:
            q = self.delta[(q, a)]
        return q

    def rejects(self, word: Iterable[str]) -> bool:
        """Whether the word lies in B.Sigma^*."""
        return self.run(word) in self.bad


@dataclass(frozen=True)
class SafetyResult:
    holds: bool
    counterexample: Path | None = None


def satisfies_safety(A: Hda, mon: SafetyMonitor) -> SafetyResult:
    if set(mon.letters) != set(A.alphabet.letters):
        raise AlphabetError("monitor and automaton have different alphabets")
    if mon.initial in mon.bad:
        return SafetyResult(False, Path(A.initial, (), A.initial))
    out = _out_table(A)
    start = (A.initial, mon.initial)
    parents = {start: None}
    todo = deque([start])
    while todo:
        state = todo.popleft()
        v, q = state
        for e, w, word in out[v]:
            q2 = mon.run(word, q)
            nxt = (w, q2)
            if q2 in mon.bad:
                edges = _rebuild_path(A.initial, parents, state) + (e,)
                return SafetyResult(False, Path(A.initial, edges, w))
            if nxt not in parents:
                parents[nxt] = (state, e)
                todo.append(nxt)
    return SafetyResult(True)


def _state_classes(mon: SafetyMonitor) -> dict[str, int]:
    """Language equivalence classes of monitor states (Moore refinement)."""
    cls = {q: int(q in mon.bad) for q in mon.states}
    while True:
        sig = {q: (cls[q],) + tuple(cls[mon.delta[(q, a)]] for a in mon.letters) for q in mon.states}
        ids: dict[tuple, int] = {}
        new = {q: ids.setdefault(sig[q], len(ids)) for q in mon.states}
        if len(ids) == len(set(cls.values())):
            return new
        cls = new


def saturation_witness(mon: SafetyMonitor, alphabet: ConcurrentAlphabet) -> tuple[str, str, str] | None:
    """A reachable state q and independent letters a, b with q.ab and q.ba inequivalent.

    The language is closed under the trace congruence iff no such triple
    exists, since the congruence is generated by single adjacent swaps.
    """
    cls = _state_classes(mon)
    reach = {mon.initial}
    todo = [mon.initial]
    while todo:
        q = todo.pop()
        for a in mon.letters:
            r = mon.delta[(q, a)]
            if r not in reach:
                reach.add(r)
                todo.append(r)
    for q in sorted(reach):
        for a, b in alphabet.independent_pairs():
            if cls[mon.run((a, b), q)] != cls[mon.run((b, a), q)]:
                return q, a, b
    return None


def is_saturated(mon: SafetyMonitor, alphabet: ConcurrentAlphabet) -> bool:
    return saturation_witness(mon, alphabet) is None


def saturation_bounded_check(mon: SafetyMonitor, alphabet: ConcurrentAlphabet, N: int) -> tuple[str, ...] | None:
    """Search words of length <= N for one whose adjacent swap changes acceptance.

    Exponential in N; intended for small bounds and as an independent check
    of :func:`saturation_witness`.
    """
    letters = mon.letters

    def walk(word: tuple[str, ...]):
        for p in range(len(word) - 1):
            a, b = word[p], word[p + 1]
            if a != b and alphabet.independent(a, b):
                swapped = word[:p] + (b, a) + word[p + 2:]
                if mon.rejects(word) != mon.rejects(swapped):
                    return word
        if len(word) < N:
            for a in letters:
                found = walk(word + (a,))
                if found is not None:
                    return found
        return None

    return walk(())


# -- weak implementation ------------------------------------------------------------------


HOLDS_EXACTLY = "HoldsExactly"
HOLDS_UP_TO_BOUND = "HoldsUpToBound"
REFUTED = "RefutedWithWitness"


@dataclass(frozen=True)
class InclusionCheck:
    holds: bool
    exact: bool
    witness: Trace | None = None

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "exact": self.exact,
            "witness": None if self.witness is None else str(self.witness),
        }


@dataclass(frozen=True)
class Verdict:
    accessible: tuple[bool, bool]
    coaccessible: tuple[bool, bool]
    alphabet_equal: bool
    pi: InclusionCheck | None
    tl: InclusionCheck | None
    hl: bool | None
    hl_witness: tuple | None
    bound: int

    @property
    def accessibility_ok(self) -> bool:
        (acc_a, acc_b), (co_a, co_b) = self.accessible, self.coaccessible
        return (acc_a or not acc_b) and (co_a or not co_b)

    @property
    def outcome(self) -> str:
        parts = [self.accessibility_ok, self.alphabet_equal, self.hl is True]
        parts += [c is not None and c.holds for c in (self.pi, self.tl)]
        if not all(parts):
            return REFUTED
        if self.pi.exact and self.tl.exact:
            return HOLDS_EXACTLY
        return HOLDS_UP_TO_BOUND

    @property
    def label(self) -> str:
        return f"{HOLDS_UP_TO_BOUND}({self.bound})" if self.outcome == HOLDS_UP_TO_BOUND else self.outcome

    def witnesses(self) -> list[str]:
        out = []
        if not self.accessibility_ok:
            out.append("accessibility: the implementation loses (co)accessibility")
        if not self.alphabet_equal:
            out.append("alphabet: concurrent alphabets differ")
        if self.pi is not None and not self.pi.holds:
            out.append(f"pi: {self.pi.witness}")
        if self.tl is not None and not self.tl.holds:
            out.append(f"tl: {self.tl.witness}")
        if self.hl_witness is not None:
            n, row = self.hl_witness
            out.append(f"hl: degree {n} element {format_vector(row)}")
        return out

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "verdict": self.label,
            "bound": self.bound,
            "accessibility": {
                "holds": self.accessibility_ok,
                "exact": True,
                "accessible": list(self.accessible),
                "coaccessible": list(self.coaccessible),
            },
            "alphabet_equal": self.alphabet_equal,
            "pi": None if self.pi is None else self.pi.to_json(),
            "tl": None if self.tl is None else self.tl.to_json(),
            "hl": {
                "holds": self.hl,
                "exact": True,
                "witness": None if self.hl_witness is None else format_vector(self.hl_witness[1]),
            },
            "witnesses": self.witnesses(),
        }


def _inclusion(mine: BoundedSet, theirs: BoundedSet, reflexive: bool) -> InclusionCheck:
    missing = sorted_traces(t for t in mine.traces if t not in theirs.traces)
    if missing:
        return InclusionCheck(False, True, missing[0])
    return InclusionCheck(True, reflexive or mine.complete)


def weak_implements(A: Hda, B: Hda, N: int, field: str = "gf2", cache: dict | None = None) -> Verdict:
    """Check whether A weakly implements B.

    Accessibility and homology parts are exact.  The trace language and
    fundamental monoid parts compare all elements of length at most N and
    are exact only when A's bounded set is complete, or when A and B are
    the same automaton.
    """
    cache = {} if cache is None else cache

    def memo(key, H, fn):
        k = (key, id(H))
        if k not in cache:
            cache[k] = fn()
        return cache[k]

    same = A == B
    acc = (is_accessible(A), is_accessible(B))
    coacc = (is_coaccessible(A), is_coaccessible(B))
    alphabet_equal = A.alphabet == B.alphabet
    pi = tl = None
    if alphabet_equal:
        pa = memo("pi", A, lambda: pi_explore(A, N))
        pb = memo("pi", B, lambda: pi_explore(B, N))
        ta = memo("tl", A, lambda: tl_explore(A, N))
        tb = memo("tl", B, lambda: tl_explore(B, N))
        pi = _inclusion(pa, pb, same)
        tl = _inclusion(ta, tb, same)
    hl = witness = None
    if set(A.alphabet.letters) == set(B.alphabet.letters):
        ha = memo(("hl", field), A, lambda: homology_language(A, field))
        hb = memo(("hl", field), B, lambda: homology_language(B, field))
        witness = hl_witness(ha, hb)
        hl = witness is None
    return Verdict(acc, coacc, alphabet_equal, pi, tl, hl, witness, N)


def weak_equiv(A: Hda, B: Hda, N: int, field: str = "gf2") -> tuple[Verdict, Verdict]:
    cache: dict = {}
    return weak_implements(A, B, N, field, cache), weak_implements(B, A, N, field, cache)
