"""Random generators and brute-force oracles shared by the test modules."""

from __future__ import annotations

import functools
import itertools
import random
from collections import deque

from hdaweq.hda import Hda, extended_label, validate_hda
from hdaweq.precubical import PrecubicalSet, enumerate_paths
from hdaweq.tracemonoid import ConcurrentAlphabet, Trace, foata_append, trace_of

# -- alphabets -----------------------------------------------------------------------


def shape_alphabets(letters: str = "abc") -> dict[str, ConcurrentAlphabet]:
    """Full dependence, full independence, one and two independent pairs."""
    ls = list(letters)
    pairs = list(itertools.combinations(ls, 2))
    return {
        "full": ConcurrentAlphabet.free(ls),
        "empty": ConcurrentAlphabet.from_independence(ls, pairs),
        "one": ConcurrentAlphabet.from_independence(ls, pairs[:1]),
        "two": ConcurrentAlphabet.from_independence(ls, pairs[:2]),
    }


def random_alphabet(rng: random.Random, n: int) -> ConcurrentAlphabet:
    letters = "abcd"[:n]
    pairs = [p for p in itertools.combinations(letters, 2) if rng.random() < 0.5]
    return ConcurrentAlphabet.from_independence(letters, pairs)


def all_traces(alphabet: ConcurrentAlphabet, max_len: int) -> list[Trace]:
    level = {()}
    out = {()}
    for _ in range(max_len):
        level = {foata_append(c, a, alphabet) for c in level for a in alphabet.letters}
        out |= level
    return sorted((Trace(alphabet, c) for c in out), key=Trace.sort_key)


# -- brute-force trace oracles ------------------------------------------------------------


def congruence_class(word, alphabet: ConcurrentAlphabet) -> set[tuple]:
    """All words equivalent to ``word``, by swapping adjacent independent letters."""
    word = tuple(word)
    seen = {word}
    todo = deque([word])
    while todo:
        w = todo.popleft()
        for j in range(len(w) - 1):
            if alphabet.independent(w[j], w[j + 1]):
                s = w[:j] + (w[j + 1], w[j]) + w[j + 2:]
                if s not in seen:
                    seen.add(s)
                    todo.append(s)
    return seen


@functools.lru_cache(maxsize=None)
def brute_prefixes(u: Trace) -> frozenset[Trace]:
    """Traces of word prefixes of every representative of u."""
    out = set()
    for w in congruence_class(u.word, u.alphabet):
        for j in range(len(w) + 1):
            out.add(trace_of(u.alphabet, w[:j]))
    return frozenset(out)


def brute_is_prefix(v: Trace, u: Trace) -> bool:
    """Left division by search: try every word over the leftover letters."""
    rest = list(u.word)
    for a in v.word:
        if a not in rest:
            return False
        rest.remove(a)
    return any(trace_of(u.alphabet, v.word + w) == u for w in set(itertools.permutations(rest)))


def brute_tl(A: Hda, max_edges: int, max_len: int | None = None) -> set[Trace]:
    """Prefixes of labels of paths from the initial state with at most ``max_edges`` edges."""
    out = set()
    for p in enumerate_paths(A.cubes, A.initial, max_edges):
        out |= brute_prefixes(trace_of(A.alphabet, extended_label(A, p)))
    if max_len is not None:
        out = {t for t in out if len(t) <= max_len}
    return out


def brute_pi(A: Hda, max_edges: int, max_len: int) -> set[Trace]:
    out = set()
    for p in enumerate_paths(A.cubes, A.initial, max_edges):
        if p.end == A.initial:
            t = trace_of(A.alphabet, extended_label(A, p))
            if len(t) <= max_len:
                out.add(t)
    return out


# -- random automata ----------------------------------------------------------------------


def _hda(vertices, edges, squares, initial, finals, alphabet) -> Hda:
    cubes = [(v, 0) for v in vertices]
    labels = {}
    for eid, s, t, word in edges:
        cubes.append((eid, 1, [s], [t]))
        labels[eid] = tuple(word)
    cubes += squares
    return Hda(PrecubicalSet.build(cubes), initial, frozenset(finals), alphabet, labels)


def random_hda(
    rng: random.Random,
    max_cubes: int = 20,
    max_letters: int = 4,
    words: bool = True,
    max_vertices: int = 4,
    max_edges: int = 5,
    max_squares: int = 4,
) -> Hda:
    """A valid HDA with loops, parallel edges and squares glued in various ways."""
    alphabet = random_alphabet(rng, rng.randint(1, max_letters))
    letters = alphabet.letters
    vertices = [f"v{j}" for j in range(rng.randint(1, max_vertices))]
    edges = []

    def word():
        r = rng.random()
        if words and r < 0.08:
            return ()
        if words and r < 0.18:
            return (rng.choice(letters), rng.choice(letters))
        return (rng.choice(letters),)

    def add_edge(s, t, w):
        eid = f"e{len(edges)}"
        edges.append((eid, s, t, w))
        return eid

    for _ in range(rng.randint(1, max_edges)):
        add_edge(rng.choice(vertices), rng.choice(vertices), word())
    squares = []
    for _ in range(rng.randint(0, max_squares)):
        size = len(vertices) + len(edges) + len(squares)
        if size + 4 > max_cubes:
            break
        e1, e2 = rng.choice(edges), rng.choice(edges)
        if e1[1] != e2[1]:
            continue
        w1, w2 = e1[3], e2[3]
        if any(alphabet.dependent(a, b) for a in w1 for b in w2):
            continue
        p, q = e1[2], e2[2]
        back1 = back2 = None
        if rng.random() < 0.4:
            # reuse existing parallel edges meeting at a common vertex
            for f1 in edges:
                for f2 in edges:
                    if f1[1] == q and f1[3] == w1 and f2[1] == p and f2[3] == w2 and f1[2] == f2[2]:
                        back1, back2 = f1[0], f2[0]
                        break
                if back1:
                    break
        if back1 is None:
            if rng.random() < 0.5:
                r = f"v{len(vertices)}"
                vertices.append(r)
            else:
                r = rng.choice(vertices)
            back1 = add_edge(q, r, w1)
            back2 = add_edge(p, r, w2)
        squares.append((f"s{len(squares)}", 2, [e2[0], e1[0]], [back2, back1]))
    finals = [v for v in vertices if rng.random() < 0.4]
    A = _hda(vertices, edges, squares, rng.choice(vertices), finals, alphabet)
    assert validate_hda(A).ok, validate_hda(A).errors
    return A


def random_large_hda(rng: random.Random, max_cubes: int = 20, max_letters: int = 4) -> Hda:
    """Like :func:`random_hda` but spread over sizes up to ``max_cubes``."""
    while True:
        A = random_hda(rng, max_cubes, max_letters, max_vertices=6, max_edges=9, max_squares=8)
        if sum(A.counts()) <= max_cubes:
            return A


def random_acyclic_hda(rng: random.Random, max_letters: int = 3, alphabet: ConcurrentAlphabet | None = None) -> Hda:
    """A small DAG with single-letter labels and a few squares."""
    if alphabet is None:
        alphabet = random_alphabet(rng, rng.randint(2, max_letters))
    n = rng.randint(2, 5)
    vertices = [f"v{j}" for j in range(n)]
    edges = []
    for _ in range(rng.randint(1, 6)):
        s = rng.randrange(n - 1)
        t = rng.randrange(s + 1, n)
        edges.append((f"e{len(edges)}", vertices[s], vertices[t], (rng.choice(alphabet.letters),)))
    squares = []
    for e1, e2 in itertools.combinations(list(edges), 2):
        if e1[1] != e2[1] or alphabet.dependent(e1[3][0], e2[3][0]) or rng.random() < 0.5:
            continue
        r = f"v{len(vertices)}"
        vertices.append(r)
        b1 = (f"e{len(edges)}", e2[2], r, e1[3])
        b2 = (f"e{len(edges) + 1}", e1[2], r, e2[3])
        edges += [b1, b2]
        squares.append((f"s{len(squares)}", 2, [e2[0], e1[0]], [b2[0], b1[0]]))
    A = _hda(vertices, edges, squares, "v0", [vertices[-1]], alphabet)
    assert validate_hda(A).ok, validate_hda(A).errors
    return A


def random_grid_hda(rng: random.Random) -> Hda:
    """A partially filled product of two labeled paths, often with a cycle back.

    Horizontal letters h0, h1 are independent of vertical letters u0, u1, so
    every filled square is valid.  Such automata usually admit collapses.
    """
    alphabet = ConcurrentAlphabet.from_independence(
        ["h0", "h1", "u0", "u1"], [(h, u) for h in ("h0", "h1") for u in ("u0", "u1")]
    )
    m, n = rng.randint(1, 3), rng.randint(1, 3)
    hw = [rng.choice(["h0", "h1"]) for _ in range(m)]
    vw = [rng.choice(["u0", "u1"]) for _ in range(n)]
    vertices = [f"g{i}{j}" for i in range(m + 1) for j in range(n + 1)]
    edges = []
    for i in range(m + 1):
        for j in range(n + 1):
            if i < m:
                edges.append((f"g{i}{j}>g{i + 1}{j}", f"g{i}{j}", f"g{i + 1}{j}", (hw[i],)))
            if j < n:
                edges.append((f"g{i}{j}>g{i}{j + 1}", f"g{i}{j}", f"g{i}{j + 1}", (vw[j],)))
    squares = []
    for i in range(m):
        for j in range(n):
            if rng.random() < 0.75:
                o, p, q, r = f"g{i}{j}", f"g{i + 1}{j}", f"g{i}{j + 1}", f"g{i + 1}{j + 1}"
                squares.append((f"s{i}{j}", 2, [f"{o}>{q}", f"{o}>{p}"], [f"{p}>{r}", f"{q}>{r}"]))
    corner = f"g{m}{n}"
    if rng.random() < 0.5:
        edges.append(("back", corner, "g00", (rng.choice(alphabet.letters),)))
    if rng.random() < 0.5:
        edges.append(("tail", corner, "t", (rng.choice(alphabet.letters),)))
        vertices.append("t")
    finals = [corner] if rng.random() < 0.7 else ["g00", corner]
    A = _hda(vertices, edges, squares, "g00", finals, alphabet)
    assert validate_hda(A).ok, validate_hda(A).errors
    return A


def cube3_hda() -> Hda:
    """The tensor cube of three one-letter intervals."""
    from hdaweq.hda import tensor_hda
    from hdaweq.precubical import interval

    sides = [
        Hda(interval(0, 1), "0", {"1"}, ConcurrentAlphabet.free([f"c{k}"]), {"[0,1]": (f"c{k}",)})
        for k in range(3)
    ]
    return tensor_hda(tensor_hda(sides[0], sides[1]), sides[2])
