"""Builders for the shipped example automata and monitors.

The JSON files under ``fixtures/`` are produced by :func:`write_all` and
can be regenerated with ``python3 -m hdaweq.fixtures DIR``.
"""

from __future__ import annotations

import sys
from pathlib import Path as FsPath

from .hda import Hda, canonical_alphabet
from .io import save_hda, save_monitor
from .languages import SafetyMonitor
from .precubical import PrecubicalSet
from .tracemonoid import ConcurrentAlphabet


def square(sid: str, a: str, b: str, a_back: str, b_back: str) -> tuple:
    """A 2-cube entry from its four edges.

    ``a`` and ``b`` leave the origin in directions 1 and 2; ``a_back`` is
    parallel to ``a`` and ``b_back`` parallel to ``b``.
    """
    return (sid, 2, [b, a], [b_back, a_back])


def graph_hda(vertices, edges, squares, initial, finals, alphabet=None) -> Hda:
    """Build from vertices, ``(src, dst, word)`` edges and square tuples.

    Edge ids are ``"src>dst"``.  Squares are ``(sid, origin, p, q, r)``
    with direction-1 edge origin>p, direction-2 edge origin>q and opposite
    vertex r.  Without an alphabet the canonical one is computed.
    """
    cubes = [(v, 0) for v in vertices]
    labels = {}
    for s, t, word in edges:
        eid = f"{s}>{t}"
        cubes.append((eid, 1, [s], [t]))
        labels[eid] = tuple(word)
    for sid, o, p, q, r in squares:
        cubes.append(square(sid, f"{o}>{p}", f"{o}>{q}", f"{q}>{r}", f"{p}>{r}"))
    P = PrecubicalSet.build(cubes)
    if alphabet is None:
        alphabet = canonical_alphabet(P, labels)
    return Hda(P, initial, frozenset(finals), alphabet, labels)


# -- small examples ------------------------------------------------------------------


def toy() -> Hda:
    """A torus (letters a1, a2 independent) wedged with a circle labeled a3."""
    P = PrecubicalSet.build(
        [
            ("I", 0),
            ("x1", 1, ["I"], ["I"]),
            ("x2", 1, ["I"], ["I"]),
            ("x3", 1, ["I"], ["I"]),
            ("y", 2, ["x2", "x1"], ["x2", "x1"]),
        ]
    )
    alphabet = ConcurrentAlphabet.from_independence(["a1", "a2", "a3"], [("a1", "a2")])
    return Hda(P, "I", {"I"}, alphabet, {"x1": ("a1",), "x2": ("a2",), "x3": ("a3",)})


def loop(letter: str = "a") -> Hda:
    P = PrecubicalSet.build([("v", 0), ("e", 1, ["v"], ["v"])])
    return Hda(P, "v", {"v"}, ConcurrentAlphabet.free([letter]), {"e": (letter,)})


def chain(k: int, letter: str = "a") -> Hda:
    """k consecutive edges labeled ``letter``, every vertex final."""
    vertices = [f"v{j}" for j in range(k + 1)]
    edges = [(vertices[j], vertices[j + 1], [letter]) for j in range(k)]
    return graph_hda(vertices, edges, [], "v0", vertices, ConcurrentAlphabet.free([letter]))


def mutex_violation() -> Hda:
    """Two critical sections entered one after the other."""
    alphabet = ConcurrentAlphabet.free(PETERSON_LETTERS)
    return graph_hda(["s0", "s1", "s2"], [("s0", "s1", ["crit0"]), ("s1", "s2", ["crit1"])], [], "s0", ["s2"], alphabet)


# -- two glued squares ------------------------------------------------------------

# Two squares sharing their direction-1 front edge p0>p2; the lower square
# collapses through its free back face p2>p5, then the upper square loses
# the star of its corner p6.

GLUED_SQUARES_FINALS = ["p1", "p3", "p4", "p5"]


def _glued_squares(stage: int) -> Hda:
    vertices = ["p0", "p1", "p2", "p3", "p4", "p5", "p6"]
    edges = [
        ("p0", "p2", ["a"]),
        ("p0", "p3", ["b"]),
        ("p0", "p6", ["c"]),
        ("p2", "p1", ["c"]),
        ("p2", "p4", ["d"]),
        ("p2", "p5", ["b"]),
        ("p3", "p5", ["a"]),
        ("p6", "p1", ["a"]),
    ]
    squares = [("lower", "p0", "p2", "p3", "p5"), ("upper", "p0", "p2", "p6", "p1")]
    if stage >= 1:
        edges = [e for e in edges if e[:2] != ("p2", "p5")]
        squares = squares[1:]
    if stage >= 2:
        vertices.remove("p6")
        edges = [e for e in edges if "p6" not in e[:2]]
        squares = []
    alphabet = ConcurrentAlphabet.from_independence("abcd", [("a", "b"), ("a", "c")])
    return graph_hda(vertices, edges, squares, "p0", GLUED_SQUARES_FINALS, alphabet)


def glued_squares() -> Hda:
    return _glued_squares(0)


def glued_squares_collapsed() -> Hda:
    return _glued_squares(1)


def glued_squares_reduced() -> Hda:
    return _glued_squares(2)


# -- Peterson's mutual exclusion algorithm ------------------------------------------

PETERSON_LETTERS = ["b0:=0", "b0:=1", "b1:=0", "b1:=1", "crit0", "crit1", "t:=0", "t:=1"]

PETERSON_VERTICES = [f"q{j:02d}" for j in range(18)] + ["p0", "p1"]

PETERSON_EDGES = [
    ("p0", "q04", "crit0"),
    ("q00", "q01", "b1:=0"),
    ("q01", "q02", "b1:=1"),
    ("q02", "q03", "t:=0"),
    ("q04", "q03", "b0:=0"),
    ("q00", "q05", "b0:=1"),
    ("q01", "q06", "b0:=1"),
    ("q02", "q07", "b0:=1"),
    ("q03", "q08", "b0:=1"),
    ("q05", "q06", "b1:=0"),
    ("q06", "q07", "b1:=1"),
    ("q07", "q08", "t:=0"),
    ("q07", "q09", "t:=1"),
    ("q10", "q08", "t:=0"),
    ("q11", "q03", "t:=0"),
    ("q12", "q04", "t:=0"),
    ("q10", "q09", "t:=1"),
    ("q11", "q10", "b0:=1"),
    ("q12", "q11", "b0:=0"),
    ("q05", "q13", "t:=1"),
    ("q06", "q14", "t:=1"),
    ("q14", "q09", "b1:=1"),
    ("q15", "q10", "b1:=1"),
    ("q16", "q11", "b1:=1"),
    ("q17", "q12", "b1:=1"),
    ("q13", "q14", "b1:=0"),
    ("q15", "q14", "t:=1"),
    ("q16", "q15", "b0:=1"),
    ("q17", "q16", "b0:=0"),
    ("p1", "q13", "crit1"),
    ("q03", "q00", "crit1"),
    ("q14", "q17", "crit0"),
    ("q08", "p1", "t:=1"),
    ("q09", "p0", "t:=0"),
]

# (id, origin, end of the direction-1 edge, end of the direction-2 edge, opposite corner)
PETERSON_SQUARES = [
    ("s01", "q00", "q01", "q05", "q06"),
    ("s02", "q01", "q02", "q06", "q07"),
    ("s03", "q02", "q03", "q07", "q08"),
    ("s04", "q05", "q06", "q13", "q14"),
    ("s05", "q06", "q07", "q14", "q09"),
    ("s06", "q11", "q03", "q10", "q08"),
    ("s07", "q12", "q04", "q11", "q03"),
    ("s08", "q15", "q14", "q10", "q09"),
    ("s09", "q16", "q11", "q15", "q10"),
    ("s10", "q17", "q12", "q16", "q11"),
]

PETERSON_INITIAL = "q01"
PETERSON_FINALS = ["q01", "q16"]


def peterson() -> Hda:
    edges = [(s, t, [a]) for s, t, a in PETERSON_EDGES]
    return graph_hda(PETERSON_VERTICES, edges, PETERSON_SQUARES, PETERSON_INITIAL, PETERSON_FINALS)


def peterson_reduced() -> Hda:
    edges = [
        ("q01", "q03", ["b1:=1", "t:=0"]),
        ("q01", "q14", ["b0:=1", "t:=1"]),
        ("q16", "q03", ["b1:=1", "t:=0"]),
        ("q16", "q14", ["b0:=1", "t:=1"]),
        ("q03", "q01", ["crit1", "b1:=0"]),
        ("q14", "q16", ["crit0", "b0:=0"]),
        ("q03", "q14", ["b0:=1", "t:=1", "crit1", "b1:=0"]),
        ("q14", "q03", ["b1:=1", "t:=0", "crit0", "b0:=0"]),
    ]
    alphabet = peterson().alphabet
    return graph_hda(["q01", "q03", "q14", "q16"], edges, [], PETERSON_INITIAL, PETERSON_FINALS, alphabet)


# -- monitors ------------------------------------------------------------------------------


def _total(states, letters, initial, bad, rules) -> SafetyMonitor:
    """Complete ``rules`` (state -> {letter: next}) with self-loops."""
    delta = {}
    for q in states:
        for a in letters:
            delta[(q, a)] = rules.get(q, {}).get(a, q)
    return SafetyMonitor(tuple(states), tuple(letters), initial, frozenset(bad), delta)


def mutex_monitor() -> SafetyMonitor:
    """Rejects words where crit_i is followed by crit_(1-i) without b_i:=0 between."""
    rules = {
        "none": {"crit0": "in0", "crit1": "in1"},
        "in0": {"b0:=0": "none", "crit1": "bad"},
        "in1": {"b1:=0": "none", "crit0": "bad"},
    }
    return _total(["none", "in0", "in1", "bad"], PETERSON_LETTERS, "none", ["bad"], rules)


def repeat_monitor(letter: str) -> SafetyMonitor:
    """Rejects two occurrences of ``letter`` with no critical section between them."""
    rules = {
        "idle": {letter: "seen"},
        "seen": {letter: "bad", "crit0": "idle", "crit1": "idle"},
    }
    return _total(["idle", "seen", "bad"], PETERSON_LETTERS, "idle", ["bad"], rules)


def bypass_monitor(i: int) -> SafetyMonitor:
    """Rejects process 1-i entering twice while process i waits after raising its flag."""
    flag, own, other = f"b{i}:=1", f"crit{i}", f"crit{1 - i}"
    rules = {
        "idle": {flag: "waiting"},
        "waiting": {own: "idle", other: "once"},
        "once": {own: "idle", other: "bad"},
    }
    return _total(["idle", "waiting", "once", "bad"], PETERSON_LETTERS, "idle", ["bad"], rules)


def letter_slug(letter: str) -> str:
    return letter.replace(":=", "_")


def starvation_monitors() -> dict[str, SafetyMonitor]:
    out = {}
    for a in PETERSON_LETTERS:
        if not a.startswith("crit"):
            out[f"starvation_repeat_{letter_slug(a)}"] = repeat_monitor(a)
    for i in (0, 1):
        out[f"starvation_bypass_{i}"] = bypass_monitor(i)
    return out


HDA_FIXTURES = {
    "toy": toy,
    "loop_a": loop,
    "peterson": peterson,
    "peterson_reduced": peterson_reduced,
    "mutex_violation": mutex_violation,
    "glued_squares": glued_squares,
    "glued_squares_collapsed": glued_squares_collapsed,
    "glued_squares_reduced": glued_squares_reduced,
}


def write_all(root) -> list[FsPath]:
    root = FsPath(root)
    (root / "monitors").mkdir(parents=True, exist_ok=True)
    written = []
    for name, build in HDA_FIXTURES.items():
        path = root / f"{name}.json"
        save_hda(build(), path)
        written.append(path)
    for k in range(1, 6):
        path = root / f"chain_{k}.json"
        save_hda(chain(k), path)
        written.append(path)
    monitors = {"mutex": mutex_monitor(), **starvation_monitors()}
    for name, mon in monitors.items():
        path = root / "monitors" / f"{name}.json"
        save_monitor(mon, path)
        written.append(path)
    return written


if __name__ == "__main__":
    for p in write_all(sys.argv[1] if len(sys.argv) > 1 else "fixtures"):
        print(p)
