"""JSON documents for automata and safety monitors.

Saving is canonical (fixed key order, two-space indent, trailing newline),
so a saved document loads and saves back to the same bytes.
"""

from __future__ import annotations

import json
from pathlib import Path as FsPath

from .hda import Hda, validate_hda
from .languages import MonitorError, SafetyMonitor
from .precubical import PrecubicalError, PrecubicalSet
from .tracemonoid import AlphabetError, ConcurrentAlphabet


class DataError(ValueError):
    """A malformed document, located by a JSON path and, for syntax errors, a line."""

    def __init__(self, message: str, where: str = "$", line: int | None = None, source: str | None = None):
        self.message = message
        self.where = where
        self.line = line
        self.source = source
        super().__init__(self.describe())

    def describe(self) -> str:
        loc = self.source or "<input>"
        if self.line is not None:
            loc += f":{self.line}"
        return f"{loc}: {self.where}: {self.message}"


def _parse(text: str, source: str | None):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(exc.msg, f"column {exc.colno}", exc.lineno, source) from None


def _expect(value, kind, where: str, source):
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise DataError(f"expected {name}, got {type(value).__name__}", where, source=source)
    return value


def _strings(value, where: str, source) -> list[str]:
    _expect(value, list, where, source)
    for j, s in enumerate(value):
        _expect(s, str, f"{where}[{j}]", source)
    return value


def _field(obj: dict, key: str, where: str, source):
    if key not in obj:
        raise DataError(f"missing field {key!r}", where, source=source)
    return obj[key]


# -- HDA documents ------------------------------------------------------------------


def hda_from_json(doc, source: str | None = None, check: bool = True) -> Hda:
    _expect(doc, dict, "$", source)
    alpha = _expect(_field(doc, "alphabet", "$", source), dict, "$.alphabet", source)
    letters = _strings(_field(alpha, "letters", "$.alphabet", source), "$.alphabet.letters", source)
    pairs = _expect(alpha.get("dependence", []), list, "$.alphabet.dependence", source)
    for j, pair in enumerate(pairs):
        where = f"$.alphabet.dependence[{j}]"
        _strings(pair, where, source)
        if len(pair) != 2:
            raise DataError("a dependence pair has two letters", where, source=source)
    try:
        alphabet = ConcurrentAlphabet.from_pairs(letters, pairs)
    except AlphabetError as exc:
        raise DataError(str(exc), "$.alphabet", source=source) from None

    cubes = []
    for j, c in enumerate(_expect(_field(doc, "cubes", "$", source), list, "$.cubes", source)):
        where = f"$.cubes[{j}]"
        _expect(c, dict, where, source)
        cid = _expect(_field(c, "id", where, source), str, f"{where}.id", source)
        n = _expect(_field(c, "dim", where, source), int, f"{where}.dim", source)
        if n < 0:
            raise DataError("dimension must be >= 0", f"{where}.dim", source=source)
        if n == 0:
            cubes.append((cid, 0))
            continue
        front = _strings(_field(c, "front", where, source), f"{where}.front", source)
        back = _strings(_field(c, "back", where, source), f"{where}.back", source)
        for key, faces in (("front", front), ("back", back)):
            if len(faces) != n:
                raise DataError(f"{key} needs {n} faces, got {len(faces)}", f"{where}.{key}", source=source)
        cubes.append((cid, n, front, back))
    try:
        P = PrecubicalSet.build(cubes)
    except PrecubicalError as exc:
        raise DataError(str(exc), "$.cubes", source=source) from None

    labels = {}
    raw = _expect(_field(doc, "labels", "$", source), dict, "$.labels", source)
    for e, w in raw.items():
        labels[e] = tuple(_strings(w, f"$.labels[{json.dumps(e)}]", source))
    initial = _expect(_field(doc, "initial", "$", source), str, "$.initial", source)
    finals = _strings(doc.get("finals", []), "$.finals", source)
    A = Hda(P, initial, frozenset(finals), alphabet, labels)
    if check:
        report = validate_hda(A)
        if not report.ok:
            raise DataError("; ".join(report.errors), "$", source=source)
    return A


def hda_to_json(A: Hda) -> dict:
    P = A.cubes
    cubes = []
    for c, n in P.dims.items():
        entry = {"id": c, "dim": n}
        if n > 0:
            front, back = P.faces[c]
            entry["front"] = list(front)
            entry["back"] = list(back)
        cubes.append(entry)
    return {
        "alphabet": {
            "letters": list(A.alphabet.letters),
            "dependence": [list(p) for p in A.alphabet.dependent_pairs()],
        },
        "cubes": cubes,
        "labels": {e: list(A.labels[e]) for e in P.edges},
        "initial": A.initial,
        "finals": sorted(A.finals),
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def loads_hda(text: str, source: str | None = None, check: bool = True) -> Hda:
    return hda_from_json(_parse(text, source), source, check)


def dumps_hda(A: Hda) -> str:
    return dumps(hda_to_json(A))


def _read(path) -> str:
    try:
        return FsPath(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(exc.strerror or str(exc), "$", source=str(path)) from None


def load_hda(path, check: bool = True) -> Hda:
    return loads_hda(_read(path), str(path), check)


def save_hda(A: Hda, path) -> None:
    FsPath(path).write_text(dumps_hda(A), encoding="utf-8")


# -- monitor documents -------------------------------------------------------------------


def monitor_from_json(doc, source: str | None = None) -> SafetyMonitor:
    _expect(doc, dict, "$", source)
    states = _strings(_field(doc, "states", "$", source), "$.states", source)
    letters = _strings(_field(doc, "letters", "$", source), "$.letters", source)
    initial = _expect(_field(doc, "initial", "$", source), str, "$.initial", source)
    bad = _strings(_field(doc, "bad", "$", source), "$.bad", source)
    delta = {}
    for j, t in enumerate(_expect(_field(doc, "transitions", "$", source), list, "$.transitions", source)):
        where = f"$.transitions[{j}]"
        _expect(t, dict, where, source)
        key = tuple(_expect(_field(t, k, where, source), str, f"{where}.{k}", source) for k in ("state", "letter"))
        nxt = _expect(_field(t, "next", where, source), str, f"{where}.next", source)
        if key in delta:
            raise DataError(f"duplicate transition from {key[0]!r} on {key[1]!r}", where, source=source)
        delta[key] = nxt
    try:
        return SafetyMonitor(tuple(states), tuple(letters), initial, frozenset(bad), delta)
    except MonitorError as exc:
        raise DataError(str(exc), "$", source=source) from None


def monitor_to_json(mon: SafetyMonitor) -> dict:
    return {
        "states": list(mon.states),
        "letters": list(mon.letters),
        "initial": mon.initial,
        "bad": sorted(mon.bad),
        "transitions": [
            {"state": q, "letter": a, "next": mon.delta[(q, a)]} for q in mon.states for a in mon.letters
        ],
    }


def load_monitor(path) -> SafetyMonitor:
    return monitor_from_json(_parse(_read(path), str(path)), str(path))


def save_monitor(mon: SafetyMonitor, path) -> None:
    FsPath(path).write_text(dumps(monitor_to_json(mon)), encoding="utf-8")
