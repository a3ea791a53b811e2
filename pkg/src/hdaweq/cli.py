"""Batch command line interface.

Exit codes: 0 ok or holds, 1 refuted or violated, 2 holds only up to the
bound or unknown, 64 usage error, 65 data error.
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .hda import (
    Hda,
    accessible_part,
    canonical_alphabet,
    coprod_hda,
    extended_label,
    is_accessible,
    is_coaccessible,
    tensor_hda,
    validate_hda,
)
from .homology import betti, homology_language
from .languages import HOLDS_EXACTLY, REFUTED, pi_up_to, satisfies_safety, sorted_traces, tl_up_to, weak_implements
from .reduce import Policy, reduce_fixpoint

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_DATA = 65


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageError(message)


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _write_hda(A: Hda, path) -> None:
    io.save_hda(A, path)


def cmd_validate(args, out) -> int:
    A = io.load_hda(args.file, check=False)
    report = validate_hda(A)
    if report.ok:
        print("OK", file=out)
        return EXIT_OK
    for err in report.errors:
        print(err, file=out)
    return EXIT_DATA


def cmd_info(args, out) -> int:
    A = io.load_hda(args.file)
    print("cubes: " + " ".join(str(n) for n in A.counts()), file=out)
    print(f"letters: {len(A.alphabet.letters)}", file=out)
    print(f"accessible: {_yes(is_accessible(A))}", file=out)
    print(f"coaccessible: {_yes(is_coaccessible(A))}", file=out)
    return EXIT_OK


def cmd_betti(args, out) -> int:
    A = io.load_hda(args.file)
    for n, b in enumerate(betti(A.cubes, args.field)):
        print(f"{n}: {b}", file=out)
    return EXIT_OK


def cmd_hl(args, out) -> int:
    A = io.load_hda(args.file)
    for line in homology_language(A, args.field).lines():
        print(line, file=out)
    return EXIT_OK


def cmd_tl(args, out) -> int:
    A = io.load_hda(args.file)
    for t in sorted_traces(tl_up_to(A, args.max_len)):
        print(t, file=out)
    return EXIT_OK


def cmd_pi(args, out) -> int:
    A = io.load_hda(args.file)
    for t in sorted_traces(pi_up_to(A, args.max_len)):
        print(t, file=out)
    return EXIT_OK


def cmd_safety(args, out) -> int:
    A = io.load_hda(args.file)
    mon = io.load_monitor(args.monitor)
    missing = sorted(set(A.alphabet.letters) - set(mon.letters))
    if missing:
        raise io.DataError(f"monitor has no transitions for {missing}", "$.letters", source=args.monitor)
    result = satisfies_safety(A, mon)
    if result.holds:
        print("OK", file=out)
        return EXIT_OK
    path = result.counterexample
    print("VIOLATED", file=out)
    print(f"path: {path.start} " + " ".join(path.edges), file=out)
    print("label: " + " ".join(extended_label(A, path)), file=out)
    return EXIT_REFUTED


def cmd_tensor(args, out) -> int:
    _write_hda(tensor_hda(io.load_hda(args.a), io.load_hda(args.b)), args.output)
    return EXIT_OK


def cmd_coprod(args, out) -> int:
    _write_hda(coprod_hda(io.load_hda(args.a), io.load_hda(args.b)), args.output)
    return EXIT_OK


def cmd_accessible_part(args, out) -> int:
    _write_hda(accessible_part(io.load_hda(args.file)), args.output)
    return EXIT_OK


def cmd_reduce(args, out) -> int:
    A = io.load_hda(args.file)
    B, log = reduce_fixpoint(A, Policy(strict=args.strict), args.bound)
    _write_hda(B, args.output)
    if args.log:
        with open(args.log, "w", encoding="utf-8") as fh:
            fh.write(io.dumps(log.to_json()))
    print(f"steps: {len(log)}", file=out)
    print("before: " + " ".join(map(str, A.counts())), file=out)
    print("after: " + " ".join(map(str, B.counts())), file=out)
    return EXIT_OK


def cmd_weq(args, out) -> int:
    A, B = io.load_hda(args.a), io.load_hda(args.b)
    cache: dict = {}
    forward = weak_implements(A, B, args.bound, args.field, cache)
    backward = weak_implements(B, A, args.bound, args.field, cache)
    outcomes = {forward.outcome, backward.outcome}
    doc = {"forward": forward.to_json(), "backward": backward.to_json()}
    out.write(io.dumps(doc))
    if REFUTED in outcomes:
        return EXIT_REFUTED
    if outcomes == {HOLDS_EXACTLY}:
        return EXIT_OK
    return EXIT_INCONCLUSIVE


def cmd_canonical_deps(args, out) -> int:
    A = io.load_hda(args.file, check=False)
    try:
        alphabet = canonical_alphabet(A.cubes, A.labels, A.alphabet.letters)
    except ValueError as exc:
        raise io.DataError(str(exc), "$.cubes", source=args.file) from None
    B = Hda(A.cubes, A.initial, A.finals, alphabet, A.labels)
    if args.output:
        _write_hda(B, args.output)
    else:
        out.write(io.dumps_hda(B))
    return EXIT_OK


def build_parser() -> Parser:
    p = Parser(prog="hdaweq", description="Analyses of higher-dimensional automata.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", cmd_validate, "check an automaton file")
    sp.add_argument("file")
    sp = add("info", cmd_info, "cube counts, alphabet size and accessibility")
    sp.add_argument("file")
    for name, fn, what in (("betti", cmd_betti, "Betti numbers"), ("hl", cmd_hl, "homology language basis")):
        sp = add(name, fn, what)
        sp.add_argument("file")
        sp.add_argument("--field", choices=["gf2", "q"], default="gf2")
    for name, fn, what in (("tl", cmd_tl, "trace language"), ("pi", cmd_pi, "fundamental monoid")):
        sp = add(name, fn, f"{what} up to a length")
        sp.add_argument("file")
        sp.add_argument("--max-len", type=int, required=True)
    sp = add("safety", cmd_safety, "check a safety monitor")
    sp.add_argument("file")
    sp.add_argument("--monitor", required=True)
    for name, fn in (("tensor", cmd_tensor), ("coprod", cmd_coprod)):
        sp = add(name, fn, f"{name} of two automata")
        sp.add_argument("a")
        sp.add_argument("b")
        sp.add_argument("-o", "--output", required=True)
    sp = add("accessible-part", cmd_accessible_part, "restrict to reachable cubes")
    sp.add_argument("file")
    sp.add_argument("-o", "--output", required=True)
    sp = add("reduce", cmd_reduce, "collapse and merge to a fixpoint")
    sp.add_argument("file")
    sp.add_argument("--strict", action="store_true", help="apply only exactly verified back-face collapses")
    sp.add_argument("--bound", type=int, default=10, help="path length bound for cyclic hypothesis checks")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--log")
    sp = add("weq", cmd_weq, "weak implementation in both directions")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--field", choices=["gf2", "q"], default="gf2")
    sp = add("canonical-deps", cmd_canonical_deps, "recompute the dependence relation from the squares")
    sp.add_argument("file")
    sp.add_argument("-o", "--output")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError:
        return EXIT_USAGE
    for name in ("max_len", "bound"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            print(f"hdaweq: error: --{name.replace('_', '-')} must be non-negative", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.fn(args, out)
    except io.DataError as exc:
        print(f"hdaweq: {exc.describe()}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"hdaweq: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
