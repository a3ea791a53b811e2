"""Concurrent alphabets and trace monoids.

Traces are stored in Foata normal form: a tuple of steps, each step a sorted
tuple of pairwise independent letters, every letter of a step depending on
some letter of the previous step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

Word = tuple[str, ...]
Steps = tuple[tuple[str, ...], ...]


class AlphabetError(ValueError):
    pass


@dataclass(frozen=True)
class ConcurrentAlphabet:
    """A finite alphabet with a reflexive, symmetric dependence relation."""

    letters: tuple[str, ...]
    dependence: frozenset[tuple[str, str]]
    _dep: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        letters = tuple(sorted(set(self.letters)))
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "dependence", frozenset(self.dependence))
        known = set(letters)
        for a, b in self.dependence:
            if a not in known or b not in known:
                raise AlphabetError(f"dependence pair ({a}, {b}) uses a foreign letter")
            if (b, a) not in self.dependence:
                raise AlphabetError(f"dependence is not symmetric at ({a}, {b})")
        for a in letters:
            if (a, a) not in self.dependence:
                raise AlphabetError(f"dependence is not reflexive at {a}")
        dep = {a: set() for a in letters}
        for a, b in self.dependence:
            dep[a].add(b)
        object.__setattr__(self, "_dep", {a: frozenset(s) for a, s in dep.items()})

    @classmethod
    def from_pairs(cls, letters: Iterable[str], pairs: Iterable[Sequence[str]] = ()) -> "ConcurrentAlphabet":
        """Build with the reflexive-symmetric closure of ``pairs``."""
        letters = tuple(letters)
        dep = {(a, a) for a in letters}
        for a, b in pairs:
            dep.add((a, b))
            dep.add((b, a))
        return cls(letters, frozenset(dep))

    @classmethod
    def from_independence(cls, letters: Iterable[str], independent: Iterable[Sequence[str]] = ()) -> "ConcurrentAlphabet":
        letters = tuple(letters)
        ind = set()
        for a, b in independent:
            if a == b:
                raise AlphabetError(f"a letter cannot be independent of itself: {a}")
            ind.add((a, b))
            ind.add((b, a))
        dep = {(a, b) for a in letters for b in letters if (a, b) not in ind}
        return cls(letters, frozenset(dep))

    @classmethod
    def free(cls, letters: Iterable[str]) -> "ConcurrentAlphabet":
        letters = tuple(letters)
        return cls(letters, frozenset((a, b) for a in letters for b in letters))

    def dependent(self, a: str, b: str) -> bool:
        return b in self._dep[a]

    def independent(self, a: str, b: str) -> bool:
        return b not in self._dep[a]

    def depends_on(self, a: str) -> frozenset[str]:
        return self._dep[a]

    def independent_pairs(self) -> list[tuple[str, str]]:
        return [(a, b) for a in self.letters for b in self.letters if a < b and self.independent(a, b)]

    def dependent_pairs(self) -> list[tuple[str, str]]:
        """Unordered dependent pairs ``a <= b``, the diagonal included."""
        return [(a, b) for a in self.letters for b in self.letters if a <= b and self.dependent(a, b)]

    def __contains__(self, letter: object) -> bool:
        return letter in self._dep


@dataclass(frozen=True)
class Trace:
    """An element of the trace monoid M(alphabet)."""

    alphabet: ConcurrentAlphabet = field(repr=False)
    steps: Steps

    def __len__(self) -> int:
        return sum(len(s) for s in self.steps)

    @property
    def word(self) -> Word:
        """The Foata representative as a word."""
        return tuple(a for s in self.steps for a in s)

    def letters(self) -> set[str]:
        return {a for s in self.steps for a in s}

    def __str__(self) -> str:
        if not self.steps:
            return "1"
        return " ".join("{" + ",".join(s) + "}" if len(s) > 1 else s[0] for s in self.steps)

    def __mul__(self, other: "Trace") -> "Trace":
        return mul(self, other)

    def sort_key(self):
        return (len(self), self.steps)


def foata_append(steps: Steps, a: str, alphabet: ConcurrentAlphabet) -> Steps:
    """Normal form of ``steps . a``."""
    dep = alphabet.depends_on(a)
    level = len(steps)
    while level > 0 and not any(b in dep for b in steps[level - 1]):
        level -= 1
    if level == len(steps):
        return steps + ((a,),)
    merged = tuple(sorted(steps[level] + (a,)))
    return steps[:level] + (merged,) + steps[level + 1:]


def foata_steps(word: Iterable[str], alphabet: ConcurrentAlphabet) -> Steps:
    levels: dict[str, int] = {}
    buckets: list[list[str]] = []
    for a in word:
        if a not in alphabet:
            raise AlphabetError(f"letter {a!r} is not in the alphabet")
        lvl = max((levels[b] + 1 for b in alphabet.depends_on(a) if b in levels), default=0)
        levels[a] = lvl
        if lvl == len(buckets):
            buckets.append([])
        buckets[lvl].append(a)
    return tuple(tuple(sorted(b)) for b in buckets)


def trace_of(alphabet: ConcurrentAlphabet, word: Iterable[str]) -> Trace:
    return Trace(alphabet, foata_steps(word, alphabet))


def unit(alphabet: ConcurrentAlphabet) -> Trace:
    return Trace(alphabet, ())


def mul(u: Trace, v: Trace) -> Trace:
    if u.alphabet != v.alphabet:
        raise AlphabetError("traces over different alphabets")
    steps = u.steps
    for a in v.word:
        steps = foata_append(steps, a, u.alphabet)
    return Trace(u.alphabet, steps)


def length(u: Trace) -> int:
    return len(u)


def left_cancel(u_word: Word, a: str, alphabet: ConcurrentAlphabet) -> Word | None:
    """Remove the first ``a`` of ``u_word`` if every letter before it is independent of ``a``."""
    dep = alphabet.depends_on(a)
    for pos, b in enumerate(u_word):
        if b == a:
            return u_word[:pos] + u_word[pos + 1:]
        if b in dep:
            return None
    return None


def is_prefix(v: Trace, u: Trace) -> bool:
    """Whether ``u = v . w`` for some trace ``w``.

    Left-cancels the letters of a representative of ``v`` from ``u`` one at
    a time; a letter is cancellable when it occurs in ``u`` behind letters
    that are all independent of it.
    """
    if v.alphabet != u.alphabet:
        raise AlphabetError("traces over different alphabets")
    rest = u.word
    if len(v) > len(rest):
        return False
    for a in v.word:
        rest = left_cancel(rest, a, v.alphabet)
        if rest is None:
            return False
    return True


def left_quotient(v: Trace, u: Trace) -> Trace | None:
    """The ``w`` with ``u = v . w``, or None."""
    rest = u.word
    for a in v.word:
        rest = left_cancel(rest, a, v.alphabet)
        if rest is None:
            return None
    return trace_of(u.alphabet, rest)


def projection(word: Iterable[str], letters: Iterable[str]) -> Word:
    keep = set(letters)
    return tuple(a for a in word if a in keep)


# -- tensor, coproduct and morphisms ---------------------------------------


def tag(side: str, letter: str) -> str:
    return f"{side}:{letter}"


def _tagged_union(s1: ConcurrentAlphabet, s2: ConcurrentAlphabet):
    letters = [tag("L", a) for a in s1.letters] + [tag("R", b) for b in s2.letters]
    dep = {(tag("L", a), tag("L", b)) for a, b in s1.dependence}
    dep |= {(tag("R", a), tag("R", b)) for a, b in s2.dependence}
    return letters, dep


def tensor_alphabet(s1: ConcurrentAlphabet, s2: ConcurrentAlphabet) -> ConcurrentAlphabet:
    letters, dep = _tagged_union(s1, s2)
    return ConcurrentAlphabet(tuple(letters), frozenset(dep))


def coprod_alphabet(s1: ConcurrentAlphabet, s2: ConcurrentAlphabet) -> ConcurrentAlphabet:
    letters, dep = _tagged_union(s1, s2)
    for a in s1.letters:
        for b in s2.letters:
            dep.add((tag("L", a), tag("R", b)))
            dep.add((tag("R", b), tag("L", a)))
    return ConcurrentAlphabet(tuple(letters), frozenset(dep))


@dataclass(frozen=True)
class AlphabetMorphism:
    source: ConcurrentAlphabet
    target: ConcurrentAlphabet
    mapping: Mapping[str, str]

    def errors(self) -> list[str]:
        errs = []
        for a in self.source.letters:
            if a not in self.mapping:
                errs.append(f"letter {a} is not mapped")
            elif self.mapping[a] not in self.target:
                errs.append(f"letter {a} maps outside the target alphabet")
        if errs:
            return errs
        # (sigma x sigma)^-1 (D') must lie inside D
        for a in self.source.letters:
            for b in self.source.letters:
                if self.target.dependent(self.mapping[a], self.mapping[b]) and self.source.independent(a, b):
                    errs.append(f"{a},{b} independent but their images are dependent")
        return errs

    def is_valid(self) -> bool:
        return not self.errors()

    def word(self, word: Iterable[str]) -> Word:
        return tuple(self.mapping[a] for a in word)


def apply_morphism(sigma: AlphabetMorphism, t: Trace) -> Trace:
    errs = sigma.errors()
    if errs:
        raise AlphabetError("invalid alphabet morphism: " + "; ".join(errs))
    return trace_of(sigma.target, sigma.word(t.word))


def embedding(side: str, source: ConcurrentAlphabet, target: ConcurrentAlphabet) -> AlphabetMorphism:
    """The side-tagging inclusion of a factor into a tensor or coproduct alphabet."""
    return AlphabetMorphism(source, target, {a: tag(side, a) for a in source.letters})
