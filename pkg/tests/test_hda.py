import random

from hdaweq import fixtures as fx
from hdaweq import precubical as pc
from hdaweq.hda import (
    Hda,
    HdaMorphismCandidate,
    accessible_part,
    canonical_alphabet,
    check_morphism,
    coprod_hda,
    coproduct_injection,
    extended_label,
    find_isomorphism,
    is_accessible,
    is_coaccessible,
    isomorphic,
    rename_cubes,
    tensor_hda,
    validate_hda,
)
from hdaweq.precubical import Path, PrecubicalSet
from hdaweq.tracemonoid import ConcurrentAlphabet, tag, trace_of

from helpers import random_hda


def one_vertex(finals):
    P = PrecubicalSet.build([("v", 0)])
    return Hda(P, "v", finals, ConcurrentAlphabet.free(["z"]), {})


def square_hda(alphabet, front1=("a",), front2=("b",), back1=None, back2=None):
    """cube(2) with direction-1 edges labeled front2/back2 and direction-2 edges front1/back1."""
    P = pc.cube(2)
    (f1, f2), (b1, b2) = P.faces[pc.iota(2)]
    labels = {f1: front1, b1: back1 or front1, f2: front2, b2: back2 or front2}
    return Hda(P, "(0,0)", {"(1,1)"}, alphabet, labels)


def test_toy_is_valid():
    assert validate_hda(fx.toy()).ok


def test_dependent_letters_on_a_square_rejected():
    A = square_hda(ConcurrentAlphabet.free("ab"))
    errors = validate_hda(A).errors
    assert len(errors) == 1 and "dependent letters" in errors[0]


def test_unequal_parallel_labels_rejected():
    alph = ConcurrentAlphabet.from_independence("abc", [("a", "b"), ("c", "b")])
    A = square_hda(alph, back1=("c",))
    errors = validate_hda(A).errors
    assert any("parallel edges" in e for e in errors)


def test_fixtures_are_valid():
    for build in fx.HDA_FIXTURES.values():
        assert validate_hda(build()).ok


def test_extended_label():
    A = fx.toy()
    assert extended_label(A, Path(A.initial, (), A.initial)) == ()
    assert extended_label(A, Path.make(A.cubes, "I", ["x1", "x2"])) == ("a1", "a2")


def test_dihomotopic_paths_have_congruent_labels():
    rng = random.Random(4)
    for _ in range(60):
        A = random_hda(rng)
        P = A.cubes
        table = pc.swap_table(P)
        for v in P.vertices:
            for p in pc.enumerate_paths(P, v, 6):
                t = trace_of(A.alphabet, extended_label(A, p))
                for q in pc.dihomotopy_class(P, p, table):
                    assert trace_of(A.alphabet, extended_label(A, q)) == t


def test_loop_tensor_loop_is_a_torus():
    T = tensor_hda(fx.loop("a"), fx.loop("b"))
    assert T.counts() == [1, 2, 1]
    assert T.alphabet.independent(tag("L", "a"), tag("R", "b"))
    assert validate_hda(T).ok


def test_tensor_with_no_finals():
    A = one_vertex(set())
    assert tensor_hda(A, fx.toy()).finals == frozenset()


def test_products_are_valid():
    rng = random.Random(8)
    for _ in range(40):
        A, B = random_hda(rng, max_cubes=10), random_hda(rng, max_cubes=10)
        assert validate_hda(tensor_hda(A, B)).ok
        assert validate_hda(coprod_hda(A, B)).ok


def test_coprod_counts():
    rng = random.Random(12)
    for _ in range(30):
        A, B = random_hda(rng), random_hda(rng)
        S = coprod_hda(A, B)
        ca, cb, cs = A.counts(), B.counts(), S.counts()
        width = max(len(ca), len(cb))
        ca += [0] * (width - len(ca))
        cb += [0] * (width - len(cb))
        assert cs[0] == ca[0] + cb[0] - 1
        assert cs[1:] == [x + y for x, y in zip(ca[1:], cb[1:])]
        assert S.alphabet.dependent(tag("L", A.alphabet.letters[0]), tag("R", B.alphabet.letters[0]))


def test_toy_is_a_sum_of_products():
    S = coprod_hda(tensor_hda(fx.loop("a1"), fx.loop("a2")), fx.loop("a3"))
    toy = fx.toy()
    mapping = {"L:L:a1": "a1", "L:R:a2": "a2", "R:a3": "a3"}
    renamed = Hda(S.cubes, S.initial, S.finals, toy.alphabet, {e: tuple(mapping[a] for a in w) for e, w in S.labels.items()})
    assert S.alphabet.independent("L:L:a1", "L:R:a2")
    assert S.alphabet.dependent("L:L:a1", "R:a3")
    assert isomorphic(renamed, toy)


def test_accessibility_examples():
    toy = fx.toy()
    assert is_accessible(toy) and is_coaccessible(toy)
    A, B = one_vertex({"v"}), one_vertex(set())
    assert is_coaccessible(A)
    assert not is_coaccessible(B)
    assert is_coaccessible(coprod_hda(A, B))


def test_accessibility_propositions():
    rng = random.Random(21)
    for _ in range(80):
        A, B = random_hda(rng, max_cubes=10), random_hda(rng, max_cubes=10)
        both = is_accessible(A) and is_accessible(B)
        assert is_accessible(tensor_hda(A, B)) == both
        assert is_accessible(coprod_hda(A, B)) == both
        if is_coaccessible(A) and is_coaccessible(B):
            assert is_coaccessible(tensor_hda(A, B))
            assert is_coaccessible(coprod_hda(A, B))
        if is_coaccessible(tensor_hda(A, B)):
            assert is_coaccessible(A) and is_coaccessible(B)


def test_accessible_part():
    rng = random.Random(22)
    for _ in range(50):
        A = random_hda(rng)
        R = accessible_part(A)
        assert validate_hda(R).ok
        assert is_accessible(R)
        assert R.alphabet == A.alphabet
        assert accessible_part(R) == R


def test_identity_and_injections_are_morphisms():
    toy = fx.toy()
    ident = HdaMorphismCandidate({c: c for c in toy.cubes.dims}, {a: a for a in toy.alphabet.letters})
    assert check_morphism(toy, toy, ident).ok
    rng = random.Random(30)
    for _ in range(20):
        A, B = random_hda(rng), random_hda(rng)
        S = coprod_hda(A, B)
        assert check_morphism(A, S, coproduct_injection(A, B, "L")).ok
        assert check_morphism(B, S, coproduct_injection(A, B, "R")).ok


def test_label_breaking_map_reported():
    toy = fx.toy()
    swap = {c: c for c in toy.cubes.dims}
    swap["x1"], swap["x3"] = "x3", "x1"
    cand = HdaMorphismCandidate(swap, {a: a for a in toy.alphabet.letters})
    errors = check_morphism(toy, toy, cand).errors
    assert any("label" in e for e in errors)


def test_isomorphism_up_to_renaming():
    P = fx.peterson()
    names = {c: f"n{j}" for j, c in enumerate(reversed(list(P.cubes.dims)))}
    Q = rename_cubes(P, names)
    iso = find_isomorphism(P, Q)
    assert iso is not None
    assert check_morphism(P, Q, HdaMorphismCandidate(iso, {a: a for a in P.alphabet.letters})).ok
    assert not isomorphic(P, fx.peterson_reduced())


def test_canonical_alphabet_of_peterson():
    P = fx.peterson()
    alph = canonical_alphabet(P.cubes, P.labels)
    assert alph == P.alphabet
    assert alph.independent("b0:=1", "b1:=0")
    assert alph.dependent("crit0", "crit1")
    assert len(alph.independent_pairs()) == 7
