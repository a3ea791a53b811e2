import random

import pytest

from hdaweq import fixtures as fx
from hdaweq import precubical as pc
from hdaweq.precubical import Path, PrecubicalError, PrecubicalSet

from helpers import random_hda


def loop_set():
    return PrecubicalSet.build([("v", 0), ("e", 1, ["v"], ["v"])])


def square_set():
    return pc.cube(2)


def test_interval_and_square_validate():
    assert pc.validate(pc.interval(0, 2)).ok
    assert pc.validate(pc.tensor(pc.interval(0, 1), pc.interval(0, 1))).ok


def test_broken_square_reports_one_violation():
    P = PrecubicalSet.build(
        [
            ("o", 0),
            ("p", 0),
            ("q", 0),
            ("r", 0),
            ("a", 1, ["o"], ["p"]),
            ("b", 1, ["o"], ["q"]),
            ("a2", 1, ["q"], ["r"]),
            ("b2", 1, ["p"], ["r"]),
            # d0_1 should be b; putting b2 there breaks d0_1 d0_2 = d0_1 d0_1
            ("x", 2, ["b2", "a"], ["b2", "a2"]),
        ]
    )
    errors = pc.validate(P).errors
    assert errors
    assert any("d^0_1 d^0_2" in e for e in errors)


def test_dangling_face_reported():
    P = PrecubicalSet.build([("v", 0), ("e", 1, ["v"], ["w"])])
    report = pc.validate(P)
    assert not report.ok
    assert "'w' is not a cube" in report.errors[0]


def test_interval_counts():
    assert pc.interval(0, 0).counts() == [1]
    assert pc.interval(0, 3).counts() == [4, 3]
    with pytest.raises(PrecubicalError):
        pc.interval(2, 1)


def test_cube_counts():
    assert pc.cube(3).counts() == [8, 12, 6, 1]
    assert pc.cube(0).counts() == [1]
    for n in range(5):
        assert pc.validate(pc.cube(n)).ok


def test_tensor_counts():
    assert pc.tensor(pc.interval(0, 1), pc.interval(0, 1)).counts() == [4, 4, 1]
    assert pc.tensor(loop_set(), loop_set()).counts() == [1, 2, 1]


def test_tensor_counts_are_convolution():
    rng = random.Random(7)
    for _ in range(30):
        P, Q = random_hda(rng).cubes, random_hda(rng).cubes
        T = pc.tensor(P, Q)
        assert pc.validate(T).ok
        cp, cq = P.counts(), Q.counts()
        expect = [0] * (len(cp) + len(cq) - 1)
        for i, a in enumerate(cp):
            for j, b in enumerate(cq):
                expect[i + j] += a * b
        assert T.counts() == expect


def test_iota_is_regular():
    for n in range(1, 4):
        assert pc.is_regular(pc.cube(n), pc.iota(n))


def test_loop_edge_weakly_regular_only():
    P = loop_set()
    assert not pc.is_regular(P, "e")
    assert pc.is_weakly_regular(P, "e")


def test_toy_square_weakly_regular_only():
    P = fx.toy().cubes
    assert not pc.is_regular(P, "y")
    assert pc.is_weakly_regular(P, "y")
    image = pc.iterated_faces(P, "y")
    assert {image[a] for a in ("00", "0x", "x0", "xx")} == {"I", "x1", "x2", "y"}


def test_iterated_faces_commute_with_faces():
    for n in range(1, 4):
        P = pc.cube(n)
        image = pc.iterated_faces(P, pc.iota(n))
        assert image == {a: pc.address_id(a) for a in pc.addresses(n)}
        for a in pc.addresses(n):
            for i in range(1, a.count("x") + 1):
                for k in (0, 1):
                    assert image[pc.address_face(a, k, i)] == P.face(image[a], k, i)


def test_star_examples():
    I = pc.interval(0, 1)
    assert pc.star(I, "0") == {"0", "[0,1]"}
    C = pc.cube(2)
    assert pc.star(C, pc.iota(2)) == {pc.iota(2)}
    A = fx.glued_squares()
    face = A.cubes.face("lower", 1, 1)
    assert face == "p2>p5"
    assert pc.star(A.cubes, face) == {"lower", face}


def test_removing_star_leaves_valid_set():
    rng = random.Random(3)
    for _ in range(40):
        P = random_hda(rng).cubes
        for x in P.dims:
            st = pc.star(P, x)
            assert x in st
            assert pc.validate(P.remove(st)).ok


def test_concat_and_unit():
    C = pc.cube(2)
    omega = Path.make(C, "(0,0)", ["([0,1],0)", "(1,[0,1])"])
    unit = Path.make(C, "(0,0)", [])
    assert pc.concat(unit, omega) == omega
    assert pc.concat(omega, Path.make(C, "(1,1)", [])) == omega
    with pytest.raises(PrecubicalError):
        pc.concat(omega, omega)


def test_path_make_rejects_gaps():
    C = pc.cube(2)
    with pytest.raises(PrecubicalError):
        Path.make(C, "(0,0)", ["(1,[0,1])"])


def test_enumerate_paths_square_and_cube():
    C2 = pc.cube(2)
    long = [p for p in pc.enumerate_paths(C2, "(0,0)", 2) if len(p) == 2]
    assert len(long) == 2 and all(p.end == "(1,1)" for p in long)
    C3 = pc.cube(3)
    maximal = [p for p in pc.enumerate_paths(C3, "(0,0,0)", 3) if len(p) == 3]
    assert len(maximal) == 6


def test_enumeration_is_deterministic():
    P = fx.peterson().cubes
    a = pc.enumerate_paths(P, "q01", 6)
    b = pc.enumerate_paths(P, "q01", 6)
    assert a == b
    assert len(set(a)) == len(a)


def test_square_boundary_paths_dihomotopic():
    C = pc.cube(2)
    paths = [p for p in pc.enumerate_paths(C, "(0,0)", 2) if len(p) == 2]
    assert pc.dihomotopic(C, paths[0], paths[1])


def test_cube3_maximal_paths_one_class():
    C = pc.cube(3)
    maximal = {p for p in pc.enumerate_paths(C, "(0,0,0)", 3) if len(p) == 3}
    for p in maximal:
        assert pc.dihomotopy_class(C, p) == maximal


def test_unfilled_square_not_dihomotopic():
    C = pc.cube(2).remove({pc.iota(2)})
    paths = [p for p in pc.enumerate_paths(C, "(0,0)", 2) if len(p) == 2]
    assert len(paths) == 2
    assert not pc.dihomotopic(C, paths[0], paths[1])


def test_dihomotopy_class_is_a_class():
    rng = random.Random(11)
    for _ in range(20):
        P = random_hda(rng).cubes
        for v in P.vertices:
            for p in pc.enumerate_paths(P, v, 4):
                cls = pc.dihomotopy_class(P, p)
                assert p in cls
                for q in cls:
                    assert (q.start, q.end, len(q)) == (p.start, p.end, len(p))
                    assert pc.dihomotopy_class(P, q) == cls
