import pytest

from fano_forge import datasets
from fano_forge.embedding import (
    GitPresentation,
    Scaffolding,
    dehomogenize,
    divisor_sequence,
    eliminate_linear_cone,
    equation_text,
    image_binomial,
    laurent_inversion,
    match_presentations,
    ray_decomposition,
    scaffolding_hull,
)
from fano_forge.errors import ShapeError
from fano_forge.exactla import IntMatrix
from fano_forge.fan import Fan
from fano_forge.polyring import parse

P2 = Fan(((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (0, 2)))
P1P1 = Fan(((1, 0), (-1, 0), (0, 1), (0, -1)), ((0, 2), (0, 3), (1, 2), (1, 3)))
P1 = Fan(((1,), (-1,)), ((0,), (1,)))


def test_divisor_sequence_p2_and_p1p1():
    ds = divisor_sequence(P2)
    assert ds.weights.tolist() == [[1, 1, 1]]
    assert ds.torsion == () and ds.is_exact()
    assert ds.anticanonical() == (3,)
    ds = divisor_sequence(P1P1)
    assert ds.weights.tolist() == [[1, 1, 0, 0], [0, 0, 1, 1]]
    assert ds.anticanonical() == (2, 2)


def test_divisor_sequence_weighted_and_torsion():
    wp = Fan(((1, 0), (0, 1), (-1, -2)), ((0, 1), (1, 2), (0, 2)))
    assert divisor_sequence(wp).weights.tolist() == [[1, 2, 1]]
    fake = Fan(((2, -1), (-1, 2), (-1, -1)), ((0, 1), (1, 2), (0, 2)))
    ds = divisor_sequence(fake)
    assert ds.torsion == (3,)
    assert ds.weights.tolist() == [[1, 1, 1]]


def test_supplied_basis():
    ds = divisor_sequence(P1P1, [[1, 1, 1, 1], [0, 0, 1, 1]])
    assert ds.weights.tolist() == [[1, 1, 1, 1], [0, 0, 1, 1]]
    with pytest.raises(ShapeError):
        divisor_sequence(P1P1, [[2, 2, 0, 0], [0, 0, 1, 1]])


def test_line_in_p2():
    A = IntMatrix([[1], [0]])
    pb = ray_decomposition(A, P1, P2)
    # A(1) = r1, A(-1) = r2 + r3
    assert pb.B.tolist() == [[1, 0], [0, 1], [0, 1]]
    binom, m = image_binomial(A, P1, P2, ("u1", "u2", "u3"))
    assert m == (0, 1)
    assert str(binom) == "u2 - u3"
    assert equation_text(binom) == "u2 = u3"


def test_dehomogenize():
    eq = parse("u5*u7 - u1*u2*u3*u4*u6^2", [f"u{i}" for i in range(1, 8)])
    names = [f"u{i}" for i in range(1, 8)]
    out = dehomogenize(eq, (0, 1, 4, 6), names, {"u5": "x", "u7": "y", "u1": "z", "u2": "w"})
    assert out == parse("x*y - z*w", out.vars)


def test_eliminate_linear_cone_and_match():
    W = IntMatrix([[1, 1, 2, 1]])
    pres = GitPresentation(W, ("a", "b", "c", "d"), [parse("c - a*b", ["a", "b", "c", "d"]), parse("c*d - a^3", ["a", "b", "c", "d"])])
    red = eliminate_linear_cone(pres)
    assert red.reduced and red.eliminated == "c"
    assert [str(e) for e in red.presentation.equations] == ["-a^3 + a*b*d"]
    other = GitPresentation(IntMatrix([[1, 1, 1]]), ("p", "q", "r"), [parse("p^3 - q*r*p", ["p", "q", "r"])])
    ren = match_presentations(red.presentation, other)
    assert ren is not None and ren["a"] == "p"
    assert match_presentations(red.presentation, GitPresentation(IntMatrix([[1, 2, 1]]), ("p", "q", "r"), other.equations)) is None


def test_laurent_inversion_shipped():
    data, _ = datasets.load("scaffolding.json")
    sc = Scaffolding.from_json(data)
    pres = laurent_inversion(sc)
    assert pres.weights.tolist() == data["expect"]["weights"]
    assert pres.stability == (1, 1, 1)
    P, _ = datasets.polytope_and_fan(datasets.load("p735.json")[0])
    assert scaffolding_hull(sc) == P


def test_laurent_rejects_bad_relation():
    data, _ = datasets.load("scaffolding.json")
    bad = dict(data, relations=[[1, 1, 1, 1, 1], [0, 0, 1, -1, 1]])
    with pytest.raises(ShapeError):
        laurent_inversion(Scaffolding.from_json(bad))
