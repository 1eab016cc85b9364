import itertools

import pytest

from fano_forge import datasets
from fano_forge.exactla import IntMatrix
from fano_forge.fan import Cone, canonical_labeling
from fano_forge.polyring import parse
from fano_forge.polytope import LatticePolytope
from fano_forge.symmetry import (
    SignedPermutation,
    check_group_invariance,
    deformation_action,
    element_order,
    polytope_automorphisms,
    t1_weight,
    torus_invariant_monomials,
)


def test_group_orders_of_standard_polytopes():
    cube = LatticePolytope.from_vertices(itertools.product((-1, 1), repeat=3))
    assert polytope_automorphisms(cube).order == 48
    tri = LatticePolytope.from_vertices([(1, 0), (0, 1), (-1, -1)])
    G = polytope_automorphisms(tri)
    assert G.order == 6 and G.is_closed()
    square = LatticePolytope.from_vertices([(1, 0), (0, 1), (-1, 0), (0, -1)])
    assert polytope_automorphisms(square).order == 8


def test_element_order():
    assert element_order(IntMatrix([[0, -1], [1, 0]])) == 4
    assert element_order(IntMatrix([[0, -1], [1, -1]])) == 3


def test_signed_permutation_algebra():
    a = SignedPermutation((1, 0, 2), (1, -1, 1))
    b = SignedPermutation((0, 2, 1), (-1, 1, 1))
    names = ["t1", "t2", "t3"]
    p = parse("t1*t2 + t3^2 - 2*t1", names)
    # substituting by b, then by a, is substituting by a * b
    assert (a * b).apply(p, names) == a.apply(b.apply(p, names), names)
    e = SignedPermutation.identity(3)
    assert e * a == a and a * e == a
    assert a.describe(names) == ["t1 -> t2", "t2 -> -t1", "t3 -> t3"]


def test_t1_weight_of_standard_odp():
    cone = Cone([(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)])
    assert t1_weight(cone) == (0, 0, -1)


def test_invariant_monomials():
    assert torus_invariant_monomials([(1,), (-1,)]) == [(1, 1)]
    assert torus_invariant_monomials([(1, 0), (0, 1)]) == []
    assert torus_invariant_monomials([(2,), (-1,)]) == [(1, 2)]
    W = [(0, -1, -1), (0, -1, 1), (0, 1, 1), (0, 1, -1)]
    assert torus_invariant_monomials(W) == [(1, 0, 1, 0), (0, 1, 0, 1)]


def test_shipped_action_composition():
    data, _ = datasets.load("p735.json")
    P, _ = datasets.polytope_and_fan(data)
    charts = datasets.charts_of(data)
    G = polytope_automorphisms(P)
    acts = {g: deformation_action(g, charts) for g in G}
    for g in G:
        for h in G:
            assert acts[g @ h] == acts[g] * acts[h]
    names = [f"t_{c.name}" for c in charts]
    inv = parse("t_alpha*t_gamma - t_beta*t_delta", names)
    assert check_group_invariance(inv, list(acts.values()), names)
    assert not check_group_invariance(parse("t_alpha*t_gamma", names), list(acts.values()), names)


def test_canonical_charts_give_consistent_action():
    # the composition law does not depend on the labels chosen per chart
    data, _ = datasets.load("p735.json")
    P, fan = datasets.polytope_and_fan(data)
    charts = [canonical_labeling(fan.cone(c), fan.cone_name(c)) for c in fan.max_cones if len(c) == 4]
    assert len(charts) == 4
    G = polytope_automorphisms(P)
    acts = {g: deformation_action(g, charts) for g in G}
    for g in G:
        for h in G:
            assert acts[g @ h] == acts[g] * acts[h]
