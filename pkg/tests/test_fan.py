import itertools
import random

import pytest

from fano_forge import datasets
from fano_forge.errors import ResourceError, ShapeError
from fano_forge.exactla import IntMatrix, det, dot
from fano_forge.fan import (
    Cone,
    Fan,
    canonical_labeling,
    chart_generators,
    classify_cone,
    closed_embedding_chart_check,
    dual_cone_generators,
    face_fan,
    hilbert_bound,
    normal_fan,
    singularity_report,
    toric_morphism_check,
)
from fano_forge.polytope import LatticePolytope

SMOOTH = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
ODP = [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]
# the diamond has area 2, so its cone is Gorenstein but not an ODP
DIAMOND = [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)]
# cone over a triangle of area 3/2: index-3 cyclic quotient singularity
QUOTIENT = [(1, 0, 1), (0, 1, 1), (-1, -1, 1)]
# cone over a unit square with a non-unimodular edge frame: not an ODP
WIDE = [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -2, 1)]


def brute_hilbert_basis(cone, box=4):
    pts = [
        m
        for m in itertools.product(range(-box, box + 1), repeat=cone.ambient_dim)
        if any(m) and all(dot(m, r) >= 0 for r in cone.rays)
    ]
    pset = set(pts)
    return sorted(
        m for m in pts if not any(n != m and tuple(a - b for a, b in zip(m, n)) in pset for n in pts)
    )


@pytest.mark.parametrize("rays", [SMOOTH, ODP, QUOTIENT])
def test_dual_generators_match_brute_force(rays):
    cone = Cone(rays)
    assert dual_cone_generators(cone, bound=max(3, hilbert_bound(cone))) == brute_hilbert_basis(cone)


def test_odp_dual_generators():
    gens = dual_cone_generators(Cone(ODP))
    assert len(gens) == 4
    lab = canonical_labeling(Cone(ODP))
    assert tuple(a + b for a, b in zip(lab.x, lab.y)) == tuple(a + b for a, b in zip(lab.z, lab.w))
    lab.validate()


def test_hilbert_bound_too_small_raises():
    with pytest.raises(ResourceError):
        dual_cone_generators(Cone(ODP), bound=1)


def test_classification():
    assert classify_cone(Cone(SMOOTH)).kind == "Smooth"
    assert classify_cone(Cone(ODP)).kind == "ODP"
    assert classify_cone(Cone(QUOTIENT)).kind == "Other"
    assert classify_cone(Cone(QUOTIENT)).report["multiplicity"] == 3
    assert classify_cone(Cone(WIDE)).kind == "Other"
    assert classify_cone(Cone(DIAMOND)).kind == "Other"
    assert classify_cone(Cone([(1, 0, 0), (0, 1, 0)])).kind == "Smooth"


def test_cone_validation():
    with pytest.raises(ShapeError):
        Cone([(1, 0), (-1, 0)])
    with pytest.raises(ShapeError):
        Cone([(2, 0), (0, 1)])
    with pytest.raises(ShapeError):
        Cone([(1, 0), (1, 1), (0, 1)])


def test_contains_and_faces():
    c = Cone(ODP)
    assert c.contains((1, 1, 2))
    assert not c.contains((0, 0, -1))
    assert c.face_containing([(1, 0, 1)]) == (1,)
    assert c.gorenstein_point() == (0, 0, 1)


def random_unimodular(rng, d=3, steps=12):
    g = IntMatrix.identity(d)
    for _ in range(steps):
        i, j = rng.sample(range(d), 2)
        e = [[int(a == b) for b in range(d)] for a in range(d)]
        e[i][j] = rng.choice((-2, -1, 1, 2))
        g = IntMatrix(e) @ g
    if rng.random() < 0.5:
        g = IntMatrix([[-x for x in g[0]]] + [list(r) for r in g.rows[1:]])
    assert abs(det(g)) == 1
    return g


@pytest.mark.parametrize("seed", range(100))
def test_classification_gl_invariant(seed):
    rng = random.Random(seed)
    g = random_unimodular(rng)
    for rays in (SMOOTH, ODP, QUOTIENT, WIDE, DIAMOND):
        img = Cone([g @ r for r in rays])
        assert classify_cone(img).kind == classify_cone(Cone(rays)).kind


def test_face_fan_of_octahedron_is_p1_cubed():
    O = LatticePolytope.from_vertices([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])
    F = face_fan(O)
    rep = singularity_report(F)
    assert rep["smooth"] and len(F.max_cones) == 8


def test_normal_fan_of_cube_is_octahedral():
    C = LatticePolytope.from_vertices(list(itertools.product((-1, 1), repeat=3)))
    F = normal_fan(C)
    assert len(F.rays) == 6 and len(F.max_cones) == 8


def test_fan_names_and_json_roundtrip():
    data, _ = datasets.load("ambient_f.json")
    F = datasets.fan_of(data)
    c = F.max_cones[0]
    assert F.cone_index(F.cone_name(c)[1:]) == tuple(sorted(c))
    assert Fan.from_json(F.to_json()) == F
    assert F.smallest_cone_containing([(0, 0, 0)]) == ()


def test_morphism_and_chart_checks():
    src, _ = datasets.load("p735.json")
    tgt, _ = datasets.load("ambient_f.json")
    emb, _ = datasets.load("embed_a.json")
    _, FX = datasets.polytope_and_fan(src)
    FF = datasets.fan_of(tgt)
    A = IntMatrix(emb["A"])
    mc = toric_morphism_check(A, FX, FF)
    assert mc.ok and len(mc.table) == 12
    for c in FX.max_cones:
        t = FF.cone_index(mc.table[FX.cone_name(c, "s")][1:])
        assert closed_embedding_chart_check(A, FX.cone(c), FF.cone(t)).ok
    assert closed_embedding_chart_check(IntMatrix.identity(3), Cone(ODP), Cone(ODP)).ok


def test_chart_generators_unimodular():
    gens = chart_generators(Cone([(1, 0, 0), (1, 1, 0)]), ["a", "b"])
    assert set(gens) == {"ua", "ub", "p1", "-p1"}
    assert dot(gens["ua"], (1, 0, 0)) == 1 and dot(gens["ua"], (1, 1, 0)) == 0
