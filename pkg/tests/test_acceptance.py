"""Acceptance criteria, one test per criterion.

Each test runs the CLI command in-process, checks the stated values at
exact equality and the stated time limit, and prints one PASS/FAIL line
(visible even under pytest's output capture).
"""

import itertools
import json
import random
import time

import pytest
import sympy

from fano_forge import cli, datasets
from fano_forge.exactla import IntMatrix, det, hnf, snf
from fano_forge.fan import Cone, classify_cone
from fano_forge.polyring import Ideal, MonomialOrder, MultiPoly, buchberger, is_groebner, parse, reduce, s_polynomial


@pytest.fixture
def report_line(capsys):
    def emit(name, ok, seconds, note=""):
        with capsys.disabled():
            tag = "PASS" if ok else "FAIL"
            print(f"\n[acceptance] {tag} {name} ({seconds:.2f}s){' ' + note if note else ''}")
    return emit


def run_cli(*argv):
    args = cli.build_parser().parse_args(list(argv) + ["--format", "json"])
    t0 = time.perf_counter()
    rep = cli.run(args)
    return rep, time.perf_counter() - t0


def failed(rep):
    return [c["name"] for c in rep.checks if not c["passed"]]


def test_criterion_1_analyze(report_line):
    rep, dt = run_cli("analyze", "data/p735.json")
    r = rep.results
    ok = (
        r["polar_volume"] == 28
        and all(x == 0 for x in r["polar_barycenter"])
        and r["centrally_symmetric"]
        and r["f_vector"][1] == 20
        and r["edge_lengths"] == [1]
        and r["f_vector"][2] == 12
        and r["facet_shapes"] == {"3": 8, "4": 4}
        and r["singularities"] == {"ODP": 4, "Smooth": 8}
        and rep.ok
        and dt < 5
    )
    report_line("1 analyze p735", ok, dt, str(failed(rep) or ""))
    assert ok, failed(rep)


def test_criterion_2_aut(report_line):
    rep, dt = run_cli("aut", "data/p735.json")
    r = rep.results
    table = {
        "g1": ["t_alpha", "t_beta", "t_gamma", "t_delta"],
        "g2": ["t_alpha", "t_delta", "t_gamma", "t_beta"],
        "g3": ["-t_beta", "t_gamma", "t_delta", "-t_alpha"],
    }
    ok = (
        r["order"] == 16
        and [r["generators"][g]["member"] for g in ("g1", "g2", "g3")] == [True] * 3
        and [r["generators"][g]["order"] for g in ("g1", "g2", "g3")] == [2, 2, 4]
        and r["actions"] == table
        and r["t1_degrees"] == {
            "t_alpha": [0, -1, -1],
            "t_beta": [0, -1, 1],
            "t_gamma": [0, 1, 1],
            "t_delta": [0, 1, -1],
        }
        and sorted(r["invariant_monomials"]) == ["t_alpha*t_gamma", "t_beta*t_delta"]
        and any(c["name"].startswith("invariant: t_alpha*t_beta*t_gamma*t_delta") and c["passed"] for c in rep.checks)
        and any(c["name"].startswith("invariant: t_alpha*t_gamma - t_beta*t_delta") and c["passed"] for c in rep.checks)
        and rep.ok
        and dt < 10
    )
    report_line("2 aut p735", ok, dt, str(failed(rep) or ""))
    assert ok, failed(rep)


def test_criterion_3_embed(report_line):
    rep, dt = run_cli("embed")
    r = rep.results
    B_rows = [
        [0, 0, 0, 0, 0, 1, 2],
        [1, 0, 0, 0, 1, 0, 0],
        [0, 1, 0, 0, 1, 0, 0],
        [1, 0, 0, 0, 0, 0, 1],
        [0, 1, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 2, 1, 0],
        [0, 0, 1, 0, 0, 0, 1],
        [0, 0, 0, 1, 0, 0, 1],
        [0, 0, 1, 0, 1, 0, 0],
        [0, 0, 0, 1, 1, 0, 0],
    ]
    cox = [f"u{i}" for i in range(1, 8)]
    binom = parse(r["binomial"], cox)
    ok = (
        r["B_rows"] == B_rows
        and (binom == parse("u5*u7 - u6^2*u1*u2*u3*u4", cox) or -binom == parse("u5*u7 - u6^2*u1*u2*u3*u4", cox))
        and r["morphism"]["ok"]
        and len(r["chart_checks"]) == 12
        and all(v["ok"] for v in r["chart_checks"].values())
        and rep.ok
        and dt < 10
    )
    report_line("3 embed", ok, dt, str(failed(rep) or ""))
    assert ok, failed(rep)


def test_criterion_4_hensel(report_line):
    rep, dt = run_cli("hensel", "--k", "6")
    names = {c["name"]: c["passed"] for c in rep.checks}
    ok = (
        names.get("x1 = x + s2*y + s3*x^2*y")
        and names.get("y1 = y + s1*x")
        and names.get("f1 = s1*s2*x*y + s1*s3*x^3*y")
        and all(names.get(f"invariants_k{k}") for k in range(7))
        and rep.ok
        and dt < 5
    )
    report_line("4 hensel k=6", ok, dt, str(failed(rep) or ""))
    assert ok, failed(rep)


def test_criterion_5_discriminant(report_line):
    rep, dt = run_cli("discriminant", "data/lemma33.json", "--order", "lex")
    base = ["s1", "s2", "s3", "s4"]
    want = parse("s4*(16*s1^2*s2^2 - 32*s1*s2*s3*s4 - 8*s1*s2 + 16*s3^2*s4^2 - 8*s3*s4 + 1)", base)
    gens = [parse(g, base) for g in rep.results["generators"]]
    ok = len(gens) == 1 and gens[0] == want and rep.ok and dt < 600
    report_line("5 discriminant lex + block", ok, dt, str(failed(rep) or ""))
    assert ok, failed(rep)


def test_criterion_6_deform(report_line):
    rep, dt = run_cli("deform")
    v = rep.results["versality"]
    fiber = ("x", "y", "z", "w", "c1", "c2", "c3", "c4")
    expected = {
        "alpha": "x*y - w*z + c1*w^2*z^2 + c2*w^2 + c3*z^2 + c4",
        "beta": "z*w - x*y + c1*y^2 + c2*x^2*y^2 + c3 + c4*x^2",
        "gamma": "z*w - x*y + c1 + c2*y^2 + c3*x^2 + c4*x^2*y^2",
        "delta": "z*w - x*y + c1*x^2 + c2 + c3*x^2*y^2 + c4*y^2",
    }
    eqs_ok = all(parse(v["charts"][k]["equation"], fiber) == parse(t, fiber) for k, t in expected.items())
    ok = (
        eqs_ok
        and v["psi"] == {"t_alpha": "c4", "t_beta": "c3", "t_gamma": "c1", "t_delta": "c2"}
        and v["bijective"] is True
        and v["discriminant_union"] == "c1*c2*c3*c4 = 0"
        and all(c["discriminant_cofactor_unit"] for c in v["charts"].values())
        and rep.ok
        and dt < 900
    )
    report_line("6 deform", ok, dt, str(failed(rep) or ""))
    assert ok, failed(rep)


def test_criterion_7_laurent(report_line):
    rep, dt = run_cli("laurent", "data/scaffolding.json")
    r = rep.results
    pres = r["presentation"]
    ys = [f"y{i}" for i in range(1, 9)]
    eqs = [parse(e.replace(" = ", " - (") + ")", ys) for e in pres["equations"]]
    want = [parse("y4*y5*y7 - y3", ys), parse("y6*y8 - y7*y1*y2*y3", ys)]
    ok = (
        pres["weights"] == [[1, 0, 0, 1, 0, 0, -1, 0], [0, 1, 0, 0, 1, 0, -1, 0], [0, 0, 1, 0, 0, 1, 1, 1]]
        and pres["stability"] == [1, 1, 1]
        and all(any(e == w or e == -w for e in eqs) for w in want)
        and r["linear_cone"]["reduced"]
        and r["renaming_to_ambient"] is not None
        and rep.ok
        and dt < 5
    )
    report_line("7 laurent", ok, dt, f"renaming {json.dumps(r.get('renaming_to_ambient'))}")
    assert ok, failed(rep)


# -- criterion 8: property suites --------------------------------------------------------------

V = ("x", "y", "z")
SYM = sympy.symbols("x y z")


def _rand_poly(rng):
    terms = {}
    for _ in range(3):
        e = tuple(rng.randint(0, 2) for _ in V)
        terms[e] = terms.get(e, 0) + rng.choice([-2, -1, 1, 2])
    return MultiPoly(terms, V)


def _groebner_suite(n=25):
    order = MonomialOrder.degrevlex(V)
    for seed in range(n):
        rng = random.Random(500 + seed)
        gens = [_rand_poly(rng) for _ in range(rng.randint(2, 3))]
        gb = buchberger(Ideal(gens, V), order)
        if buchberger(Ideal(gens[::-1], V), order) != gb or not is_groebner(gb, order):
            return False
        for i, j in itertools.combinations(range(len(gb)), 2):
            if not reduce(s_polynomial(gb[i], gb[j], order), gb, order).is_zero():
                return False
        loc = {str(s): s for s in SYM}
        ref = sympy.groebner([sympy.sympify(str(g).replace("^", "**"), locals=loc) for g in gens], *SYM, order="grevlex", domain="QQ")
        if len(ref.exprs) != len(gb):
            return False
        for g in gb:
            if not ref.contains(sympy.sympify(str(g).replace("^", "**"), locals=loc)):
                return False
    return True


def _unimodular(rng, d=3):
    g = IntMatrix.identity(d)
    for _ in range(10):
        i, j = rng.sample(range(d), 2)
        e = [[int(a == b) for b in range(d)] for a in range(d)]
        e[i][j] = rng.choice((-1, 1, 2))
        g = IntMatrix(e) @ g
    return g


def _conjugation_suite(n=100):
    cones = [
        [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
        [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)],
        [(1, 0, 1), (0, 1, 1), (-1, -1, 1)],
        [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)],
    ]
    kinds = [classify_cone(Cone(c)).kind for c in cones]
    if kinds != ["Smooth", "ODP", "Other", "Other"]:
        return False
    for seed in range(n):
        g = _unimodular(random.Random(seed))
        if abs(det(g)) != 1:
            return False
        if [classify_cone(Cone([g @ r for r in c])).kind for c in cones] != kinds:
            return False
    return True


def _polytope_suite():
    for name in ("p735.json", "ambient_f.json", "shape_z.json"):
        P, _ = datasets.polytope_and_fan(datasets.load(name)[0])
        fc = P.face_counts()
        if sum((-1) ** i * fc[i] for i in range(-1, P.dim + 1)) != 0:
            return False
        if P.is_reflexive() and P.polar().polar() != P:
            return False
    return True


def _normal_form_suite(n=100):
    for seed in range(n):
        rng = random.Random(9000 + seed)
        m, k = rng.randint(1, 5), rng.randint(1, 5)
        M = IntMatrix([[rng.randint(-9, 9) for _ in range(k)] for _ in range(m)])
        H, U = hnf(M)
        S, U2, V2 = snf(M)
        if abs(det(U)) != 1 or U @ M != H:
            return False
        if abs(det(U2)) != 1 or abs(det(V2)) != 1 or U2 @ M @ V2 != S:
            return False
    return True


def test_criterion_8_properties(report_line):
    t0 = time.perf_counter()
    parts = {
        "groebner (25 ideals)": _groebner_suite(),
        "GL-invariance (100 conjugations)": _conjugation_suite(),
        "polar involution + Euler": _polytope_suite(),
        "HNF/SNF unimodularity (100 matrices)": _normal_form_suite(),
    }
    dt = time.perf_counter() - t0
    ok = all(parts.values()) and dt < 120
    report_line("8 property suites", ok, dt, ", ".join(k for k, v in parts.items() if not v))
    assert ok, parts


def test_cli_exit_codes():
    assert cli.main(["hensel", "--k", "2", "--format", "json"]) == 0
    assert cli.main(["analyze", "no_such_file.json"]) == 2
