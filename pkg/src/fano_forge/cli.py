"""Command-line interface: ``fano-forge <command> [options] <paths>``.

Every command builds a :class:`RunReport` holding its inputs (with sha256
hashes), structured results and a list of named pass/fail checks.  The
exit status is 0 iff every check passes, 1 if one fails and 2 on bad input.
Reports are deterministic; wall-clock timings are only included with
``--timings``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import datasets
from .deformation import DEFAULT_K, FIBER, chart_family, hensel_lift, lift_target, versality_report
from .embedding import (
    GitPresentation,
    Scaffolding,
    divisor_sequence,
    eliminate_linear_cone,
    equation_text,
    image_binomial,
    laurent_inversion,
    match_presentations,
    ray_decomposition,
    scaffolding_hull,
    section_polytope_vertices,
)
from .errors import FanoForgeError
from .exactla import IntMatrix, kernel_basis
from .fan import (
    DEFAULT_HILBERT_BOUND,
    ChartLabeling,
    canonical_labeling,
    classify_cone,
    closed_embedding_chart_check,
    singularity_report,
    toric_morphism_check,
)
from .polytope import kpolystable_certificate
from .polyring import MonomialOrder, MultiPoly, discriminant, parse
from .symmetry import (
    check_group_invariance,
    deformation_action,
    element_order,
    polytope_automorphisms,
    t1_weight,
    torus_invariant_monomials,
)

COMMANDS = ("analyze", "aut", "embed", "deform", "discriminant", "laurent", "hensel")


@dataclass
class RunReport:
    command: str
    inputs: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    error: str | None = None

    def add_input(self, given: str, real) -> None:
        self.inputs.append({"path": str(given), "sha256": datasets.sha256(real)})

    def check(self, name: str, passed: bool, detail: Any = None) -> bool:
        entry = {"name": name, "passed": bool(passed)}
        if detail is not None:
            entry["detail"] = _jsonable(detail)
        self.checks.append(entry)
        return bool(passed)

    @property
    def ok(self) -> bool:
        return self.error is None and all(c["passed"] for c in self.checks)

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "command": self.command,
            "inputs": self.inputs,
            "results": _jsonable(self.results),
            "checks": self.checks,
            "verdict": "PASS" if self.ok else "FAIL",
        }
        if self.error is not None:
            out["error"] = self.error
        if timings:
            out["timings"] = {k: round(v, 4) for k, v in self.timings.items()}
        return out

    def to_text(self, timings: bool = False) -> str:
        lines = [f"command: {self.command}"]
        for inp in self.inputs:
            lines.append(f"input: {inp['path']} (sha256 {inp['sha256'][:16]})")
        if self.error is not None:
            lines.append(f"error: {self.error}")
        lines.append("results:")
        _render(_jsonable(self.results), lines, 1)
        lines.append("checks:")
        for c in self.checks:
            tag = "PASS" if c["passed"] else "FAIL"
            line = f"  [{tag}] {c['name']}"
            if not c["passed"] and "detail" in c:
                line += f": {json.dumps(c['detail'])}"
            lines.append(line)
        if timings:
            lines.append("timings:")
            for k, v in self.timings.items():
                lines.append(f"  {k}: {v:.4f}s")
        lines.append(f"verdict: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, IntMatrix):
        return x.tolist()
    if isinstance(x, MultiPoly):
        return str(x)
    return x


def _render(x, lines: list, depth: int) -> None:
    pad = "  " * depth
    if isinstance(x, dict):
        for k, v in x.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                _render(v, lines, depth + 1)
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(x, list):
        for v in x:
            if isinstance(v, (dict, list)) and not _flat_list(v):
                lines.append(f"{pad}-")
                _render(v, lines, depth + 1)
            else:
                lines.append(f"{pad}- {json.dumps(v)}")


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(
        not isinstance(e, (dict, list)) or (isinstance(e, list) and all(not isinstance(f, (dict, list)) for f in e))
        for e in v
    )


class _Timer:
    def __init__(self, report: RunReport, name: str):
        self.report, self.name = report, name

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        self.report.timings[self.name] = time.perf_counter() - self.t0


def _poly_equal(text: str, p: MultiPoly, variables=None) -> bool:
    q = parse(text, variables)
    return q == p


# -- analyze -------------------------------------------------------------------------


def cmd_analyze(path: str, opts) -> RunReport:
    rep = RunReport("analyze")
    data, real = datasets.load(path)
    rep.add_input(path, real)
    with _Timer(rep, "analyze"):
        P, fan = datasets.polytope_and_fan(data)
        fv = P.f_vector()
        shapes = {str(k): v for k, v in sorted(fv.facet_shape_counts().items())}
        counts = P.face_counts()
        r = rep.results
        r["dim"] = P.dim
        r["f_vector"] = [counts[i] for i in range(P.dim)]
        r["facet_shapes"] = shapes
        r["edge_lengths"] = sorted(set(fv.edge_lengths))
        r["reflexive"] = P.is_reflexive()
        r["centrally_symmetric"] = P.is_centrally_symmetric()
        euler = sum((-1) ** i * counts[i] for i in range(-1, P.dim + 1))
        rep.check("euler_relation", euler == 0, euler)
        if P.is_reflexive():
            Q = P.polar()
            rep.check("polar_involution", Q.polar() == P)
            vols = {s: Q.normalized_volume(s) for s in ("lexmin", "lexmax")}
            bcs = {s: Q.barycenter(s) for s in ("lexmin", "lexmax")}
            rep.check("polar_volume_strategy_independent", vols["lexmin"] == vols["lexmax"], vols)
            rep.check("barycenter_strategy_independent", bcs["lexmin"] == bcs["lexmax"])
            r["polar_vertices"] = [list(v) for v in Q.vertices]
            r["polar_volume"] = vols["lexmin"]
            r["polar_barycenter"] = list(bcs["lexmin"])
            r["polar_facet_interior_points"] = Q.facet_interior_points()
        r["kpolystable"] = kpolystable_certificate(P).verdict
        sing = singularity_report(fan)
        r["n_rays"] = len(fan.rays)
        r["n_max_cones"] = len(fan.max_cones)
        r["singularities"] = sing["counts"]
        r["cones"] = {c["cone"]: c["class"] for c in sing["cones"]}
    ex = datasets.expect(data)
    if "n_vertices" in ex:
        rep.check("n_vertices", len(P.vertices) == ex["n_vertices"], len(P.vertices))
    if "n_facets" in ex:
        rep.check("n_facets", len(P.facets) == ex["n_facets"], len(P.facets))
    if "facet_shapes" in ex:
        rep.check("facet_shapes", shapes == ex["facet_shapes"], shapes)
    if "edge_count" in ex:
        rep.check("edge_count", counts[1] == ex["edge_count"], counts[1])
        rep.check("edges_unit_length", set(fv.edge_lengths) == {1}, sorted(set(fv.edge_lengths)))
    if "polar_volume" in ex:
        rep.check("polar_volume", r.get("polar_volume") == ex["polar_volume"], r.get("polar_volume"))
        rep.check("polar_barycenter_zero", r.get("kpolystable") is True, r.get("polar_barycenter"))
        rep.check("centrally_symmetric", P.is_centrally_symmetric())
        rep.check("kpolystable_verdict", r.get("kpolystable") is True)
    if "max_cones" in ex:
        want = sorted(sorted(c) for c in ex["max_cones"])
        got = sorted([i + 1 for i in c] for c in fan.max_cones)
        rep.check("max_cones", want == got, got)
    if "singularities" in ex:
        rep.check("singularities", sing["counts"] == ex["singularities"], sing["counts"])
    if "n_rays" in ex:
        rep.check("n_rays", len(fan.rays) == ex["n_rays"], len(fan.rays))
    if "rays" in ex:
        rep.check("rays", [list(x) for x in fan.rays] == ex["rays"], [list(x) for x in fan.rays])
    if "n_max_cones" in ex:
        rep.check("n_max_cones", len(fan.max_cones) == ex["n_max_cones"], len(fan.max_cones))
    if ex.get("all_smooth"):
        rep.check("all_cones_smooth", sing["smooth"], sing["counts"])
    return rep


# -- aut ---------------------------------------------------------------------------------


def _charts_for(data: dict, fan) -> list[ChartLabeling]:
    charts = datasets.charts_of(data)
    if charts or "charts" in data:
        return charts
    out = []
    for c in fan.max_cones:
        cone = fan.cone(c)
        if classify_cone(cone).kind == "ODP":
            out.append(canonical_labeling(cone, fan.cone_name(c, "")))
    return out


def cmd_aut(path: str, opts) -> RunReport:
    rep = RunReport("aut")
    data, real = datasets.load(path)
    rep.add_input(path, real)
    r = rep.results
    ex = datasets.expect(data)
    with _Timer(rep, "automorphisms"):
        P, fan = datasets.polytope_and_fan(data)
        G = polytope_automorphisms(P)
        r["order"] = G.order
        rep.check("group_closed", G.is_closed())
        gens = datasets.generators_of(data)
        r["generators"] = {k: {"matrix": g.tolist(), "member": g in G, "order": element_order(g)} for k, g in gens.items()}
        if gens:
            sub = G.generated_subgroup(gens.values())
            r["generated_order"] = len(sub)
    with _Timer(rep, "actions"):
        charts = _charts_for(data, fan)
        for ch in charts:
            ch.validate()
        names = [f"t_{c.name}" for c in charts]
        r["charts"] = [c.name for c in charts]
        r["t1_degrees"] = {n: list(t1_weight(c.cone)) for n, c in zip(names, charts)}
        r["t1_convention"] = (
            "degree of t = minus the Gorenstein point of the chart cone; "
            "weights of the torus action on the parameter space are the negatives"
        )
        acts = {}
        if charts:
            acts = {g: deformation_action(g, charts) for g in G}
            table_src = gens if gens else {}
            r["actions"] = {
                k: [("-" if acts[g].sign[i] < 0 else "") + names[acts[g].perm[i]] for i in range(len(names))]
                for k, g in table_src.items()
            }
            comp = all(acts[a @ b] == acts[a] * acts[b] for a in G for b in G)
            rep.check("action_composition_law", comp, f"{G.order ** 2} pairs")
        else:
            r["actions"] = {}
        weights = [tuple(r["t1_degrees"][n]) for n in names]
        inv = torus_invariant_monomials(weights) if weights else []
        r["invariant_monomials"] = [str(MultiPoly({e: 1}, names)) for e in inv]
    if "aut_order" in ex:
        rep.check("aut_order", G.order == ex["aut_order"], G.order)
    for k, o in ex.get("generator_orders", {}).items():
        g = gens[k]
        rep.check(f"{k}_member_of_order_{o}", g in G and element_order(g) == o, element_order(g))
    if gens and "aut_order" in ex:
        rep.check("generators_generate_group", r["generated_order"] == G.order, r["generated_order"])
    for k, w in ex.get("t1_weights", {}).items():
        got = r["t1_degrees"].get(f"t_{k}")
        rep.check(f"t1_degree_{k}", got == list(w), got)
    for k, row in ex.get("actions", {}).items():
        rep.check(f"action_{k}", r["actions"].get(k) == row, r["actions"].get(k))
    if "invariant_monomials" in ex:
        want = sorted(str(parse(m, names)) for m in ex["invariant_monomials"])
        rep.check("invariant_monomials", sorted(r["invariant_monomials"]) == want, r["invariant_monomials"])
    if "invariant_polynomials" in ex:
        glist = [acts[g] for g in (gens.values() if gens else G)]
        for text in ex["invariant_polynomials"]:
            rep.check(f"invariant: {text}", check_group_invariance(parse(text, names), glist, names))
    return rep


# -- embed ---------------------------------------------------------------------------------


def _load_embedding(path: str, rep: RunReport):
    data, real = datasets.load(path)
    rep.add_input(path, real)
    src, src_real = datasets.load(data["source"], real)
    tgt, tgt_real = datasets.load(data["target"], real)
    rep.add_input(data["source"], src_real)
    rep.add_input(data["target"], tgt_real)
    return data, src, tgt


def cmd_embed(path: str, opts) -> RunReport:
    rep = RunReport("embed")
    data, src_data, tgt_data = _load_embedding(path, rep)
    ex = datasets.expect(data)
    r = rep.results
    A = IntMatrix(data["A"])
    _, FX = datasets.polytope_and_fan(src_data)
    FF = datasets.fan_of(tgt_data)
    cox = tuple(tgt_data.get("cox_names", [f"u{j + 1}" for j in range(len(FF.rays))]))
    with _Timer(rep, "divisor_sequence"):
        ds = divisor_sequence(FF)
        r["weights_hnf"] = ds.weights.tolist()
        r["class_group"] = {"free_rank": ds.free_rank, "torsion": list(ds.torsion)}
        r["anticanonical"] = list(ds.anticanonical())
        rep.check("divisor_sequence_exact", ds.is_exact())
        if "weights_basis" in tgt_data:
            dsb = divisor_sequence(FF, tgt_data["weights_basis"])
            rep.check("weights_match_supplied_basis", dsb.weights.tolist() == tgt_data["weights_basis"])
        texp = datasets.expect(tgt_data)
        if "weights" in texp:
            rep.check("weights_match_up_to_row_ops", divisor_sequence(FF, texp["weights"]) is not None)
            rep.check("weights_bit_exact_hnf", ds.weights.tolist() == texp["weights"], ds.weights.tolist())
        if "anticanonical" in texp:
            rep.check("anticanonical_class", list(ds.anticanonical()) == texp["anticanonical"], list(ds.anticanonical()))
    with _Timer(rep, "morphism"):
        mc = toric_morphism_check(A, FX, FF)
        r["morphism"] = mc.to_json()
        rep.check("toric_morphism", mc.ok, mc.failures)
    if not mc.ok:
        return rep
    charts = datasets.charts_of(src_data)
    with _Timer(rep, "pullback"):
        pb = ray_decomposition(A, FX, FF, tgt_names=cox)
        r["B_rows"] = [list(row) for row in pb.B.T.rows]
        mons = pb.monomials()
        r["pullbacks"] = {k: str(v) for k, v in mons.items()}
        binom, m = None, None
        if len(kernel_basis(A.T)) == 1:
            binom, m = image_binomial(A, FX, FF, cox)
            r["annihilator"] = list(m)
            r["binomial"] = str(binom)
            r["binomial_equation"] = equation_text(binom)
        else:
            r["binomial"] = None
    with _Timer(rep, "charts"):
        chart_results = {}
        for c in FX.max_cones:
            name = FX.cone_name(c, "s")
            tgt_name = mc.table[name]
            tidx = FF.cone_index(tgt_name[1:])
            chk = closed_embedding_chart_check(A, FX.cone(c), FF.cone(tidx), [str(j + 1) for j in tidx])
            chart_results[name] = {"target": tgt_name, "ok": chk.ok}
            for ch in charts:
                if set(ch.rays) == {FX.rays[i] for i in c}:
                    by_vec = {v: k for k, v in ch.generators().items()}
                    chart_results[name]["chart"] = ch.name
                    chart_results[name]["assignment"] = {
                        cox[int(g[1:]) - 1]: by_vec[tuple(v)] for g, v in sorted(chk.assignment.items())
                    }
        r["chart_checks"] = chart_results
        rep.check("all_chart_embeddings", all(v["ok"] for v in chart_results.values()),
                  [k for k, v in chart_results.items() if not v["ok"]])
    by_chart = {v["chart"]: v for v in chart_results.values() if "chart" in v}
    for ch_name, tgt_name in ex.get("cone_map", {}).items():
        got = by_chart.get(ch_name, {}).get("target")
        rep.check(f"cone_map_{ch_name}", got == tgt_name, got)
    if "B_rows" in ex:
        rep.check("B_matrix", r["B_rows"] == ex["B_rows"], r["B_rows"])
        rep.check("A(rho1) = r6 + 2*r7", r["B_rows"][0] == [0, 0, 0, 0, 0, 1, 2], r["B_rows"][0])
    for k, text in ex.get("pullbacks", {}).items():
        rep.check(f"pullback_{k}", _poly_equal(text, mons[k], pb.src_names), str(mons[k]))
    if "annihilator" in ex:
        rep.check("annihilator", m is not None and list(m) == ex["annihilator"], r.get("annihilator"))
    if "binomial" in ex:
        rep.check("image_binomial", binom is not None and _poly_equal(ex["binomial"], binom, cox), r["binomial"])
    for ch_name, assign in ex.get("chart_assignments", {}).items():
        got = by_chart.get(ch_name, {}).get("assignment")
        rep.check(f"chart_assignment_{ch_name}", got == assign, got)
    return rep


# -- deform --------------------------------------------------------------------------------


def cmd_deform(path: str, opts) -> RunReport:
    rep = RunReport("deform")
    data, real = datasets.load(path)
    rep.add_input(path, real)
    src_data, s_real = datasets.load(data["polytope"], real)
    tgt_data, t_real = datasets.load(data["ambient"], real)
    emb_data, e_real = datasets.load(data["embedding"], real)
    for given, rr in ((data["polytope"], s_real), (data["ambient"], t_real), (data["embedding"], e_real)):
        rep.add_input(given, rr)
    ex = datasets.expect(data)
    r = rep.results
    _, FX = datasets.polytope_and_fan(src_data)
    FF = datasets.fan_of(tgt_data)
    A = IntMatrix(emb_data["A"])
    cox = tuple(tgt_data.get("cox_names", [f"u{j + 1}" for j in range(len(FF.rays))]))
    params = tuple(data["params"])
    fam = parse(data["equation"], cox + params)
    ds = divisor_sequence(FF, tgt_data.get("weights_basis"))
    pres = GitPresentation(ds.weights, cox, [fam.substitute({p: 1 for p in params}).with_vars(cox)])
    degree = None
    try:
        # every monomial, with parameters set to 1, has one degree
        degree = pres.equation_degree(pres.equations[0])
    except FanoForgeError:
        pass
    r["family"] = str(fam)
    r["line_bundle"] = list(degree) if degree else None
    if "line_bundle" in ex:
        rep.check("family_homogeneous", degree is not None and list(degree) == ex["line_bundle"], r["line_bundle"])
    charts = datasets.charts_of(src_data)
    with _Timer(rep, "chart_families"):
        fams = [chart_family(fam, c, A, FX, FF, cox, params) for c in charts]
    with _Timer(rep, "versality"):
        vr = versality_report(fams, params, order=opts.order, lift_k=opts.k)
    r["versality"] = vr.to_json()
    for name, text in ex.get("chart_equations", {}).items():
        cf = vr.families[name]
        rep.check(f"chart_equation_{name}", _poly_equal(text, cf.equation, FIBER + params), str(cf.equation))
    if "psi" in ex:
        rep.check("psi", vr.psi == ex["psi"], vr.psi)
    rep.check("psi_bijective", vr.bijective)
    for name, ok in vr.lift_checks.items():
        rep.check(f"lift_normal_form_{name}_order_{opts.k}", ok)
    for name, d in vr.discriminants.items():
        rep.check(f"discriminant_{name}_is_constant_times_unit", d.unit_at_origin, str(d.generator))
    if "discriminant_union" in ex:
        rep.check("discriminant_union", vr.union == ex["discriminant_union"], vr.union)
    return rep


# -- discriminant -------------------------------------------------------------------------


def cmd_discriminant(path: str, opts) -> RunReport:
    rep = RunReport("discriminant")
    data, real = datasets.load(path)
    rep.add_input(path, real)
    ex = datasets.expect(data)
    fiber = opts.fiber.split(",") if opts.fiber else list(data["fiber"])
    base = opts.base.split(",") if opts.base else list(data["base"])
    f = parse(data["polynomial"], fiber + base)
    r = rep.results
    r["order"] = opts.order
    with _Timer(rep, f"groebner_{opts.order}"):
        ideal = discriminant(f, fiber, base, order=opts.order)
    r["generators"] = [str(g) for g in ideal.gens]
    r["principal"] = len(ideal.gens) == 1
    other = "block" if opts.order == "lex" else "lex"
    with _Timer(rep, f"groebner_{other}"):
        ideal2 = discriminant(f, fiber, base, order=other)
    rep.check(f"{other}_order_agrees", [str(g) for g in ideal2.gens] == r["generators"], [str(g) for g in ideal2.gens])
    if "generator" in ex:
        want = parse(ex["generator"], base).primitive(MonomialOrder.lex(base).key_for(base))
        ok = len(ideal.gens) == 1 and ideal.gens[0] == want
        rep.check("principal_generator", ok, r["generators"])
    return rep


# -- laurent ---------------------------------------------------------------------------------


def cmd_laurent(path: str, opts) -> RunReport:
    rep = RunReport("laurent")
    data, real = datasets.load(path)
    rep.add_input(path, real)
    ex = datasets.expect(data)
    r = rep.results
    sc = Scaffolding.from_json(data)
    with _Timer(rep, "laurent_inversion"):
        pres = laurent_inversion(sc)
    r["presentation"] = pres.to_json()
    if sc.shape_rays:
        sp = [section_polytope_vertices(sc.shape_fan, c) for c in sc.struts]
        r["section_polytopes"] = [[list(v) for v in s] for s in sp]
        if "section_polytopes" in ex:
            rep.check("section_polytopes", r["section_polytopes"] == ex["section_polytopes"], r["section_polytopes"])
    if "polytope" in data:
        pdata, preal = datasets.load(data["polytope"], real)
        rep.add_input(data["polytope"], preal)
        P, _ = datasets.polytope_and_fan(pdata)
        rep.check("scaffolding_hull_is_polytope", scaffolding_hull(sc) == P)
    if "weights" in ex:
        rep.check("weight_matrix", pres.weights.tolist() == ex["weights"], pres.weights.tolist())
    if "stability" in ex:
        rep.check("stability", list(pres.stability) == ex["stability"], list(pres.stability))
    rep.check("equations_homogeneous", all(pres.is_homogeneous(e) for e in pres.equations))
    if "equations" in ex:
        want = [parse(t, pres.variables) for t in ex["equations"]]
        rep.check("equations", want == [e.with_vars(pres.variables) for e in pres.equations],
                  [equation_text(e) for e in pres.equations])
    if "equation_degrees" in ex:
        got = [list(d) for d in pres.equation_degrees()]
        rep.check("equation_degrees", got == ex["equation_degrees"], got)
    with _Timer(rep, "linear_cone"):
        red = eliminate_linear_cone(pres)
    r["linear_cone"] = {
        "reduced": red.reduced,
        "eliminated": red.eliminated,
        "expression": str(red.expression) if red.expression is not None else None,
        "presentation": red.presentation.to_json(),
    }
    if "reduced_equations" in ex:
        rp = red.presentation
        want = [parse(t, rp.variables) for t in ex["reduced_equations"]]
        rep.check("reduced_equations", red.reduced and want == [e.with_vars(rp.variables) for e in rp.equations],
                  [equation_text(e) for e in rp.equations])
    cmp = data.get("compare_with")
    if cmp:
        tgt, t_real = datasets.load(cmp["ambient"], real)
        emb, e_real = datasets.load(cmp["embedding"], real)
        src, s_real = datasets.load(emb["source"], e_real)
        rep.add_input(cmp["ambient"], t_real)
        rep.add_input(cmp["embedding"], e_real)
        FF = datasets.fan_of(tgt)
        _, FX = datasets.polytope_and_fan(src)
        cox = tuple(tgt.get("cox_names", [f"u{j + 1}" for j in range(len(FF.rays))]))
        binom, _ = image_binomial(IntMatrix(emb["A"]), FX, FF, cox)
        fpres = GitPresentation(divisor_sequence(FF).weights, cox, [binom])
        renaming = match_presentations(red.presentation, fpres)
        r["renaming_to_ambient"] = renaming
        rep.check("reduced_matches_ambient_presentation", renaming is not None, renaming)
    return rep


# -- hensel -----------------------------------------------------------------------------------


def cmd_hensel(opts) -> RunReport:
    from .deformation import _check_state

    rep = RunReport("hensel")
    k = opts.k
    with _Timer(rep, "lift"):
        states = hensel_lift(k, check=False)
    rep.results["k"] = k
    rep.results["states"] = [s.to_json() for s in states]
    for i, st in enumerate(states):
        bad = _check_state(st, states[i - 1] if i else None)
        rep.check(f"invariants_k{st.k}", not bad, bad or None)
    if k >= 1:
        v = ("s1", "s2", "s3", "x", "y")
        st = states[1]
        rep.check("x1 = x + s2*y + s3*x^2*y", st.x == parse("x + s2*y + s3*x^2*y", v), str(st.x))
        rep.check("y1 = y + s1*x", st.y == parse("y + s1*x", v), str(st.y))
        rep.check("f1 = s1*s2*x*y + s1*s3*x^3*y", st.f == parse("s1*s2*x*y + s1*s3*x^3*y", v), str(st.f))
    rep.check("x0 = x, y0 = y", str(states[0].x) == "x" and str(states[0].y) == "y")
    last = states[-1]
    direct = last.x * last.y - lift_target()
    rep.check(f"f{k} by direct expansion", direct == last.f and (direct.is_zero() or direct.min_degree_in(("s1", "s2", "s3")) >= k + 1))
    return rep


# -- entry point --------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fano-forge", description="Exact toric-geometry verification runs.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--order", choices=("lex", "block"), default="block",
                        help="elimination order for Groebner runs (default block)")
    common.add_argument("--k", type=int, default=DEFAULT_K, help="truncation order for lifting (default 6)")
    common.add_argument("--hilbert-bound", type=int, default=DEFAULT_HILBERT_BOUND,
                        help="pairing bound for dual-cone generator enumeration")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings")
    common.add_argument("--output", "-o", help="write the report to this file as well")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="polytope, polar, K-polystability, singularities").add_argument("path")
    sub.add_parser("aut", parents=[common], help="automorphisms and action on smoothing parameters").add_argument("path")
    p = sub.add_parser("embed", parents=[common], help="toric morphism, Cox pullback, image binomial")
    p.add_argument("path", nargs="?", default="embed_a.json")
    p = sub.add_parser("deform", parents=[common], help="chart families, psi and discriminants")
    p.add_argument("path", nargs="?", default="family.json")
    p = sub.add_parser("discriminant", parents=[common], help="elimination of the relative Jacobian ideal")
    p.add_argument("path", nargs="?", default="lemma33.json")
    p.add_argument("--fiber", help="comma-separated fiber variables")
    p.add_argument("--base", help="comma-separated base variables")
    p = sub.add_parser("laurent", parents=[common], help="Laurent inversion from a scaffolding")
    p.add_argument("path", nargs="?", default="scaffolding.json")
    sub.add_parser("hensel", parents=[common], help="polynomial lifting with invariant checks")
    return ap


def run(args) -> RunReport:
    from . import fan as fan_mod

    saved = fan_mod.DEFAULT_HILBERT_BOUND
    fan_mod.DEFAULT_HILBERT_BOUND = args.hilbert_bound
    try:
        return _dispatch(args)
    finally:
        fan_mod.DEFAULT_HILBERT_BOUND = saved


def _dispatch(args) -> RunReport:
    handlers: dict[str, Callable] = {
        "analyze": cmd_analyze,
        "aut": cmd_aut,
        "embed": cmd_embed,
        "deform": cmd_deform,
        "discriminant": cmd_discriminant,
        "laurent": cmd_laurent,
    }
    if args.command == "hensel":
        return cmd_hensel(args)
    return handlers[args.command](args.path, args)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = run(args)
        status = 0 if rep.ok else 1
    except (FanoForgeError, ValueError, KeyError, FileNotFoundError) as exc:
        rep = RunReport(args.command, error=f"{type(exc).__name__}: {exc}")
        status = 2
    if args.format == "json":
        out = json.dumps(rep.to_json(args.timings), indent=2) + "\n"
    else:
        out = rep.to_text(args.timings)
    sys.stdout.write(out)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
