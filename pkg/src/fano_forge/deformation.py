"""Polynomial lifting, chart families, constant-parameter identification and
chart discriminants for smoothings of ordinary double points.

The lifting runs in ``Q[s1, s2, s3, x, y]`` graded by s-degree.  It builds
``x_k, y_k`` with ``x_k * y_k == x*y + s1*x^2 + s2*y^2 + s3*x^2*y^2``
modulo ``(s1, s2, s3)^(k+1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import InvariantError, ShapeError
from .fan import ChartLabeling, Cone, Fan, closed_embedding_chart_check
from .polyring import MultiPoly, discriminant, parse

LIFT_VARS = ("s1", "s2", "s3", "x", "y")
S_VARS = ("s1", "s2", "s3")
DEFAULT_K = 6


def lift_target() -> MultiPoly:
    return parse("x*y + s1*x^2 + s2*y^2 + s3*x^2*y^2", LIFT_VARS)


@dataclass(frozen=True)
class LiftState:
    k: int
    x: MultiPoly
    y: MultiPoly
    f: MultiPoly

    def to_json(self) -> dict:
        return {"k": self.k, "x": str(self.x), "y": str(self.y), "f": str(self.f)}


def _in_xy_ideal(p: MultiPoly, power: int) -> bool:
    """Every term has (x, y)-degree at least ``power``."""
    return p.is_zero() or p.min_degree_in(("x", "y")) >= power


def _check_state(st: LiftState, prev: LiftState | None) -> list[str]:
    bad = []
    k = st.k
    if k >= 1:
        if st.x.degree_in(S_VARS) > k or st.y.degree_in(S_VARS) > k:
            bad.append("x_k, y_k must have s-degree at most k")
        if not (_in_xy_ideal(st.x, 1) and _in_xy_ideal(st.y, 1)):
            bad.append("x_k, y_k must lie in (x, y)")
    if prev is not None:
        for d in (st.x - prev.x, st.y - prev.y):
            if not d.is_zero() and (d.min_degree_in(S_VARS) != k or d.degree_in(S_VARS) != k):
                bad.append("x_k - x_(k-1) and y_k - y_(k-1) must be s-homogeneous of degree k")
    if st.f != st.x * st.y - lift_target():
        bad.append("f_k must equal x_k*y_k minus the target")
    if k >= 1 and not st.f.is_zero():
        if st.f.min_degree_in(S_VARS) < k + 1:
            bad.append("f_k must lie in (s1,s2,s3)^(k+1)")
        if not _in_xy_ideal(st.f, 2):
            bad.append("f_k must lie in (x,y)^2")
    return bad


def _split(f: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """f = A*x + B*y with B free of x; terms with positive x-degree go to A."""
    ix, iy = f.vars.index("x"), f.vars.index("y")
    A, B = {}, {}
    for e, c in f.terms.items():
        if e[ix] > 0:
            A[e[:ix] + (e[ix] - 1,) + e[ix + 1 :]] = c
        elif e[iy] > 0:
            B[e[:iy] + (e[iy] - 1,) + e[iy + 1 :]] = c
        else:
            raise InvariantError("f_k has a term outside (x, y)")
    return MultiPoly(A, f.vars), MultiPoly(B, f.vars)


def hensel_lift(k_max: int = DEFAULT_K, check: bool = True) -> list[LiftState]:
    """States k = 0..k_max; k = 1 is the explicit base case, later steps the inductive one."""
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    x0 = MultiPoly.var("x", LIFT_VARS)
    y0 = MultiPoly.var("y", LIFT_VARS)
    target = lift_target()
    states = [LiftState(0, x0, y0, x0 * y0 - target)]
    if k_max >= 1:
        x1 = parse("x + s2*y + s3*x^2*y", LIFT_VARS)
        y1 = parse("y + s1*x", LIFT_VARS)
        states.append(LiftState(1, x1, y1, x1 * y1 - target))
    for k in range(1, k_max):
        st = states[-1]
        A, B = _split(st.f)
        a = A.homogeneous_part(S_VARS, k + 1)
        b = B.homogeneous_part(S_VARS, k + 1)
        xn, yn = st.x - b, st.y - a
        states.append(LiftState(k + 1, xn, yn, xn * yn - target))
    if check:
        for i, st in enumerate(states):
            bad = _check_state(st, states[i - 1] if i else None)
            if bad:
                raise InvariantError(f"lift step {st.k}: " + "; ".join(bad))
    return states


def truncate(p: MultiPoly, names: Sequence[str], k: int) -> MultiPoly:
    """Drop terms of degree > k in the variables ``names``."""
    idx = [p.vars.index(v) for v in names if v in p.vars]
    return MultiPoly({e: c for e, c in p.terms.items() if sum(e[i] for i in idx) <= k}, p.vars)


# -- chart families ---------------------------------------------------------------------


FIBER = ("x", "y", "z", "w")


@dataclass
class ChartFamily:
    chart: str
    equation: MultiPoly
    params: tuple[str, ...]
    target_cone: str = ""
    assignment: dict = field(default_factory=dict)  # Cox variable -> chart label

    def to_json(self) -> dict:
        return {
            "chart": self.chart,
            "target_cone": self.target_cone,
            "assignment": dict(self.assignment),
            "equation": str(self.equation),
        }


def chart_family(
    global_eq: MultiPoly,
    chart: ChartLabeling,
    A,
    src: Fan,
    tgt: Fan,
    cox_names: Sequence[str],
    params: Sequence[str],
) -> ChartFamily:
    """Restrict the global family to the chart of ``chart`` and rename to x, y, z, w."""
    from .embedding import dehomogenize
    from .exactla import IntMatrix

    A = A if isinstance(A, IntMatrix) else IntMatrix(A)
    src_idx = src.cone_index(chart.rays)
    tgt_idx = tgt.smallest_cone_containing([A @ src.rays[i] for i in src_idx])
    if tgt_idx is None:
        raise ShapeError(f"chart {chart.name} maps into no cone of the target fan")
    labels = [cox_names[j] for j in tgt_idx]
    check = closed_embedding_chart_check(A, chart.cone, tgt.cone(tgt_idx), [str(j + 1) for j in tgt_idx])
    if not check.ok:
        raise ShapeError(f"chart {chart.name} is not a closed embedding into its target chart")
    by_vec = {v: k for k, v in chart.generators().items()}
    rename = {}
    for gname, vec in check.assignment.items():
        j = int(gname[1:]) - 1
        rename[cox_names[j]] = by_vec[tuple(vec)]
    if set(rename) != set(labels):
        raise ShapeError(f"chart {chart.name}: Cox coordinates {labels} are not all chart generators")
    eq = dehomogenize(global_eq, tgt_idx, cox_names, rename)
    eq = eq.with_vars(FIBER + tuple(params))
    return ChartFamily(chart.name, eq, tuple(params), tgt.cone_name(tgt_idx), rename)


@dataclass
class ChartNormalForm:
    chart: str
    constant: str | None  # the parameter q4, or None if missing
    epsilon: int  # +1 for x*y - z*w, -1 for z*w - x*y
    pair: tuple[str, str]  # variables (u, v) carrying the corrections
    pair_sign: int  # sign of u*v in the equation
    corrections: dict  # "u^2" / "v^2" / "u^2v^2" -> parameter

    def to_json(self) -> dict:
        return {
            "constant_param": self.constant,
            "epsilon": self.epsilon,
            "pair": list(self.pair),
            "correction_terms": dict(self.corrections),
        }


def normalize_chart(cf: ChartFamily) -> ChartNormalForm:
    """Recognise eps*(x*y - z*w) + q1*u^2 + q2*v^2 + q3*u^2*v^2 + q4 and read off q4."""
    eq = cf.equation.with_vars(FIBER + tuple(cf.params))
    nf = len(FIBER)
    fiber_terms, param_terms = [], []
    for e, c in eq.terms.items():
        (fiber_terms if not any(e[nf:]) else param_terms).append((e, c))
    expected = {(1, 1, 0, 0), (0, 0, 1, 1)}
    got = {e[:nf]: c for e, c in fiber_terms}
    if set(got) != expected or got[(1, 1, 0, 0)] != -got[(0, 0, 1, 1)] or abs(got[(1, 1, 0, 0)]) != 1:
        raise ShapeError(f"chart {cf.chart}: parameter-free part is not +-(x*y - z*w): {fiber_terms}")
    eps = int(got[(1, 1, 0, 0)])
    corr: dict[str, tuple] = {}
    constant = None
    seen_params = set()
    for e, c in param_terms:
        pe = e[nf:]
        if c != 1 or sum(pe) != 1:
            raise ShapeError(f"chart {cf.chart}: term {MultiPoly({e: c}, eq.vars)} is not a bare parameter times a monomial")
        p = cf.params[pe.index(1)]
        if p in seen_params:
            raise ShapeError(f"chart {cf.chart}: parameter {p} appears twice")
        seen_params.add(p)
        fe = e[:nf]
        if not any(fe):
            constant = p
        else:
            corr[p] = fe
    pair = None
    for cand in (("x", "y"), ("z", "w")):
        i, j = FIBER.index(cand[0]), FIBER.index(cand[1])
        allowed = {
            tuple(2 if k == i else 0 for k in range(nf)): "u^2",
            tuple(2 if k == j else 0 for k in range(nf)): "v^2",
            tuple(2 if k in (i, j) else 0 for k in range(nf)): "u^2v^2",
        }
        if all(fe in allowed for fe in corr.values()):
            names = [allowed[fe] for fe in corr.values()]
            if len(set(names)) == len(names):
                pair = (cand, {allowed[fe]: p for p, fe in corr.items()})
                break
    if pair is None:
        raise ShapeError(f"chart {cf.chart}: correction terms do not fit a single variable pair: {corr}")
    (u, v), named = pair
    pair_sign = eps if (u, v) == ("x", "y") else -eps
    return ChartNormalForm(cf.chart, constant, eps, (u, v), pair_sign, named)


def lemma_normal_form(nf: ChartNormalForm) -> MultiPoly:
    """The ODP family with only the constant parameter: eps*(x*y - z*w) + q4."""
    variables = FIBER + ((nf.constant,) if nf.constant else ())
    base = parse("x*y - z*w", variables) * nf.epsilon
    if nf.constant:
        base = base + MultiPoly.var(nf.constant, variables)
    return base


def check_against_lift(cf: ChartFamily, nf: ChartNormalForm, k: int = DEFAULT_K) -> bool:
    """Substituting the lifted u_k, v_k into the normal form reproduces the
    chart family modulo (parameters)^(k+1)."""
    states = hensel_lift(k)
    st = states[k]
    u, v = nf.pair
    sgn = nf.pair_sign
    s_sub = {}
    for key, s in (("u^2", "s1"), ("v^2", "s2"), ("u^2v^2", "s3")):
        q = nf.corrections.get(key)
        s_sub[s] = MultiPoly.var(q, (q,)) * sgn if q else 0
    uk = _lift_in(st.x, s_sub, u, v)
    vk = _lift_in(st.y, s_sub, u, v)
    base = lemma_normal_form(nf)
    lifted = base.substitute({u: uk, v: vk})
    diff = (lifted - cf.equation).trim()
    return truncate(diff, cf.params, k).is_zero()


def _lift_in(p: MultiPoly, s_sub: Mapping, u: str, v: str) -> MultiPoly:
    tmp = p.rename({"x": "_u", "y": "_v"}).substitute(s_sub)
    tmp = tmp.with_vars(tuple(x for x in tmp.vars) + tuple(n for n in ("_u", "_v") if n not in tmp.vars))
    return tmp.rename({"_u": u, "_v": v})


# -- versality -----------------------------------------------------------------------------


@dataclass
class ChartDiscriminant:
    generator: MultiPoly | None
    constant: str | None
    cofactor: MultiPoly | None
    unit_at_origin: bool

    def to_json(self) -> dict:
        return {
            "generator": str(self.generator) if self.generator is not None else None,
            "cofactor": str(self.cofactor) if self.cofactor is not None else None,
            "unit_at_origin": self.unit_at_origin,
        }


def chart_discriminant(cf: ChartFamily, constant: str | None, order: str = "block") -> ChartDiscriminant:
    ideal = discriminant(cf.equation, FIBER, cf.params, order=order)
    if len(ideal.gens) != 1:
        return ChartDiscriminant(None, constant, None, False)
    g = ideal.gens[0]
    if constant is None:
        return ChartDiscriminant(g, None, None, False)
    q = MultiPoly.var(constant, g.vars)
    # exact division by the constant parameter
    ci = g.vars.index(constant)
    if any(e[ci] == 0 for e in g.terms):
        return ChartDiscriminant(g, constant, None, False)
    cof = MultiPoly({e[:ci] + (e[ci] - 1,) + e[ci + 1 :]: c for e, c in g.terms.items()}, g.vars)
    assert cof * q == g
    c0 = cof.constant_term()
    unit = c0 != 0
    if unit and c0 != 1:
        cof = cof / c0
        g = g / c0
    return ChartDiscriminant(g, constant, cof, unit and cof.constant_term() == 1)


@dataclass
class VersalityReport:
    charts: dict  # chart name -> ChartNormalForm
    families: dict  # chart name -> ChartFamily
    psi: dict  # "t_<chart>" -> parameter or None
    bijective: bool
    discriminants: dict = field(default_factory=dict)
    union: str | None = None
    lift_checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {}
        for name, nf in self.charts.items():
            entry = nf.to_json()
            entry["equation"] = str(self.families[name].equation)
            if name in self.discriminants:
                d = self.discriminants[name]
                entry["discriminant_generator"] = str(d.generator) if d.generator is not None else None
                entry["discriminant_cofactor_unit"] = d.unit_at_origin
            if name in self.lift_checks:
                entry["matches_lift"] = self.lift_checks[name]
            out[name] = entry
        return {"charts": out, "psi": dict(self.psi), "bijective": self.bijective, "discriminant_union": self.union}


def versality_report(
    families: Sequence[ChartFamily],
    params: Sequence[str],
    with_discriminants: bool = True,
    order: str = "block",
    lift_k: int | None = DEFAULT_K,
) -> VersalityReport:
    charts, fams, psi, discs, lifts = {}, {}, {}, {}, {}
    for cf in families:
        nf = normalize_chart(cf)
        charts[cf.chart] = nf
        fams[cf.chart] = cf
        psi[f"t_{cf.chart}"] = nf.constant
        if lift_k is not None and nf.constant is not None:
            lifts[cf.chart] = check_against_lift(cf, nf, lift_k)
        if with_discriminants:
            discs[cf.chart] = chart_discriminant(cf, nf.constant, order)
    values = list(psi.values())
    bijective = None not in values and len(set(values)) == len(values) and set(values) == set(params)
    union = None
    if with_discriminants and all(d.unit_at_origin for d in discs.values()):
        factors = sorted(d.constant for d in discs.values())
        union = "*".join(factors) + " = 0"
    return VersalityReport(charts, fams, psi, bijective, discs, union, lifts)
