"""Divisor sequences, Cox pullbacks, image binomials, chart dehomogenisation
and Laurent inversion.

Weight matrices are canonicalised to row Hermite normal form unless the
caller supplies a basis of the same row lattice, which is then used as is.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .errors import NotLatticeError, ShapeError
from .exactla import IntMatrix, dot, hnf, kernel_basis, rank, same_row_lattice, snf, solve_rational
from .fan import Fan
from .polyring import MultiPoly
from .polytope import LatticePolytope


# -- divisor sequence ----------------------------------------------------------------


@dataclass(frozen=True)
class DivisorSequence:
    rays_T: IntMatrix  # n x d, row j is ray j: M -> Div
    weights: IntMatrix  # r x n: Div -> Cl (free part)
    torsion: tuple[int, ...]

    @property
    def free_rank(self) -> int:
        return self.weights.nrows

    def anticanonical(self) -> tuple[int, ...]:
        """Class of minus the canonical divisor, the sum of all boundary divisors."""
        return tuple(sum(row) for row in self.weights.rows)

    def is_exact(self) -> bool:
        n = self.rays_T.nrows
        if any(any(r) for r in (self.weights @ self.rays_T).rows):
            return False
        # kernel of D equals image of R^T: compare saturated lattices and check saturation
        ker = kernel_basis(self.weights)
        img = [r for r in hnf(self.rays_T.T)[0].rows if any(r)]
        return rank(self.weights) + rank(self.rays_T) == n and same_row_lattice(ker, img)

    def to_json(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "torsion": list(self.torsion),
            "free_rank": self.free_rank,
            "anticanonical": list(self.anticanonical()),
        }


def divisor_sequence(fan: Fan, basis: Sequence[Sequence[int]] | None = None) -> DivisorSequence:
    """0 -> M -> Z^rays -> Cl -> 0 with the weight matrix in HNF (or ``basis``)."""
    Rt = IntMatrix(fan.rays)
    n, d = Rt.shape
    S, U, V = snf(Rt)
    k = sum(1 for i in range(min(n, d)) if S[i, i])
    if k < d:
        raise ShapeError("rays do not span the lattice: no exact divisor sequence")
    torsion = tuple(S[i, i] for i in range(k) if S[i, i] > 1)
    free = [U[i] for i in range(k, n)]
    H, _ = hnf(IntMatrix(free, ncols=n)) if free else (IntMatrix([], ncols=n), None)
    D = IntMatrix([r for r in H.rows if any(r)], ncols=n)
    if basis is not None:
        B = IntMatrix(basis)
        if not same_row_lattice(B, D):
            raise ShapeError("supplied weight basis does not span the class group lattice")
        D = B
    return DivisorSequence(Rt, D, torsion)


# -- ray decomposition and Cox pullbacks ------------------------------------------------


@dataclass(frozen=True)
class CoxPullback:
    """B[j][i] is the coefficient of target ray r_j in A(rho_i)."""

    B: IntMatrix
    src_names: tuple[str, ...]
    tgt_names: tuple[str, ...]

    def monomials(self) -> dict[str, MultiPoly]:
        return cox_pullback_monomials(self)

    def to_json(self) -> dict:
        return {
            "B": self.B.tolist(),
            "monomials": {k: str(v) for k, v in self.monomials().items()},
        }


def ray_decomposition(
    A,
    src: Fan,
    tgt: Fan,
    src_names: Sequence[str] | None = None,
    tgt_names: Sequence[str] | None = None,
) -> CoxPullback:
    A = A if isinstance(A, IntMatrix) else IntMatrix(A)
    n_src, n_tgt = len(src.rays), len(tgt.rays)
    cols = []
    for i, rho in enumerate(src.rays):
        img = A @ rho
        cone = tgt.smallest_cone_containing([img])
        if cone is None:
            raise ShapeError(f"A(ray {i + 1}) lies in no cone of the target fan")
        gens = [tgt.rays[j] for j in cone]
        sol = solve_rational(IntMatrix.from_columns(gens), img)
        if sol is None:
            raise ShapeError(f"target cone {tgt.cone_name(cone)} is not simplicial")
        if any(x.denominator != 1 or x < 0 for x in sol):
            raise NotLatticeError(f"A(ray {i + 1}) is not a nonnegative integral combination")
        col = [0] * n_tgt
        for j, x in zip(cone, sol):
            col[j] = int(x)
        cols.append(col)
    B = IntMatrix.from_columns(cols)
    src_names = tuple(src_names or (f"x{i + 1}" for i in range(n_src)))
    tgt_names = tuple(tgt_names or (f"u{j + 1}" for j in range(n_tgt)))
    # commutativity: B^T R_tgt^T == R_src^T A^T
    lhs = B.T @ IntMatrix(tgt.rays)
    rhs = IntMatrix(src.rays) @ A.T
    if lhs != rhs:
        raise ShapeError("ray decomposition does not commute with A")
    return CoxPullback(B, src_names, tgt_names)


def cox_pullback_monomials(pb: CoxPullback) -> dict[str, MultiPoly]:
    return {
        name: MultiPoly({tuple(pb.B[j]): 1}, pb.src_names)
        for j, name in enumerate(pb.tgt_names)
    }


def _normalized_binomial(e: Sequence[int], names: Sequence[str]) -> MultiPoly:
    pos = tuple(max(x, 0) for x in e)
    neg = tuple(max(-x, 0) for x in e)
    # lower-degree monomial first; on a tie the lex-larger one
    if (sum(pos), tuple(-x for x in pos)) > (sum(neg), tuple(-x for x in neg)):
        pos, neg = neg, pos
    return MultiPoly({pos: 1, neg: -1}, names)


def image_binomial(A, src: Fan, tgt: Fan, tgt_names: Sequence[str] | None = None) -> tuple[MultiPoly, tuple[int, ...]]:
    """Equation of the image of the torus of ``src`` in Cox coordinates of ``tgt``.

    Returns the binomial and the primitive annihilator ``m`` of the image of A.
    The monomial of lower degree carries the plus sign.
    """
    A = A if isinstance(A, IntMatrix) else IntMatrix(A)
    ker = kernel_basis(A.T)
    if len(ker) != 1:
        raise ShapeError(f"image of A has corank {len(ker)} in the target lattice, expected 1")
    m = ker[0]
    e = tuple(dot(m, r) for r in tgt.rays)
    if not any(e):
        raise ShapeError("annihilator pairs to zero with every target ray")
    names = tuple(tgt_names or (f"u{j + 1}" for j in range(len(tgt.rays))))
    return _normalized_binomial(e, names), m


# -- GIT presentations ------------------------------------------------------------------


@dataclass
class GitPresentation:
    weights: IntMatrix
    variables: tuple[str, ...]
    equations: list = field(default_factory=list)
    stability: tuple[int, ...] | None = None
    notes: list = field(default_factory=list)

    def degree(self, exps: Sequence[int]) -> tuple[int, ...]:
        return tuple(dot(row, exps) for row in self.weights.rows)

    def equation_degree(self, eq: MultiPoly) -> tuple[int, ...]:
        eq = eq.with_vars(self.variables)
        degs = {self.degree(e) for e in eq.terms}
        if len(degs) != 1:
            raise ShapeError(f"equation {eq} is not homogeneous for the weight matrix")
        return degs.pop()

    def is_homogeneous(self, eq: MultiPoly) -> bool:
        try:
            self.equation_degree(eq)
            return True
        except ShapeError:
            return False

    def equation_degrees(self) -> list[tuple[int, ...]]:
        return [self.equation_degree(eq) for eq in self.equations]

    def anticanonical(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.weights.rows)

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "weights": self.weights.tolist(),
            "equations": [equation_text(eq) for eq in self.equations],
            "equation_degrees": [list(d) for d in self.equation_degrees()],
            "stability": list(self.stability) if self.stability is not None else None,
        }


def equation_text(eq: MultiPoly) -> str:
    """Render a binomial-style equation as ``positive terms = negative terms``."""
    pos = MultiPoly({e: c for e, c in eq.terms.items() if c > 0}, eq.vars)
    neg = MultiPoly({e: -c for e, c in eq.terms.items() if c < 0}, eq.vars)
    return f"{pos} = {neg}"


def dehomogenize(eq: MultiPoly, cone: Sequence[int], variables: Sequence[str], rename: Mapping[str, str] | None = None) -> MultiPoly:
    """Set Cox variables of rays outside ``cone`` to 1, then rename the rest."""
    keep = {variables[j] for j in cone}
    sub = {v: 1 for v in variables if v not in keep}
    out = eq.substitute(sub).trim()
    if rename:
        out = out.rename(dict(rename))
    return out


# -- Laurent inversion --------------------------------------------------------------------


@dataclass
class Scaffolding:
    shape_rays: tuple[tuple[int, ...], ...]
    shape_max_cones: tuple[tuple[int, ...], ...]
    struts: tuple[tuple[int, ...], ...]  # r x z coefficients of E_j in D_i
    relations: tuple[tuple[int, ...], ...]
    stability: tuple[int, ...] | None = None

    @property
    def shape_fan(self) -> Fan:
        return Fan(self.shape_rays, self.shape_max_cones)

    @classmethod
    def from_json(cls, data: Mapping) -> "Scaffolding":
        base = int(data.get("index_base", 0))
        return cls(
            tuple(tuple(v) for v in data["shape_rays"]),
            tuple(tuple(i - base for i in c) for c in data.get("shape_max_cones", [])),
            tuple(tuple(s["coeffs"]) if isinstance(s, Mapping) else tuple(s) for s in data["struts"]),
            tuple(tuple(r) for r in data.get("relations", [])),
            tuple(data["stability"]) if data.get("stability") is not None else None,
        )


def _strut_vertices(fan: Fan, coeffs: Sequence[int]):
    """Vertices m_sigma of the section polytope {u : <u, v_j> >= -a_j}; None if not nef."""
    verts = []
    for c in fan.max_cones:
        gens = [fan.rays[j] for j in c]
        sol = solve_rational(IntMatrix(gens), [-coeffs[j] for j in c])
        if sol is None:
            raise ShapeError("shape fan must be simplicial with full-dimensional maximal cones")
        if any(dot(sol, v) < -a for v, a in zip(fan.rays, coeffs)):
            return None
        verts.append(sol)
    return verts


def section_polytope_vertices(fan: Fan, coeffs: Sequence[int]) -> list[tuple[int, ...]]:
    verts = _strut_vertices(fan, coeffs)
    if verts is None:
        raise ShapeError(f"divisor {list(coeffs)} is not nef on the shape fan")
    if any(x.denominator != 1 for v in verts for x in v):
        raise NotLatticeError("section polytope is not a lattice polytope")
    return sorted({tuple(int(x) for x in v) for v in verts})


def laurent_inversion(s: Scaffolding) -> GitPresentation:
    """Weight matrix [I_r | strut coefficients], relation equations, stability."""
    r = len(s.struts)
    z = len(s.shape_rays)
    if any(len(c) != z for c in s.struts):
        raise ShapeError("each strut needs one coefficient per shape ray")
    slack = [f"y{i + 1}" for i in range(r)]
    evars = [f"y{r + j + 1}" for j in range(z)]
    variables = tuple(slack + evars)
    W = IntMatrix([[int(i == k) for k in range(r)] + list(s.struts[i]) for i in range(r)])
    notes = []
    if z:
        fan = s.shape_fan
        dim = fan.dim
        for c in fan.max_cones:
            if len(c) != dim or abs(IntMatrix([fan.rays[j] for j in c]).det()) != 1:
                raise ShapeError("only smooth shape fans are supported")
        for i, coeffs in enumerate(s.struts):
            if _strut_vertices(fan, coeffs) is None:
                raise ShapeError(f"strut D{i + 1} is not nef on the shape fan")
        for a in s.relations:
            if len(a) != z or any(sum(a[j] * fan.rays[j][k] for j in range(z)) for k in range(dim)):
                raise ShapeError(f"{list(a)} is not a relation among the shape rays")
        if len(s.relations) != z - dim or rank(s.relations) != len(s.relations):
            raise ShapeError(
                "shape not supported: need z - dim independent relations "
                "(projective-bundle or product shapes)"
            )
    equations = []
    for a in s.relations:
        k = [sum(c * x for c, x in zip(s.struts[i], a)) for i in range(r)]
        lhs = [max(x, 0) for x in a]
        rhs = [max(-x, 0) for x in a]
        lhs_slack = [max(-x, 0) for x in k]
        rhs_slack = [max(x, 0) for x in k]
        e_l = tuple(lhs_slack + lhs)
        e_r = tuple(rhs_slack + rhs)
        equations.append(MultiPoly({e_l: 1, e_r: -1}, variables))
    pres = GitPresentation(W, variables, equations, None, notes)
    degs = pres.equation_degrees()
    anti = pres.anticanonical()
    stab = tuple(a - sum(d[i] for d in degs) for i, a in enumerate(anti))
    if not all(x > 0 for x in stab):
        notes.append(f"-K - sum(L) = {list(stab)} is outside the positive orthant")
    if s.stability is not None and tuple(s.stability) != stab:
        notes.append(f"supplied stability {list(s.stability)} differs from computed {list(stab)}; keeping computed")
    pres.stability = stab
    return pres


def scaffolding_hull(s: Scaffolding) -> LatticePolytope:
    """Convex hull of all strut section polytopes."""
    pts = []
    for coeffs in s.struts:
        pts.extend(section_polytope_vertices(s.shape_fan, coeffs))
    return LatticePolytope.from_vertices(pts)


@dataclass
class LinearConeReduction:
    reduced: bool
    presentation: GitPresentation
    eliminated: str | None = None
    expression: MultiPoly | None = None


def eliminate_linear_cone(pres: GitPresentation) -> LinearConeReduction:
    """Solve an equation for a variable occurring linearly and alone, and substitute."""
    for qi, eq in enumerate(pres.equations):
        eq = eq.with_vars(pres.variables)
        for vi, v in enumerate(pres.variables):
            e_v = tuple(int(k == vi) for k in range(len(pres.variables)))
            if e_v not in eq.terms:
                continue
            if any(e[vi] for e in eq.terms if e != e_v):
                continue
            c = eq.terms[e_v]
            rest = MultiPoly({e: x for e, x in eq.terms.items() if e != e_v}, eq.vars)
            expr = rest * (Fraction(-1) / c)
            col = tuple(pres.weights[i, vi] for i in range(pres.weights.nrows))
            if not expr.is_zero() and pres.equation_degree(rest) != col:
                raise ShapeError("grading inconsistency in linear-cone elimination")
            keep = tuple(x for x in pres.variables if x != v)
            others = [
                o.with_vars(pres.variables).substitute({v: expr}).with_vars(keep)
                for k, o in enumerate(pres.equations) if k != qi
            ]
            W = IntMatrix([[row[k] for k in range(len(row)) if k != vi] for row in pres.weights.rows])
            new = GitPresentation(W, keep, others, pres.stability, list(pres.notes))
            for o in others:
                new.equation_degree(o)
            return LinearConeReduction(True, new, v, expr.with_vars(keep))
    return LinearConeReduction(False, pres)


def match_presentations(a: GitPresentation, b: GitPresentation) -> dict[str, str] | None:
    """A renaming of a's variables onto b's under which equations agree up to
    scalars and weight matrices have the same row lattice; None if none exists."""
    if len(a.variables) != len(b.variables) or len(a.equations) != len(b.equations):
        return None
    Hb = [r for r in hnf(b.weights)[0].rows if any(r)]
    b_eqs = [eq.with_vars(b.variables) for eq in b.equations]
    for perm in itertools.permutations(range(len(b.variables))):
        # variable a_i -> b_perm[i]
        cols = [None] * len(b.variables)
        for i, j in enumerate(perm):
            cols[j] = [a.weights[k, i] for k in range(a.weights.nrows)]
        Wp = IntMatrix.from_columns(cols)
        renamed = []
        for eq in a.equations:
            terms = {}
            for e, c in eq.with_vars(a.variables).terms.items():
                ne = [0] * len(e)
                for i, j in enumerate(perm):
                    ne[j] = e[i]
                terms[tuple(ne)] = c
            renamed.append(MultiPoly(terms, b.variables))
        if not all(_proportional(p, q) for p, q in zip(renamed, b_eqs)):
            continue
        if [r for r in hnf(Wp)[0].rows if any(r)] != Hb:
            continue
        return {a.variables[i]: b.variables[j] for i, j in enumerate(perm)}
    return None


def _proportional(p: MultiPoly, q: MultiPoly) -> bool:
    if set(p.terms) != set(q.terms) or not p.terms:
        return False
    e0 = next(iter(p.terms))
    ratio = q.terms[e0] / p.terms[e0]
    return all(q.terms[e] == ratio * c for e, c in p.terms.items())


def load_json(path: str | Path) -> dict:
    with open(path) as fh:
        return json.load(fh)
