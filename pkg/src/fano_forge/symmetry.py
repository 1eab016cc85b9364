"""Lattice automorphisms of polytopes and their action on smoothing parameters.

Conventions
-----------
A matrix ``g`` acts on ``N`` on column vectors and on ``M`` by pullback,
``m -> g^T m``.  For ODP charts ``sigma_0, ..., sigma_{n-1}`` with
``g(sigma_i) = sigma_j`` the induced :class:`SignedPermutation` has
``perm[i] = j`` and acts on polynomials by ``t_i -> sign[i] * t_perm[i]``.
With composition ``(a * b)[i] = a[b[i]]`` this gives
``action(g @ h) == action(g) * action(h)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ResourceError, ShapeError
from .exactla import IntMatrix, dot, inverse_rational, kernel_basis, rank
from .fan import ChartLabeling, Cone, classify_cone
from .polyring import MultiPoly
from .polytope import MAX_VERTICES, LatticePolytope


# -- automorphism groups -------------------------------------------------------------


@dataclass(frozen=True)
class LatticeAutGroup:
    elements: tuple[IntMatrix, ...]
    generators: tuple[IntMatrix, ...] = ()

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        g = g if isinstance(g, IntMatrix) else IntMatrix(g)
        return g in set(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def identity(self) -> IntMatrix:
        return IntMatrix.identity(self.elements[0].nrows)

    def is_closed(self) -> bool:
        """Closure under products and inverses, checked exhaustively."""
        elems = set(self.elements)
        if self.identity() not in elems:
            return False
        for a in self.elements:
            if not any(a @ b == self.identity() for b in self.elements):
                return False
            for b in self.elements:
                if a @ b not in elems:
                    return False
        return True

    def generated_subgroup(self, gens: Iterable[IntMatrix]) -> set[IntMatrix]:
        gens = [g if isinstance(g, IntMatrix) else IntMatrix(g) for g in gens]
        seen = {self.identity()}
        frontier = [self.identity()]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = g @ a
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return seen


def element_order(g: IntMatrix, limit: int = 1000) -> int:
    g = g if isinstance(g, IntMatrix) else IntMatrix(g)
    e = IntMatrix.identity(g.nrows)
    p = g
    for k in range(1, limit + 1):
        if p == e:
            return k
        p = p @ g
    raise ResourceError(f"element order exceeds {limit}")


def polytope_automorphisms(P: LatticePolytope, max_vertices: int = MAX_VERTICES) -> LatticeAutGroup:
    """All g in GL(d, Z) permuting the vertices of P."""
    verts = list(P.vertices)
    if len(verts) > max_vertices:
        raise ResourceError(f"{len(verts)} vertices exceed the automorphism search cap {max_vertices}")
    d = P.dim
    basis: list[int] = []
    for i, v in enumerate(verts):
        if rank([verts[j] for j in basis] + [v]) > len(basis):
            basis.append(i)
        if len(basis) == d:
            break
    Binv = inverse_rational(IntMatrix.from_columns([verts[i] for i in basis]))
    vset = set(verts)
    found = set()
    for imgs in itertools.permutations(range(len(verts)), d):
        C = IntMatrix.from_columns([verts[i] for i in imgs])
        # g = C B^{-1}
        rows = []
        ok = True
        for r in range(d):
            row = []
            for c in range(d):
                x = sum(C[r, k] * Binv[k][c] for k in range(d))
                if x.denominator != 1:
                    ok = False
                    break
                row.append(int(x))
            if not ok:
                break
            rows.append(row)
        if not ok:
            continue
        g = IntMatrix(rows)
        if abs(g.det()) != 1:
            continue
        if all(tuple(g @ v) in vset for v in verts):
            found.add(g)
    elems = tuple(sorted(found, key=lambda m: m.rows))
    return LatticeAutGroup(elems)


# -- torus weights ----------------------------------------------------------------------


def gorenstein_degree(cone: Cone) -> tuple[int, ...]:
    m = cone.gorenstein_point()
    if m is None:
        raise ShapeError("cone is not Gorenstein: no integral m with <m, rho> = 1 on all rays")
    return m


def t1_weight(cone: Cone) -> tuple[int, ...]:
    """Torus degree of the smoothing parameter of a Gorenstein cone: minus its Gorenstein point."""
    return tuple(-x for x in gorenstein_degree(cone))


# -- signed permutations -------------------------------------------------------------


@dataclass(frozen=True)
class SignedPermutation:
    perm: tuple[int, ...]
    sign: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(n)), (1,) * n)

    def __mul__(self, other: "SignedPermutation") -> "SignedPermutation":
        """Composition ``self * other``: apply ``other`` first."""
        n = len(self.perm)
        return SignedPermutation(
            tuple(self.perm[other.perm[i]] for i in range(n)),
            tuple(self.sign[other.perm[i]] * other.sign[i] for i in range(n)),
        )

    def apply(self, p: MultiPoly, names: Sequence[str]) -> MultiPoly:
        """Substitute ``t_i -> sign[i] * t_perm[i]`` simultaneously."""
        names = list(names)
        p = p.with_vars(tuple(names) + tuple(v for v in p.vars if v not in names))
        sub = {
            names[i]: MultiPoly.var(names[self.perm[i]], p.vars) * self.sign[i]
            for i in range(len(names))
        }
        return p.substitute(sub).with_vars(p.vars)

    def describe(self, names: Sequence[str]) -> list[str]:
        return [
            f"{names[i]} -> {'-' if self.sign[i] < 0 else ''}{names[self.perm[i]]}"
            for i in range(len(self.perm))
        ]

    def to_json(self, names: Sequence[str] | None = None) -> dict:
        out = {"perm": list(self.perm), "sign": list(self.sign)}
        if names is not None:
            out["text"] = self.describe(names)
        return out


def deformation_action(g, charts: Sequence[ChartLabeling]) -> SignedPermutation:
    g = g if isinstance(g, IntMatrix) else IntMatrix(g)
    gt = g.T
    perm = []
    sign = []
    by_rays = {frozenset(c.rays): j for j, c in enumerate(charts)}
    for i, ch in enumerate(charts):
        img = frozenset(tuple(g @ r) for r in ch.rays)
        j = by_rays.get(img)
        if j is None:
            raise ShapeError(f"g maps chart {ch.name} to a cone outside the chart list")
        if classify_cone(Cone(sorted(img))).kind != "ODP":
            raise ShapeError(f"image of chart {ch.name} is not an ODP cone")
        tgt = charts[j]
        pulled = {tuple(gt @ tgt.x), tuple(gt @ tgt.y)}
        if pulled == {ch.x, ch.y}:
            s = 1
        elif pulled == {ch.z, ch.w}:
            s = -1
        else:
            raise ShapeError(f"labels of chart {tgt.name} do not pull back to a labeled pair of {ch.name}")
        perm.append(j)
        sign.append(s)
    return SignedPermutation(tuple(perm), tuple(sign))


# -- invariants ------------------------------------------------------------------------


def _kernel_extreme_rays(W_cols: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Extreme rays of {e >= 0 : sum e_i w_i = 0}: the nonnegative circuits."""
    n = len(W_cols)
    d = len(W_cols[0]) if n else 0
    rays = set()
    for k in range(1, n + 1):
        for sub in itertools.combinations(range(n), k):
            cols = [W_cols[i] for i in sub]
            rows = [[c[r] for c in cols] for r in range(d)] or [[0] * k]
            ker = kernel_basis(rows)
            if len(ker) != 1:
                continue
            v = ker[0]
            if any(x == 0 for x in v):
                continue
            if all(x < 0 for x in v):
                v = tuple(-x for x in v)
            if not all(x > 0 for x in v):
                continue
            full = [0] * n
            for i, x in zip(sub, v):
                full[i] = x
            rays.add(tuple(full))
    return sorted(rays)


def torus_invariant_monomials(weights: Sequence[Sequence[int]], max_points: int = 10**6) -> list[tuple[int, ...]]:
    """Exponent vectors of the minimal weight-zero monomials in the parameters."""
    weights = [tuple(w) for w in weights]
    n = len(weights)
    if n == 0:
        return []
    rays = _kernel_extreme_rays(weights)
    if not rays:
        return []
    bound = [sum(r[i] for r in rays) for i in range(n)]
    size = 1
    for b in bound:
        size *= b + 1
    if size > max_points:
        raise ResourceError(f"invariant monomial search box has {size} points (cap {max_points})")
    d = len(weights[0])
    cands = []
    for e in itertools.product(*(range(b + 1) for b in bound)):
        if not any(e):
            continue
        if all(sum(e[i] * weights[i][r] for i in range(n)) == 0 for r in range(d)):
            cands.append(e)
    cset = set(cands)
    out = []
    for e in cands:
        if not any(f != e and tuple(a - b for a, b in zip(e, f)) in cset for f in cands):
            out.append(e)
    return sorted(out, reverse=True)


def monomial(exps: Sequence[int], names: Sequence[str]) -> MultiPoly:
    return MultiPoly({tuple(exps): 1}, names)


def check_group_invariance(p: MultiPoly, actions: Sequence[SignedPermutation], names: Sequence[str]) -> bool:
    extra = [v for v in p.used_vars() if v not in names]
    if extra:
        raise ShapeError(f"polynomial uses non-parameter variables {extra}")
    return all(a.apply(p, names) == p for a in actions)
