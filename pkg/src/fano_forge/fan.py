"""Rational polyhedral cones and fans.

Cones live in ``N = Z^d`` and are given by primitive ray generators.  Dual
vectors (elements of ``M``) pair with rays by the dot product.  Fan JSON
uses 0-based ray indices; human-facing names such as ``C1257`` use 1-based
indices in ray order.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import NotInteriorError, ResourceError, ShapeError
from .exactla import IntMatrix, det, dot, kernel_basis, primitive, rank, smith_invariants, snf, solve_rational
from .polytope import LatticePolytope

DEFAULT_HILBERT_BOUND = 3


def _neg(v):
    return tuple(-x for x in v)


class Cone:
    """A strongly convex rational polyhedral cone.

    ``normals`` are primitive inward facet normals taken inside the linear
    span of the cone; ``perp`` is a basis of the orthogonal complement of
    that span.  ``x`` lies in the cone iff it is orthogonal to ``perp`` and
    pairs nonnegatively with every normal.
    """

    def __init__(self, rays: Iterable[Sequence[int]], validate: bool = True):
        rays = [tuple(int(x) for x in r) for r in rays]
        if not rays:
            raise ShapeError("a cone needs at least one ray")
        self.rays: tuple[tuple[int, ...], ...] = tuple(primitive(r) for r in rays)
        self.ambient_dim = len(self.rays[0])
        if any(not any(r) for r in self.rays):
            raise ShapeError("zero ray generator")
        if validate:
            if self.rays != tuple(rays):
                raise ShapeError("ray generators must be primitive")
            if not self.is_strongly_convex():
                raise ShapeError("cone is not strongly convex")
            bad = [r for r in self.rays if not self.is_extreme(r)]
            if bad:
                raise ShapeError(f"non-extreme ray generators {bad}")

    def __repr__(self):
        return f"Cone({[list(r) for r in self.rays]})"

    def __eq__(self, other):
        return isinstance(other, Cone) and set(self.rays) == set(other.rays)

    def __hash__(self):
        return hash(frozenset(self.rays))

    @cached_property
    def dim(self) -> int:
        return rank(self.rays)

    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    def is_simplicial(self) -> bool:
        return len(self.rays) == self.dim

    @cached_property
    def perp(self) -> tuple[tuple[int, ...], ...]:
        return tuple(kernel_basis(self.rays))

    @cached_property
    def normals(self) -> tuple[tuple[int, ...], ...]:
        k = self.dim
        if k == 1:
            return (self.rays[0],)
        found = set()
        for sub in itertools.combinations(self.rays, k - 1):
            if rank(sub) < k - 1:
                continue
            ker = kernel_basis(list(sub) + list(self.perp))
            if len(ker) != 1:
                continue
            n = ker[0]
            vals = [dot(n, r) for r in self.rays]
            if all(v >= 0 for v in vals):
                found.add(primitive(n))
            elif all(v <= 0 for v in vals):
                found.add(primitive(_neg(n)))
        return tuple(sorted(found))

    def is_strongly_convex(self) -> bool:
        if self.dim == 1:
            # a ray, or a line when two opposite generators are given
            return len(set(self.rays)) == 1
        return rank(list(self.normals) + list(self.perp)) == self.ambient_dim

    def contains(self, x: Sequence) -> bool:
        if any(dot(p, x) for p in self.perp):
            return False
        return all(dot(n, x) >= 0 for n in self.normals)

    def is_extreme(self, r: Sequence[int]) -> bool:
        if self.dim == 1:
            return True
        tight = [n for n in self.normals if dot(n, r) == 0]
        return bool(tight) and rank(tight + list(self.perp)) == self.ambient_dim - 1

    def face_containing(self, points: Iterable[Sequence[int]]) -> tuple[int, ...]:
        """Indices of the rays of the smallest face containing ``points``."""
        points = list(points)
        tight = [n for n in self.normals if all(dot(n, p) == 0 for p in points)]
        return tuple(i for i, r in enumerate(self.rays) if all(dot(n, r) == 0 for n in tight))

    def gorenstein_point(self):
        """The dual vector pairing to 1 with every ray, if it exists and is integral."""
        idx = _independent_subset(self.rays)
        sol = solve_rational(IntMatrix([self.rays[i] for i in idx]), [1] * len(idx)) if len(idx) == self.ambient_dim else None
        if sol is None or any(x.denominator != 1 for x in sol):
            return None
        m = tuple(int(x) for x in sol)
        if any(dot(m, r) != 1 for r in self.rays):
            return None
        return m

    def multiplicity(self) -> int:
        """Index of the sublattice spanned by the rays (simplicial cones)."""
        inv = smith_invariants(self.rays)
        out = 1
        for d in inv:
            out *= d
        return out


def _independent_subset(vectors: Sequence[Sequence[int]]) -> list[int]:
    chosen: list[int] = []
    for i, v in enumerate(vectors):
        if rank([vectors[j] for j in chosen] + [v]) > len(chosen):
            chosen.append(i)
    return chosen


# -- fans ------------------------------------------------------------------------


@dataclass(frozen=True)
class Fan:
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(
            self, "max_cones", tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones)
        )
        n = len(self.rays)
        for c in self.max_cones:
            if any(i < 0 or i >= n for i in c):
                raise ShapeError(f"cone {c} refers to a missing ray")

    @property
    def dim(self) -> int:
        return len(self.rays[0])

    def cone(self, idx: Sequence[int]) -> Cone:
        return Cone([self.rays[i] for i in idx])

    def cone_name(self, idx: Sequence[int], prefix: str = "C") -> str:
        return prefix + "".join(str(i + 1) for i in sorted(idx))

    def cone_index(self, name_or_rays) -> tuple[int, ...]:
        """Look up a maximal cone by 1-based name digits (``"2345"``) or rays."""
        if isinstance(name_or_rays, str):
            digits = name_or_rays.lstrip("Cσs_")
            for c in self.max_cones:
                if "".join(str(i + 1) for i in c) == digits:
                    return c
            raise KeyError(name_or_rays)
        target = {tuple(r) for r in name_or_rays}
        for c in self.max_cones:
            if {self.rays[i] for i in c} == target:
                return c
        raise KeyError(name_or_rays)

    def all_cones(self) -> set[tuple[int, ...]]:
        """Every cone of the fan (faces of maximal cones), origin excluded."""
        out = set()
        for c in self.max_cones:
            cone = self.cone(c)
            for k in range(1, len(c) + 1):
                for sub in itertools.combinations(range(len(c)), k):
                    face = cone.face_containing([cone.rays[i] for i in sub])
                    out.add(tuple(sorted(c[i] for i in face)))
        return out

    def smallest_cone_containing(self, points: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
        points = [p for p in points if any(p)]
        if not points:
            return ()
        for c in self.max_cones:
            cone = self.cone(c)
            if all(cone.contains(p) for p in points):
                return tuple(sorted(c[i] for i in cone.face_containing(points)))
        return None

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays], "max_cones": [list(c) for c in self.max_cones]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Fan":
        base = int(data.get("index_base", 0))
        return cls(
            tuple(tuple(r) for r in data["rays"]),
            tuple(tuple(i - base for i in c) for c in data["max_cones"]),
        )


def load_fan(path: str | Path) -> Fan:
    with open(path) as fh:
        return Fan.from_json(json.load(fh))


def _reorder(found: Sequence[tuple], order: Sequence[Sequence[int]] | None) -> list[tuple]:
    if order is None:
        return list(found)
    order = [tuple(v) for v in order]
    if sorted(order) != sorted(found):
        raise ShapeError("ray_order must be a permutation of the rays")
    return order


def face_fan(P: LatticePolytope, ray_order: Sequence[Sequence[int]] | None = None) -> Fan:
    """Fan over the faces of P; one maximal cone per facet."""
    if not P.origin_is_interior():
        raise NotInteriorError("face fan needs the origin strictly inside P")
    rays = _reorder(P.vertices, ray_order)
    pos = {v: i for i, v in enumerate(rays)}
    cones = sorted(tuple(sorted(pos[P.vertices[i]] for i in fv)) for fv in P.facet_vertices)
    return Fan(tuple(rays), tuple(cones))


def normal_fan(P: LatticePolytope, ray_order: Sequence[Sequence[int]] | None = None) -> Fan:
    """Inner normal fan: rays are inward facet normals, one cone per vertex."""
    normals = [f.normal for f in P.facets]
    rays = _reorder(normals, ray_order)
    pos = {n: i for i, n in enumerate(rays)}
    cones = []
    for vi in range(len(P.vertices)):
        cones.append(tuple(sorted(pos[f.normal] for f, fv in zip(P.facets, P.facet_vertices) if vi in fv)))
    return Fan(tuple(rays), tuple(sorted(cones)))


# -- dual cones ------------------------------------------------------------------------


def hilbert_bound(cone: Cone) -> int:
    """Upper bound on <m, rho> over Hilbert basis elements m, for the chosen basis rays.

    Every irreducible m lies in the closed parallelepiped spanned by some
    d extreme rays of the dual cone (the facet normals), so its pairing
    with a ray is at most the sum of the normals' pairings with that ray.
    """
    basis = _independent_subset(cone.rays)
    return max(sum(dot(n, cone.rays[i]) for n in cone.normals) for i in basis)


def dual_cone_generators(cone: Cone, bound: int | None = None) -> list[tuple[int, ...]]:
    """Hilbert basis of the dual monoid by bounded enumeration.

    Raises :class:`ResourceError` when ``bound`` is below the rigorous
    bound from :func:`hilbert_bound`, since the scan could then miss
    generators.
    """
    if not cone.is_full_dimensional():
        raise ShapeError("dual_cone_generators needs a full-dimensional cone")
    if bound is None:
        bound = DEFAULT_HILBERT_BOUND
    need = hilbert_bound(cone)
    if bound < need:
        raise ResourceError(
            f"Hilbert basis enumeration bound {bound} is below the required {need}; "
            "pass a larger bound"
        )
    basis = [cone.rays[i] for i in _independent_subset(cone.rays)]
    B = IntMatrix(basis)
    cands = []
    for pairing in itertools.product(range(bound + 1), repeat=len(basis)):
        if not any(pairing):
            continue
        sol = solve_rational(B, pairing)
        if sol is None or any(x.denominator != 1 for x in sol):
            continue
        m = tuple(int(x) for x in sol)
        if all(dot(m, r) >= 0 for r in cone.rays):
            cands.append(m)
    cset = set(cands)
    out = []
    for m in cands:
        reducible = any(
            m2 != m and tuple(a - b for a, b in zip(m, m2)) in cset for m2 in cands
        )
        if not reducible:
            out.append(m)
    return sorted(out)


# -- classification ------------------------------------------------------------------


@dataclass(frozen=True)
class ConeClass:
    kind: str  # "Smooth" | "ODP" | "Other"
    report: dict = field(default_factory=dict, compare=False)

    def __str__(self):
        return self.kind


def _odp_square(rays, m) -> tuple | None:
    """Return (a, b, c, d) with a + c == b + d and unimodular edges, else None."""
    a = rays[0]
    for c in rays[1:]:
        b, d = [r for r in rays[1:] if r != c]
        if tuple(x + y for x, y in zip(a, c)) == tuple(x + y for x, y in zip(b, d)):
            e1 = tuple(x - y for x, y in zip(b, a))
            e2 = tuple(x - y for x, y in zip(d, a))
            if abs(det([a, e1, e2])) == 1:
                return (a, b, c, d)
    return None


def classify_cone(cone: Cone) -> ConeClass:
    d = cone.ambient_dim
    report = {
        "rays": [list(r) for r in cone.rays],
        "dim": cone.dim,
        "simplicial": cone.is_simplicial(),
    }
    if cone.is_simplicial():
        mult = cone.multiplicity()
        report["multiplicity"] = mult
        if mult == 1:
            return ConeClass("Smooth", report)
        return ConeClass("Other", report)
    if d != 3 or not cone.is_full_dimensional():
        report["reason"] = "classification implemented for 3-dimensional cones only"
        return ConeClass("Other", report)
    m = cone.gorenstein_point()
    report["gorenstein_point"] = list(m) if m else None
    if m is None:
        report["reason"] = "not Gorenstein"
        return ConeClass("Other", report)
    if len(cone.rays) == 4 and _odp_square(list(cone.rays), m):
        return ConeClass("ODP", report)
    report["reason"] = "Gorenstein cross-section is not a unimodular parallelogram"
    return ConeClass("Other", report)


def singularity_report(fan: Fan) -> dict:
    per_cone = []
    counts: dict[str, int] = {}
    for c in fan.max_cones:
        cls = classify_cone(fan.cone(c))
        per_cone.append({"cone": fan.cone_name(c), "rays": list(c), "class": cls.kind})
        counts[cls.kind] = counts.get(cls.kind, 0) + 1
    return {"counts": counts, "cones": per_cone, "smooth": counts.get("Smooth", 0) == len(fan.max_cones)}


# -- chart labelings -------------------------------------------------------------------


LABELS = ("x", "y", "z", "w")


@dataclass(frozen=True)
class ChartLabeling:
    """Dual generators x, y, z, w of an ODP cone with x + y == z + w."""

    name: str
    rays: tuple[tuple[int, ...], ...]
    x: tuple[int, ...]
    y: tuple[int, ...]
    z: tuple[int, ...]
    w: tuple[int, ...]

    @property
    def cone(self) -> Cone:
        return Cone(self.rays)

    def generators(self) -> dict[str, tuple[int, ...]]:
        return {"x": self.x, "y": self.y, "z": self.z, "w": self.w}

    def validate(self) -> None:
        s1 = tuple(a + b for a, b in zip(self.x, self.y))
        s2 = tuple(a + b for a, b in zip(self.z, self.w))
        if s1 != s2:
            raise ShapeError(f"chart {self.name}: x + y != z + w")
        gens = sorted([self.x, self.y, self.z, self.w])
        if gens != dual_cone_generators(self.cone):
            raise ShapeError(f"chart {self.name}: labels are not the dual monoid generators")
        if len(equal_sum_pairings(gens)) != 1:
            raise ShapeError(f"chart {self.name}: equal-sum pairing is not unique")

    def to_json(self) -> dict:
        return {"name": self.name, "rays": [list(r) for r in self.rays], **{k: list(v) for k, v in self.generators().items()}}

    @classmethod
    def from_json(cls, data: Mapping) -> "ChartLabeling":
        return cls(
            data["name"],
            tuple(tuple(r) for r in data["rays"]),
            *(tuple(data[k]) for k in LABELS),
        )


def equal_sum_pairings(gens: Sequence[Sequence[int]]) -> list[tuple[tuple, tuple]]:
    """Pair-partitions {{a, b}, {c, d}} of four vectors with a + b == c + d."""
    gens = [tuple(g) for g in gens]
    if len(gens) != 4:
        return []
    a = gens[0]
    out = []
    for i in (1, 2, 3):
        b = gens[i]
        c, d = [gens[j] for j in (1, 2, 3) if j != i]
        if tuple(p + q for p, q in zip(a, b)) == tuple(p + q for p, q in zip(c, d)):
            out.append(((a, b), (c, d)))
    return out


def canonical_labeling(cone: Cone, name: str = "") -> ChartLabeling:
    """Lex-canonical labels: x is the lex-minimal generator, y its equal-sum
    partner, z < w among the rest.  These need not match hand-chosen labels."""
    gens = dual_cone_generators(cone)
    pairs = equal_sum_pairings(gens)
    if len(pairs) != 1:
        raise ShapeError("cone has no unique equal-sum pairing of four dual generators")
    (x, y), (z, w) = pairs[0]
    z, w = sorted([z, w])
    return ChartLabeling(name, cone.rays, x, y, z, w)


# -- morphisms -----------------------------------------------------------------------------


@dataclass
class MorphismCheck:
    ok: bool
    table: dict  # source cone name -> target cone name
    failures: list

    def to_json(self) -> dict:
        return {"ok": self.ok, "table": self.table, "failures": self.failures}


def toric_morphism_check(A, src: Fan, tgt: Fan, src_prefix: str = "s", tgt_prefix: str = "C") -> MorphismCheck:
    A = A if isinstance(A, IntMatrix) else IntMatrix(A)
    if A.ncols != src.dim or A.nrows != tgt.dim:
        raise ShapeError(f"matrix shape {A.shape} does not map Z^{src.dim} to Z^{tgt.dim}")
    table = {}
    failures = []
    for c in src.max_cones:
        images = [A @ src.rays[i] for i in c]
        hit = tgt.smallest_cone_containing(images)
        name = src.cone_name(c, src_prefix)
        if hit is None:
            failures.append(name)
        else:
            table[name] = tgt.cone_name(hit, tgt_prefix)
    return MorphismCheck(not failures, table, failures)


def _unimodular_dual_basis(rays: Sequence[Sequence[int]]):
    """For rays extending to a lattice basis: dual elements m_j with
    <m_j, r_i> = delta_ij, plus a basis of the orthogonal complement."""
    k = len(rays)
    S, U, V = snf(IntMatrix(rays))
    if any(S[i, i] != 1 for i in range(k)):
        return None
    d = V.nrows
    # columns of V . diag(U, I) are the dual basis of a completion of the rays
    Ublk = [[U[i, j] if i < k and j < k else int(i == j) for j in range(d)] for i in range(d)]
    W = V @ IntMatrix(Ublk)
    cols = W.columns
    return [tuple(cols[j]) for j in range(k)], kernel_basis(rays)


@dataclass
class ChartEmbeddingCheck:
    ok: bool
    assignment: dict  # target generator label -> source dual vector
    missing: list

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "assignment": {k: list(v) for k, v in self.assignment.items()},
            "missing": [list(m) for m in self.missing],
        }


def chart_generators(tau: Cone, labels: Sequence[str] | None = None) -> dict[str, tuple[int, ...]]:
    """Named generators of the monoid of the dual cone of ``tau``.

    For a unimodular cone: the dual basis element ``u<label>`` of each ray
    plus plus/minus a basis of the orthogonal complement; otherwise the
    Hilbert basis of a full-dimensional cone.
    """
    labels = list(labels) if labels is not None else [str(i + 1) for i in range(len(tau.rays))]
    dual = _unimodular_dual_basis(tau.rays) if tau.is_simplicial() else None
    if dual is not None:
        ms, perp = dual
        gens = {f"u{labels[i]}": m for i, m in enumerate(ms)}
        for i, p in enumerate(perp):
            gens[f"p{i + 1}"] = tuple(p)
            gens[f"-p{i + 1}"] = _neg(p)
        return gens
    if not tau.is_full_dimensional():
        raise ShapeError("chart generators need a unimodular or full-dimensional target cone")
    return {f"h{i + 1}": h for i, h in enumerate(dual_cone_generators(tau))}


def closed_embedding_chart_check(A, src_cone: Cone, tgt_cone: Cone, tgt_labels: Sequence[str] | None = None) -> ChartEmbeddingCheck:
    """Does the transpose of A map the target chart generators onto generators
    of the source chart monoid?  This is surjectivity of the coordinate ring map."""
    A = A if isinstance(A, IntMatrix) else IntMatrix(A)
    for r in src_cone.rays:
        if not tgt_cone.contains(A @ r):
            raise ShapeError("A does not map the source cone into the target cone")
    At = A.T
    gens = chart_generators(tgt_cone, tgt_labels)
    images = {name: tuple(At @ m) for name, m in gens.items()}
    needed = dual_cone_generators(src_cone) if src_cone.is_full_dimensional() else []
    assignment = {}
    missing = []
    for h in needed:
        hit = [name for name, img in images.items() if img == h]
        if hit:
            assignment[hit[0]] = h
        else:
            missing.append(h)
    return ChartEmbeddingCheck(not missing, assignment, missing)
