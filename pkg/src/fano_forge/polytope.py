"""Lattice polytopes: hull, face lattice, polar duality, volume, barycentre.

Facets are found by brute force over ``dim``-subsets of the input points,
which is exact and fast enough for the small polytopes handled here
(a few dozen points in dimension at most 6).  A facet is stored as an
inward normal ``n`` (primitive, in the dual lattice) and a height ``h`` so
that the polytope is ``{x : <n, x> >= -h}``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial, gcd
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DegeneratePolytopeError, NotInteriorError, NotLatticeError
from .exactla import IntMatrix, det, dot, kernel_basis, primitive, rank

MAX_VERTICES = 64
MAX_DIM = 6


@dataclass(frozen=True)
class Facet:
    normal: tuple[int, ...]
    height: int


@dataclass(frozen=True)
class FaceRecord:
    dim: int
    vertices: tuple[int, ...]
    lattice_points: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class FVector:
    counts: dict
    edge_lengths: tuple[int, ...]
    facet_sizes: tuple[int, ...]

    def facet_shape_counts(self) -> dict:
        out: dict = {}
        for k in self.facet_sizes:
            out[k] = out.get(k, 0) + 1
        return dict(sorted(out.items()))


@dataclass(frozen=True)
class KPolystabilityCertificate:
    reflexive: bool
    centrally_symmetric: bool
    barycenter: tuple | None
    volume: int | None
    verdict: bool | None  # None means the criterion does not apply

    @property
    def applicable(self) -> bool:
        return self.verdict is not None


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    if not points:
        return -1
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return rank(diffs) if diffs else 0


def _hyperplane_through(pts: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    p0 = pts[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    ker = kernel_basis(diffs)
    if len(ker) != 1:
        return None
    return primitive(ker[0])


class LatticePolytope:
    """A full-dimensional lattice polytope given by its vertices."""

    def __init__(self, vertices, facets, facet_vertices):
        self.vertices: tuple[tuple[int, ...], ...] = vertices
        self.facets: tuple[Facet, ...] = facets
        self.facet_vertices: tuple[frozenset, ...] = facet_vertices
        self.dim = len(vertices[0])

    @classmethod
    def from_vertices(cls, points: Iterable[Sequence[int]]) -> "LatticePolytope":
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise DegeneratePolytopeError("empty point set")
        d = len(pts[0])
        if any(len(p) != d for p in pts):
            raise ValueError("points of mixed dimension")
        if affine_rank(pts) < d:
            raise DegeneratePolytopeError(
                f"points span an affine subspace of dimension {affine_rank(pts)} < {d}"
            )
        if len(pts) > MAX_VERTICES * 4 or d > MAX_DIM:
            raise DegeneratePolytopeError("input exceeds the supported desk-scale size")

        found: dict[tuple[int, ...], int] = {}
        for subset in itertools.combinations(pts, d):
            n = _hyperplane_through(subset)
            if n is None:
                continue
            vals = [dot(n, p) for p in pts]
            c = dot(n, subset[0])
            if all(v >= c for v in vals):
                found.setdefault(n, -c)
            if all(v <= c for v in vals):
                found.setdefault(tuple(-x for x in n), c)
        normals = sorted(found)
        # a point is a vertex iff the facets through it have normals of full rank
        verts = []
        for p in pts:
            through = [n for n in normals if dot(n, p) == -found[n]]
            if through and rank(through) == d:
                verts.append(p)
        if len(verts) > MAX_VERTICES:
            raise DegeneratePolytopeError(f"more than {MAX_VERTICES} vertices")
        vertices = tuple(verts)
        facets = tuple(Facet(n, found[n]) for n in normals)
        fverts = tuple(
            frozenset(i for i, v in enumerate(vertices) if dot(f.normal, v) == -f.height)
            for f in facets
        )
        return cls(vertices, facets, fverts)

    def __repr__(self):
        return f"LatticePolytope(dim={self.dim}, vertices={len(self.vertices)}, facets={len(self.facets)})"

    def __eq__(self, other):
        return isinstance(other, LatticePolytope) and set(self.vertices) == set(other.vertices)

    def __hash__(self):
        return hash(frozenset(self.vertices))

    # -- basic predicates ---------------------------------------------------

    def contains(self, x: Sequence) -> bool:
        return all(dot(f.normal, x) >= -f.height for f in self.facets)

    def origin_is_interior(self) -> bool:
        return all(f.height > 0 for f in self.facets)

    def is_reflexive(self) -> bool:
        return all(f.height == 1 for f in self.facets)

    def is_centrally_symmetric(self) -> bool:
        vs = set(self.vertices)
        return all(tuple(-x for x in v) in vs for v in vs)

    # -- lattice points -----------------------------------------------------

    @cached_property
    def lattice_points(self) -> tuple[tuple[int, ...], ...]:
        lo = [min(v[i] for v in self.vertices) for i in range(self.dim)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.dim)]
        box = itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))
        return tuple(p for p in box if self.contains(p))

    def interior_lattice_points(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            p for p in self.lattice_points if all(dot(f.normal, p) > -f.height for f in self.facets)
        )

    # -- face lattice -------------------------------------------------------

    def _face_dim(self, face: frozenset) -> int:
        return affine_rank([self.vertices[i] for i in sorted(face)])

    @cached_property
    def _face_sets(self) -> dict[frozenset, int]:
        whole = frozenset(range(len(self.vertices)))
        faces = {whole: self.dim}
        frontier = [whole]
        while frontier:
            nxt = []
            for F in frontier:
                for G in self.facet_vertices:
                    I = F & G
                    if I and I != F and I not in faces:
                        faces[I] = self._face_dim(I)
                        nxt.append(I)
            frontier = nxt
        return faces

    def faces(self, dim: int | None = None) -> list[FaceRecord]:
        """Nonempty faces (optionally of one dimension), with lattice points."""
        out = []
        for F, k in sorted(self._face_sets.items(), key=lambda kv: (kv[1], sorted(kv[0]))):
            if dim is not None and k != dim:
                continue
            containing = [f for f, fv in zip(self.facets, self.facet_vertices) if F <= fv]
            pts = tuple(
                p for p in self.lattice_points if all(dot(f.normal, p) == -f.height for f in containing)
            )
            out.append(FaceRecord(k, tuple(sorted(F)), pts))
        return out

    def face_counts(self) -> dict[int, int]:
        counts = {k: 0 for k in range(-1, self.dim + 1)}
        counts[-1] = 1
        for k in self._face_sets.values():
            counts[k] += 1
        return counts

    def f_vector(self) -> FVector:
        counts = self.face_counts()
        edges = [F for F, k in self._face_sets.items() if k == 1]
        lengths = []
        for E in sorted(edges, key=sorted):
            i, j = sorted(E)
            diff = [a - b for a, b in zip(self.vertices[i], self.vertices[j])]
            g = 0
            for x in diff:
                g = gcd(g, x)
            lengths.append(g)
        sizes = tuple(len(fv) for fv in self.facet_vertices)
        return FVector({k: counts[k] for k in range(self.dim)}, tuple(lengths), sizes)

    # -- duality --------------------------------------------------------------

    def polar(self) -> "LatticePolytope":
        """Polar dual ``{m : <m, v> >= -1 for v in P}``; must be a lattice polytope."""
        if not self.origin_is_interior():
            raise NotInteriorError("polar dual needs the origin strictly inside")
        verts = []
        for f in self.facets:
            if any(x % f.height for x in f.normal):
                raise NotLatticeError(
                    f"polar vertex {f.normal}/{f.height} is not a lattice point; P is not reflexive"
                )
            verts.append(tuple(x // f.height for x in f.normal))
        return LatticePolytope.from_vertices(verts)

    # -- triangulation, volume, barycentre -------------------------------------

    def _subfaces(self, face: frozenset, k: int) -> list[frozenset]:
        return sorted(
            (G for G, j in self._face_sets.items() if j == k - 1 and G < face), key=sorted
        )

    def triangulate(self, strategy: str = "lexmin") -> list[tuple[int, ...]]:
        """Pulling triangulation into full-dimensional simplices.

        ``strategy`` picks the apex at every level: the lexicographically
        smallest (``"lexmin"``) or largest (``"lexmax"``) vertex of the face.
        """
        pick = {"lexmin": min, "lexmax": max}[strategy]

        def rec(face: frozenset, k: int) -> list[tuple[int, ...]]:
            if k == 0:
                return [tuple(face)]
            apex = pick(face, key=lambda i: self.vertices[i])
            out = []
            for G in self._subfaces(face, k):
                if apex in G:
                    continue
                out.extend(s + (apex,) for s in rec(G, k - 1))
            return out

        whole = frozenset(range(len(self.vertices)))
        return rec(whole, self.dim)

    def _simplex_volume(self, simplex: Sequence[int]) -> int:
        p0 = self.vertices[simplex[0]]
        rows = [[a - b for a, b in zip(self.vertices[i], p0)] for i in simplex[1:]]
        return abs(det(rows))

    def normalized_volume(self, strategy: str = "lexmin") -> int:
        return sum(self._simplex_volume(s) for s in self.triangulate(strategy))

    def euclidean_volume(self) -> Fraction:
        return Fraction(self.normalized_volume(), factorial(self.dim))

    def barycenter(self, strategy: str = "lexmin") -> tuple[Fraction, ...]:
        """Exact centroid, weighting simplex centroids by volume."""
        total = 0
        acc = [Fraction(0)] * self.dim
        for s in self.triangulate(strategy):
            vol = self._simplex_volume(s)
            total += vol
            for i in range(self.dim):
                acc[i] += Fraction(vol * sum(self.vertices[j][i] for j in s), len(s))
        return tuple(a / total for a in acc)

    # -- facets ---------------------------------------------------------------

    def facet_interior_points(self) -> list[int]:
        """Relatively interior lattice points of each facet, in facet order."""
        counts = []
        for f in self.facets:
            n = 0
            for p in self.lattice_points:
                if dot(f.normal, p) != -f.height:
                    continue
                if all(dot(g.normal, p) > -g.height for g in self.facets if g is not f):
                    n += 1
            counts.append(n)
        return counts

    def image(self, g: IntMatrix) -> "LatticePolytope":
        return LatticePolytope.from_vertices([g @ v for v in self.vertices])

    def to_json(self) -> dict:
        return {"dim": self.dim, "vertices": [list(v) for v in self.vertices]}


def from_vertices(points) -> LatticePolytope:
    return LatticePolytope.from_vertices(points)


def f_vector(P: LatticePolytope) -> FVector:
    return P.f_vector()


def polar(P: LatticePolytope) -> LatticePolytope:
    return P.polar()


def normalized_volume(P: LatticePolytope) -> int:
    return P.normalized_volume()


def barycenter(P: LatticePolytope) -> tuple[Fraction, ...]:
    return P.barycenter()


def facet_interior_points(P: LatticePolytope) -> list[int]:
    return P.facet_interior_points()


def kpolystable_certificate(P: LatticePolytope) -> KPolystabilityCertificate:
    """Barycentre test for K-polystability of the toric Fano of the face fan of P.

    The verdict is ``True`` iff the barycentre of the polar is the origin.
    Central symmetry of P is reported too, as a sufficient witness.
    """
    symmetric = P.is_centrally_symmetric()
    if not (P.origin_is_interior() and P.is_reflexive()):
        return KPolystabilityCertificate(False, symmetric, None, None, None)
    Q = P.polar()
    bc = Q.barycenter()
    return KPolystabilityCertificate(
        True, symmetric, bc, Q.normalized_volume(), all(x == 0 for x in bc)
    )


def load_polytope(path: str | Path) -> LatticePolytope:
    with open(path) as fh:
        data = json.load(fh)
    return polytope_from_json(data)


def polytope_from_json(data: dict) -> LatticePolytope:
    if "vertices" not in data:
        raise ValueError("polytope JSON needs a 'vertices' list")
    verts = data["vertices"]
    if "dim" in data and any(len(v) != data["dim"] for v in verts):
        raise ValueError(f"vertex length does not match dim={data['dim']}")
    return LatticePolytope.from_vertices(verts)
