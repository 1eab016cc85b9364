"""Loading the shipped datasets and building the objects they describe."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

from .exactla import IntMatrix
from .fan import ChartLabeling, Fan, face_fan, normal_fan
from .polytope import LatticePolytope

DATA_DIR = Path(__file__).resolve().parent / "data"


def resolve(path: str | Path, relative_to: str | Path | None = None) -> Path:
    """Find a dataset file: as given, next to ``relative_to``, or in the package data."""
    p = Path(path)
    candidates = [p]
    if relative_to is not None:
        candidates.append(Path(relative_to).parent / p)
    candidates.append(DATA_DIR / p.name)
    for c in candidates:
        if c.is_file():
            return c
    raise FileNotFoundError(f"dataset {str(path)!r} not found (also looked in {DATA_DIR})")


def load(path: str | Path, relative_to: str | Path | None = None) -> tuple[dict, Path]:
    real = resolve(path, relative_to)
    try:
        with open(real) as fh:
            return json.load(fh), real
    except json.JSONDecodeError as exc:
        raise ValueError(f"{real}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def vertices_of(data: dict) -> list[tuple[int, ...]]:
    if "vertices" not in data:
        raise ValueError("polytope JSON needs a 'vertices' list")
    verts = [tuple(int(x) for x in v) for v in data["vertices"]]
    if "dim" in data and any(len(v) != data["dim"] for v in verts):
        raise ValueError(f"vertex length does not match dim={data['dim']}")
    return verts


def polytope_and_fan(data: dict) -> tuple[LatticePolytope, Fan]:
    """The polytope and its face fan, rays numbered in the file's vertex order.

    A file with a ``ray_order`` describes a normal fan instead, numbered by it.
    """
    verts = vertices_of(data)
    P = LatticePolytope.from_vertices(verts)
    if "ray_order" in data:
        return P, normal_fan(P, [tuple(r) for r in data["ray_order"]])
    order = verts if sorted(verts) == sorted(P.vertices) else None
    return P, face_fan(P, order)


def fan_of(data: dict) -> Fan:
    if "max_cones" in data and "rays" in data:
        return Fan.from_json(data)
    return polytope_and_fan(data)[1]


def charts_of(data: dict) -> list[ChartLabeling]:
    verts = vertices_of(data)
    base = 1
    out = []
    for c in data.get("charts", []):
        rays = tuple(verts[i - base] for i in c["cone"])
        out.append(ChartLabeling(c["name"], rays, *(tuple(c[k]) for k in ("x", "y", "z", "w"))))
    return out


def generators_of(data: dict) -> dict[str, IntMatrix]:
    return {k: IntMatrix(v) for k, v in data.get("generators", {}).items()}


def expect(data: dict) -> dict[str, Any]:
    return data.get("expect", {})
