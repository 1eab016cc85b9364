"""Buchberger's algorithm with Gebauer-Moeller pair criteria, elimination,
Jacobian ideals and discriminants.

Internally polynomials are dicts ``exponent tuple -> Fraction`` over a fixed
variable tuple; the public API speaks :class:`MultiPoly`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import ResourceError
from .order import MonomialOrder
from .poly import MultiPoly

DEFAULT_BUDGET = 200_000


def default_budget() -> int:
    env = os.environ.get("FANO_FORGE_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _disjoint(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


class _Engine:
    """Reduction machinery over one variable tuple and order."""

    def __init__(self, n: int, key, budget: int):
        self.n = n
        self.key = key
        self.budget = budget
        self.steps = 0
        self._cache: dict = {}

    def k(self, e):
        v = self._cache.get(e)
        if v is None:
            v = self._cache[e] = self.key(e)
        return v

    def lm(self, p: dict):
        return max(p, key=self.k)

    def monic(self, p: dict) -> dict:
        lc = p[self.lm(p)]
        if lc == 1:
            return p
        inv = 1 / lc
        return {e: c * inv for e, c in p.items()}

    def _tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise ResourceError(
                f"Groebner basis computation exceeded {self.budget} reduction steps "
                "(raise the budget or set FANO_FORGE_BUDGET)"
            )

    def reduce(self, p: dict, basis: Sequence[tuple]) -> dict:
        """Full normal form of p modulo basis, a list of (lm, poly) monic."""
        p = dict(p)
        rem: dict = {}
        while p:
            e = self.lm(p)
            c = p[e]
            for g_lm, g in basis:
                if _divides(g_lm, e):
                    self._tick()
                    shift = tuple(x - y for x, y in zip(e, g_lm))
                    for ge, gc in g.items():
                        te = tuple(x + y for x, y in zip(ge, shift))
                        v = p.get(te, 0) - c * gc
                        if v:
                            p[te] = v
                        else:
                            p.pop(te, None)
                    break
            else:
                rem[e] = c
                del p[e]
        return rem

    def spoly(self, f: tuple, g: tuple) -> dict:
        (fl, fp), (gl, gp) = f, g
        m = _lcm(fl, gl)
        sf = tuple(x - y for x, y in zip(m, fl))
        sg = tuple(x - y for x, y in zip(m, gl))
        out: dict = {}
        for e, c in fp.items():
            out[tuple(x + y for x, y in zip(e, sf))] = c
        for e, c in gp.items():
            te = tuple(x + y for x, y in zip(e, sg))
            v = out.get(te, 0) - c
            if v:
                out[te] = v
            else:
                out.pop(te, None)
        return out


def _gebauer_moeller(polys, G: list[int], B: list[tuple], h: int):
    """Update the basis index list G and pair list B after adding polys[h]."""
    lh = polys[h][0]
    C = list(G)
    D: list[int] = []
    while C:
        g1 = C.pop(0)
        l1 = _lcm(lh, polys[g1][0])
        if _disjoint(lh, polys[g1][0]) or not any(
            _divides(_lcm(lh, polys[g2][0]), l1) for g2 in C + D
        ):
            D.append(g1)
    E = [g for g in D if not _disjoint(lh, polys[g][0])]
    B_new = []
    for g1, g2 in B:
        l12 = _lcm(polys[g1][0], polys[g2][0])
        if (
            not _divides(lh, l12)
            or _lcm(polys[g1][0], lh) == l12
            or _lcm(polys[g2][0], lh) == l12
        ):
            B_new.append((g1, g2))
    B_new.extend((g, h) for g in E)
    G_new = [g for g in G if not _divides(lh, polys[g][0])]
    G_new.append(h)
    return G_new, B_new


def _buchberger_raw(gens: list[dict], eng: _Engine) -> list[dict]:
    polys: list[tuple] = []
    G: list[int] = []
    B: list[tuple] = []
    for f in gens:
        if not f:
            continue
        f = eng.reduce(f, [polys[i] for i in G])
        if not f:
            continue
        f = eng.monic(f)
        polys.append((eng.lm(f), f))
        G, B = _gebauer_moeller(polys, G, B, len(polys) - 1)
    while B:
        # normal selection: smallest lcm of leading monomials, ties by index
        best = min(
            range(len(B)),
            key=lambda i: (eng.k(_lcm(polys[B[i][0]][0], polys[B[i][1]][0])), B[i]),
        )
        i, j = B.pop(best)
        s = eng.spoly(polys[i], polys[j])
        h = eng.reduce(s, [polys[g] for g in G])
        if h:
            h = eng.monic(h)
            polys.append((eng.lm(h), h))
            G, B = _gebauer_moeller(polys, G, B, len(polys) - 1)
    # minimalize then inter-reduce
    basis = [polys[g] for g in G]
    basis = [
        b for idx, b in enumerate(basis)
        if not any(_divides(o[0], b[0]) and (o[0] != b[0] or jdx < idx) for jdx, o in enumerate(basis) if jdx != idx)
    ]
    reduced = []
    for idx, (l, p) in enumerate(basis):
        others = [b for jdx, b in enumerate(basis) if jdx != idx]
        tail = {e: c for e, c in p.items() if e != l}
        tail = eng.reduce(tail, others)
        tail[l] = Fraction(1)
        reduced.append(tail)
    reduced.sort(key=lambda p: eng.k(eng.lm(p)), reverse=True)
    return reduced


@dataclass(frozen=True)
class Ideal:
    gens: tuple[MultiPoly, ...]
    vars: tuple[str, ...]

    def __init__(self, gens: Iterable[MultiPoly], variables: Sequence[str] | None = None):
        gens = list(gens)
        if variables is None:
            variables = []
            for g in gens:
                variables.extend(v for v in g.vars if v not in variables)
        variables = tuple(variables)
        object.__setattr__(self, "vars", variables)
        object.__setattr__(
            self, "gens", tuple(g.with_vars(variables) for g in gens if not g.is_zero())
        )

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def groebner(self, order: MonomialOrder | None = None, budget: int | None = None) -> list[MultiPoly]:
        return buchberger(self, order, budget)

    def is_unit(self, order: MonomialOrder | None = None) -> bool:
        gb = self.groebner(order)
        return len(gb) == 1 and gb[0].is_constant()

    def contains(self, p: MultiPoly, order: MonomialOrder | None = None) -> bool:
        order = order or MonomialOrder.degrevlex(self.vars)
        gb = self.groebner(order)
        return reduce(p.with_vars(self.vars), gb, order).is_zero()

    def principal_generator(self) -> MultiPoly | None:
        """The generator when the ideal is visibly principal, scaled primitive."""
        if len(self.gens) != 1:
            return None
        return self.gens[0].primitive(MonomialOrder.lex(self.vars).key_for(self.vars))

    def __str__(self):
        return "<" + ", ".join(str(g) for g in self.gens) + ">"


def _to_dicts(ideal: Ideal) -> list[dict]:
    return [dict(g.terms) for g in ideal.gens]


def buchberger(ideal: Ideal, order: MonomialOrder | None = None, budget: int | None = None) -> list[MultiPoly]:
    """Reduced (monic, auto-reduced) Groebner basis, sorted by leading monomial."""
    order = order or MonomialOrder.degrevlex(ideal.vars)
    eng = _Engine(len(ideal.vars), order.key_for(ideal.vars), budget or default_budget())
    raw = _buchberger_raw(_to_dicts(ideal), eng)
    return [MultiPoly(p, ideal.vars) for p in raw]


def reduce(p: MultiPoly, basis: Sequence[MultiPoly], order: MonomialOrder) -> MultiPoly:
    """Normal form of p modulo basis (basis need not be a Groebner basis)."""
    variables = p.vars
    for b in basis:
        variables = variables + tuple(v for v in b.vars if v not in variables)
    eng = _Engine(len(variables), order.key_for(variables), 10**12)
    gb = []
    for b in basis:
        d = dict(b.with_vars(variables).terms)
        if d:
            d = eng.monic(d)
            gb.append((eng.lm(d), d))
    return MultiPoly(eng.reduce(dict(p.with_vars(variables).terms), gb), variables)


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder) -> MultiPoly:
    f, g = f._align(g)
    eng = _Engine(len(f.vars), order.key_for(f.vars), 10**12)
    fd, gd = eng.monic(dict(f.terms)), eng.monic(dict(g.terms))
    return MultiPoly(eng.spoly((eng.lm(fd), fd), (eng.lm(gd), gd)), f.vars)


def is_groebner(basis: Sequence[MultiPoly], order: MonomialOrder) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if not reduce(s_polynomial(basis[i], basis[j], order), basis, order).is_zero():
                return False
    return True


def elimination_order(variables: Sequence[str], drop: Sequence[str], kind: str = "block") -> MonomialOrder:
    drop = [v for v in variables if v in set(drop)]
    keep = [v for v in variables if v not in set(drop)]
    if kind == "lex":
        return MonomialOrder.lex(drop + keep)
    if kind == "block":
        return MonomialOrder.elimination(drop, keep, "degrevlex")
    raise ValueError(f"unknown elimination order {kind!r}; use 'block' or 'lex'")


def eliminate(ideal: Ideal, drop: Iterable[str], order: str = "block", budget: int | None = None) -> Ideal:
    """Generators of the elimination ideal I meet k[remaining variables].

    Generators are returned scaled to primitive integer form with positive
    lex-leading coefficient, sorted by their printed form.
    """
    drop = set(drop)
    keep = tuple(v for v in ideal.vars if v not in drop)
    ord_ = elimination_order(ideal.vars, drop, order)
    gb = buchberger(ideal, ord_, budget)
    dpos = [i for i, v in enumerate(ideal.vars) if v in drop]
    lex_keep = MonomialOrder.lex(keep).key_for(keep)
    out = []
    for g in gb:
        if all(not e[i] for e in g.terms for i in dpos):
            out.append(g.with_vars(keep).primitive(lex_keep))
    out.sort(key=str)
    return Ideal(out, keep)


def jacobian_ideal(f: MultiPoly, fiber_vars: Sequence[str]) -> Ideal:
    missing = [v for v in fiber_vars if v not in f.vars]
    if missing:
        raise ValueError(f"fiber variables {missing} not among {f.vars}")
    return Ideal([f] + [f.diff(v) for v in fiber_vars], f.vars)


def discriminant(
    f: MultiPoly,
    fiber_vars: Sequence[str],
    base_vars: Sequence[str] | None = None,
    order: str = "block",
    budget: int | None = None,
) -> Ideal:
    """Elimination ideal of the relative Jacobian ideal; cuts out the singular fibres."""
    if base_vars is None:
        base_vars = [v for v in f.vars if v not in fiber_vars]
    variables = tuple(fiber_vars) + tuple(base_vars)
    extra = [v for v in f.used_vars() if v not in variables]
    if extra:
        raise ValueError(f"variables {extra} are neither fiber nor base variables")
    f = f.with_vars(variables)
    res = eliminate(jacobian_ideal(f, fiber_vars), fiber_vars, order, budget)
    return Ideal(res.gens, tuple(base_vars))
