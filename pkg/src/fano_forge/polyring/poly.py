"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`MultiPoly` stores an ordered tuple of variable names and a dict
from exponent tuples to nonzero :class:`~fractions.Fraction` coefficients.
Binary operations on polynomials over different variable tuples work on
the union of the variables (left operand's variables first).

Text format
-----------
Terms are joined by `` + `` / `` - ``; a term is an optional rational
coefficient followed by ``*``-separated factors ``name`` or ``name^k``.
:func:`format_poly` prints terms by descending total degree, ties broken
lexicographically in the polynomial's variable order, so
``parse(format_poly(p), p.vars) == p`` and printing is a fixed point.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence, Union

Number = Union[int, Fraction]


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class MultiPoly:
    __slots__ = ("vars", "terms")

    def __init__(self, terms: Mapping[tuple, Number] | None = None, variables: Sequence[str] = ()):
        self.vars: tuple[str, ...] = tuple(variables)
        n = len(self.vars)
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match variables {self.vars}")
            c = _frac(c)
            if c:
                clean[tuple(e)] = c
        self.terms: dict[tuple, Fraction] = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def _raw(cls, terms: dict, variables: tuple) -> "MultiPoly":
        p = cls.__new__(cls)
        p.vars = variables
        p.terms = terms
        return p

    @classmethod
    def var(cls, name: str, variables: Sequence[str] | None = None) -> "MultiPoly":
        variables = tuple(variables) if variables is not None else (name,)
        e = tuple(int(v == name) for v in variables)
        if sum(e) != 1:
            raise ValueError(f"{name!r} not among {variables}")
        return cls({e: 1}, variables)

    @classmethod
    def const(cls, c: Number, variables: Sequence[str] = ()) -> "MultiPoly":
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff: Number = 1, variables: Sequence[str] | None = None):
        variables = tuple(variables) if variables is not None else tuple(exps)
        return cls({tuple(exps.get(v, 0) for v in variables): coeff}, variables)

    @classmethod
    def parse(cls, text: str, variables: Sequence[str] | None = None) -> "MultiPoly":
        return parse(text, variables)

    # -- variable handling -----------------------------------------------------

    def with_vars(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express over ``variables`` (a superset of the used variables)."""
        variables = tuple(variables)
        if variables == self.vars:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for v, k in zip(self.vars, e):
                if k:
                    if v not in pos:
                        raise ValueError(f"variable {v!r} is used but missing from {variables}")
                    ne[pos[v]] = k
            out[tuple(ne)] = c
        return MultiPoly._raw(out, variables)

    def used_vars(self) -> tuple[str, ...]:
        used = [False] * len(self.vars)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(v for v, u in zip(self.vars, used) if u)

    def trim(self) -> "MultiPoly":
        return self.with_vars(self.used_vars())

    def rename(self, mapping: Mapping[str, str]) -> "MultiPoly":
        new = tuple(mapping.get(v, v) for v in self.vars)
        if len(set(new)) != len(new):
            raise ValueError("renaming merges variables; use substitute instead")
        return MultiPoly._raw(dict(self.terms), new)

    def _align(self, other: "MultiPoly") -> tuple["MultiPoly", "MultiPoly"]:
        if self.vars == other.vars:
            return self, other
        union = self.vars + tuple(v for v in other.vars if v not in self.vars)
        return self.with_vars(union), other.with_vars(union)

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(other, self.vars)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(out, a.vars)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MultiPoly._raw({}, self.vars)
            return MultiPoly._raw({e: c * other for e, c in self.terms.items()}, self.vars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._align(other)
        out: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MultiPoly._raw(out, a.vars)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / _frac(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        result = MultiPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other, self.vars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._align(other)
        return a.terms == b.terms

    def __hash__(self):
        t = self.trim()
        return hash((t.vars, frozenset(t.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)

    # -- queries --------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, names: Iterable[str]) -> int:
        idx = [self.vars.index(v) for v in names if v in self.vars]
        return max((sum(e[i] for i in idx) for e in self.terms), default=-1)

    def degree(self, name: str) -> int:
        return self.degree_in([name])

    def coefficient(self, exps: Mapping[str, int]) -> Fraction:
        e = tuple(exps.get(v, 0) for v in self.vars)
        return self.terms.get(e, Fraction(0))

    def term_list(self) -> list[tuple[Fraction, dict[str, int]]]:
        """(coefficient, {var: exponent}) pairs in printing order."""
        return [(c, {v: k for v, k in zip(self.vars, e) if k}) for e, c in _print_order(self)]

    def homogeneous_part(self, names: Iterable[str], k: int) -> "MultiPoly":
        """Terms whose degree in the variables ``names`` equals ``k``."""
        idx = [self.vars.index(v) for v in names if v in self.vars]
        return MultiPoly._raw(
            {e: c for e, c in self.terms.items() if sum(e[i] for i in idx) == k}, self.vars
        )

    def min_degree_in(self, names: Iterable[str]) -> int:
        idx = [self.vars.index(v) for v in names if v in self.vars]
        return min((sum(e[i] for i in idx) for e in self.terms), default=-1)

    # -- calculus and substitution ----------------------------------------------------

    def diff(self, name: str) -> "MultiPoly":
        if name not in self.vars:
            return MultiPoly._raw({}, self.vars)
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1 :]
                out[ne] = c * e[i]
        return MultiPoly._raw(out, self.vars)

    def substitute(self, mapping: Mapping[str, "MultiPoly | Number"]) -> "MultiPoly":
        """Simultaneously replace variables by polynomials or numbers."""
        mapping = {v: val for v, val in mapping.items() if v in self.vars}
        if not mapping:
            return self
        keep = tuple(v for v in self.vars if v not in mapping)
        extra: list[str] = []
        for val in mapping.values():
            if isinstance(val, MultiPoly):
                extra.extend(v for v in val.vars if v not in keep and v not in extra)
        target = keep + tuple(extra)
        images = {}
        for v, val in mapping.items():
            if isinstance(val, MultiPoly):
                images[v] = val.with_vars(target)
            else:
                images[v] = MultiPoly.const(val, target)
        pos_keep = [self.vars.index(v) for v in keep]
        sub_idx = [(self.vars.index(v), v) for v in mapping]
        powers: dict = {}

        def power(v, k):
            key = (v, k)
            if key not in powers:
                powers[key] = images[v] ** k
            return powers[key]

        result = MultiPoly._raw({}, target)
        for e, c in self.terms.items():
            mono = [0] * len(target)
            for j, i in enumerate(pos_keep):
                mono[j] = e[i]
            term = MultiPoly._raw({tuple(mono): c}, target)
            for i, v in sub_idx:
                if e[i]:
                    term = term * power(v, e[i])
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, Number]) -> "MultiPoly":
        return self.substitute(values)

    # -- normalisation ------------------------------------------------------------------

    def leading_term(self, key) -> tuple[tuple, Fraction]:
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def primitive(self, key=None) -> "MultiPoly":
        """Scale to coprime integer coefficients with positive leading coefficient.

        ``key`` is a monomial-order key on exponent tuples; the default is
        lex in the polynomial's variable order.
        """
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = lcm(den, c.denominator)
        g = 0
        for c in self.terms.values():
            g = gcd(g, int(c * den))
        scale = Fraction(den, g)
        _, lc = self.leading_term(key or (lambda e: e))
        if lc < 0:
            scale = -scale
        return self * scale

    def monic(self, key=None) -> "MultiPoly":
        if not self.terms:
            return self
        _, lc = self.leading_term(key or (lambda e: e))
        return self * (Fraction(1) / lc)


# -- printing -------------------------------------------------------------------------


def _print_order(p: MultiPoly):
    return sorted(p.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: MultiPoly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for i, (e, c) in enumerate(_print_order(p)):
        factors = [v if k == 1 else f"{v}^{k}" for v, k in zip(p.vars, e) if k]
        mag = abs(c)
        if factors:
            body = "*".join(factors) if mag == 1 else _format_coeff(mag) + "*" + "*".join(factors)
        else:
            body = _format_coeff(mag)
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


# -- parsing ----------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class PolyParseError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at column {pos}: {text!r}")
        self.pos = pos


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyParseError("unexpected character", text, pos)
        num, name, op = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            out.append(("num", int(num), start))
        elif name is not None:
            out.append(("name", name, start))
        else:
            out.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


def _scan_names(tokens) -> list[str]:
    seen: list[str] = []
    for kind, val, _ in tokens:
        if kind == "name" and val not in seen:
            seen.append(val)
    return seen


def parse(text: str, variables: Sequence[str] | None = None) -> MultiPoly:
    """Parse the text format; variables default to order of first appearance."""
    tokens = _tokenize(text)
    names = _scan_names(tokens)
    if variables is None:
        variables = tuple(names)
    else:
        variables = tuple(variables)
        unknown = [n for n in names if n not in variables]
        if unknown:
            raise PolyParseError(f"unknown variables {unknown}", text, 0)
    i = 0

    def peek():
        return tokens[i]

    def take(kind=None, val=None):
        nonlocal i
        tok = tokens[i]
        if kind and tok[0] != kind or val and tok[1] != val:
            raise PolyParseError(f"expected {val or kind}", text, tok[2])
        i += 1
        return tok

    def expr():
        acc = unary()
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def unary():
        tok = peek()
        if tok[0] == "op" and tok[1] in "+-":
            take()
            val = unary()
            return -val if tok[1] == "-" else val
        return term()

    def term():
        acc = power()
        while peek()[0] == "op" and peek()[1] in "*/":
            op = take()[1]
            tok = peek()
            rhs = power()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise PolyParseError("division only by nonzero constants", text, tok[2])
                acc = acc / rhs.constant_term()
        return acc

    def power():
        base = atom()
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            tok = take("num")
            return base ** tok[1]
        return base

    def atom():
        tok = peek()
        if tok[0] == "num":
            take()
            return MultiPoly.const(tok[1], variables)
        if tok[0] == "name":
            take()
            return MultiPoly.var(tok[1], variables)
        if tok[0] == "op" and tok[1] == "(":
            take()
            val = expr()
            take("op", ")")
            return val
        if tok[0] == "op" and tok[1] == "-":
            take()
            return -atom()
        raise PolyParseError("unexpected token", text, tok[2])

    result = expr()
    if peek()[0] != "end":
        raise PolyParseError("trailing input", text, peek()[2])
    return result.with_vars(variables)


def poly_ring(names: str | Sequence[str]) -> tuple[MultiPoly, ...]:
    """Generators of a polynomial ring, e.g. ``x, y = poly_ring("x y")``."""
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    names = tuple(names)
    return tuple(MultiPoly.var(n, names) for n in names)
