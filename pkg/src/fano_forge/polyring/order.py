"""Monomial orders.

An order is built from variable *names* and compiled against a concrete
variable tuple into a key function on exponent vectors; larger key means
larger monomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence


@dataclass(frozen=True)
class MonomialOrder:
    kind: str  # "lex" | "degrevlex" | "block"
    ranking: tuple[str, ...] = ()
    blocks: tuple = ()  # tuple of MonomialOrder, for kind == "block"

    @classmethod
    def lex(cls, ranking: Sequence[str]) -> "MonomialOrder":
        return cls("lex", tuple(ranking))

    @classmethod
    def degrevlex(cls, ranking: Sequence[str]) -> "MonomialOrder":
        return cls("degrevlex", tuple(ranking))

    @classmethod
    def block(cls, *blocks: "MonomialOrder") -> "MonomialOrder":
        """Product order: compare on the first block, break ties on the next."""
        ranking = tuple(v for b in blocks for v in b.ranking)
        return cls("block", ranking, tuple(blocks))

    @classmethod
    def elimination(cls, drop: Sequence[str], keep: Sequence[str], inner: str = "degrevlex"):
        """Fiber block lex over a base block in ``inner`` order."""
        base = cls.degrevlex(keep) if inner == "degrevlex" else cls.lex(keep)
        return cls.block(cls.lex(drop), base)

    def key_for(self, variables: Sequence[str]) -> Callable[[tuple], tuple]:
        pos = {v: i for i, v in enumerate(variables)}
        missing = [v for v in variables if v not in self.ranking]
        if missing:
            raise ValueError(f"monomial order does not rank variables {missing}")
        if self.kind == "lex":
            idx = tuple(pos[v] for v in self.ranking if v in pos)
            return lambda e: tuple(e[i] for i in idx)
        if self.kind == "degrevlex":
            idx = tuple(pos[v] for v in self.ranking if v in pos)
            rev = idx[::-1]
            return lambda e: (sum(e[i] for i in idx), tuple(-e[i] for i in rev))
        if self.kind == "block":
            subs = []
            for b in self.blocks:
                names = [v for v in b.ranking if v in pos]
                sub_idx = tuple(pos[v] for v in names)
                inner = b.key_for(names)
                subs.append((sub_idx, inner))
            return lambda e: tuple(inner(tuple(e[i] for i in ix)) for ix, inner in subs)
        raise ValueError(f"unknown monomial order kind {self.kind!r}")

    def describe(self) -> str:
        if self.kind == "block":
            return "block(" + ", ".join(b.describe() for b in self.blocks) + ")"
        return f"{self.kind}({' > '.join(self.ranking)})"
