from dataclasses import dataclass, field
from typing import Optional, Sequence

from sympy.polys.orderings import grevlex, lex

KINDS = ("lex", "grevlex", "block")


@dataclass(frozen=True)
class TermOrder:
    """Monomial order usable as a sympy ring order.

    `permutation` lists variable positions from most to least significant.
    A block order compares the `first_block` variables by grevlex and breaks
    ties by grevlex on the remaining variables, so the first block is eliminated.
    """

    kind: str = "grevlex"
    permutation: Optional[tuple] = None
    first_block: tuple = ()
    ngens: int = 0
    _rest: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown term order kind {self.kind!r}")
        if self.permutation is not None:
            object.__setattr__(self, "permutation", tuple(self.permutation))
            if sorted(self.permutation) != list(range(len(self.permutation))):
                raise ValueError("permutation must list every variable position once")
        if self.kind == "block":
            block = tuple(self.first_block)
            if not block or self.ngens <= 0:
                raise ValueError("block order needs a first block and ngens")
            object.__setattr__(self, "first_block", block)
            object.__setattr__(
                self, "_rest", tuple(i for i in range(self.ngens) if i not in set(block))
            )

    def __call__(self, monom):
        if self.kind == "block":
            first = tuple(monom[i] for i in self.first_block)
            rest = tuple(monom[i] for i in self._rest)
            return (grevlex(first), grevlex(rest))
        if self.permutation is not None:
            monom = tuple(monom[i] for i in self.permutation)
        if self.kind == "lex":
            return lex(monom)
        return grevlex(monom)

    @property
    def is_global(self) -> bool:
        return True

    def sympy_order(self):
        """Built-in sympy order when one is equivalent, else this object."""
        if self.kind == "block" or self.permutation is not None:
            return self
        return lex if self.kind == "lex" else grevlex

    def describe(self) -> str:
        if self.kind == "block":
            return f"block(first={list(self.first_block)}, grevlex/grevlex)"
        if self.permutation is not None:
            return f"{self.kind}(perm={list(self.permutation)})"
        return self.kind


GREVLEX = TermOrder("grevlex")
LEX = TermOrder("lex")


def elimination_order(first_block: Sequence[int], ngens: int) -> TermOrder:
    return TermOrder("block", first_block=tuple(first_block), ngens=ngens)


def permuted_grevlex(permutation: Sequence[int]) -> TermOrder:
    return TermOrder("grevlex", permutation=tuple(permutation))
