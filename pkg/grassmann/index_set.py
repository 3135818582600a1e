from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable

from utilities.errors import ShapeError


@dataclass(frozen=True, order=True)
class IndexSet:
    """Sorted subset of [ambient]; keys every minor and every T-variable."""

    ambient: int
    elements: tuple

    def __post_init__(self):
        elements = tuple(sorted(int(i) for i in self.elements))
        if len(set(elements)) != len(elements):
            raise ShapeError(f"index set {elements} has repeated entries")
        if elements and (elements[0] < 1 or elements[-1] > self.ambient):
            raise ShapeError(f"index set {elements} is not inside [{self.ambient}]")
        object.__setattr__(self, "elements", elements)

    @classmethod
    def of(cls, ambient: int, elements: Iterable[int]) -> "IndexSet":
        return cls(ambient, tuple(elements))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, item):
        return item in self.elements

    def __str__(self):
        return "[" + ",".join(str(i) for i in self.elements) + "]"

    @property
    def label(self) -> str:
        return "T" + str(self)

    def complement(self) -> "IndexSet":
        present = set(self.elements)
        return IndexSet(self.ambient, tuple(i for i in range(1, self.ambient + 1) if i not in present))

    def reversal(self) -> "IndexSet":
        return IndexSet(self.ambient, tuple(self.ambient + 1 - i for i in self.elements))

    def dual(self) -> "IndexSet":
        """Reversal of the complement, the index map behind the duality isomorphism."""
        return self.complement().reversal()

    def eta(self, k: int) -> int:
        """Number of entries strictly to the left of k."""
        return sum(1 for s in self.elements if s < k)

    def union(self, other: Iterable[int]) -> "IndexSet":
        return IndexSet(self.ambient, tuple(set(self.elements) | set(other)))

    def without(self, other: Iterable[int]) -> "IndexSet":
        removed = set(other)
        return IndexSet(self.ambient, tuple(i for i in self.elements if i not in removed))

    def total(self) -> int:
        return sum(self.elements)


def subsets(ambient: int, size: int) -> list:
    return [IndexSet(ambient, c) for c in combinations(range(1, ambient + 1), size)]


def sort_sign(labels) -> int:
    """Sign of the permutation sorting `labels`; 0 when a label repeats."""
    labels = list(labels)
    if len(set(labels)) != len(labels):
        return 0
    inversions = sum(
        1 for i in range(len(labels)) for j in range(i + 1, len(labels)) if labels[i] > labels[j]
    )
    return -1 if inversions % 2 else 1


class PosetRelation(str, Enum):
    LESS_EQUAL = "less-equal"
    GREATER_EQUAL = "greater-equal"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def poset_compare(a: IndexSet, b: IndexSet) -> PosetRelation:
    """Componentwise comparison of equal-size index sets."""
    if len(a) != len(b) or a.ambient != b.ambient:
        raise ShapeError(f"cannot compare {a} and {b}: cardinality or ambient differs")
    if a.elements == b.elements:
        return PosetRelation.EQUAL
    if all(i <= j for i, j in zip(a.elements, b.elements)):
        return PosetRelation.LESS_EQUAL
    if all(i >= j for i, j in zip(a.elements, b.elements)):
        return PosetRelation.GREATER_EQUAL
    return PosetRelation.INCOMPARABLE
