import json
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from algebra.polynomial import Polynomial, VariableRegistry, substitute, t_name
from grassmann.index_set import IndexSet, poset_compare, subsets
from utilities.errors import ShapeError, UnassignedVariableError

logger = logging.getLogger(__name__)


def t_registry(n: int, k: Optional[int] = None, x_count: int = 0) -> VariableRegistry:
    """Registry with one T-variable per k-subset of [n+2] (k defaults to n)."""
    if n < 2:
        raise ShapeError("n must be at least 2")
    size = n if k is None else k
    return VariableRegistry(x_count=x_count, t_index_sets=tuple(subsets(n + 2, size)))


def plucker_relations(n: int, registry: Optional[VariableRegistry] = None) -> list:
    """Three-term quadrics generating the ideal of Gr(n, n+2).

    One relation per (n-2)-subset I of [n+2]; a<b<c<d is the complement of I.
    """
    registry = registry or t_registry(n)
    ambient = n + 2
    relations = []
    for base in subsets(ambient, n - 2):
        a, b, c, d = base.complement().elements
        T = lambda p, q: registry.T(base.union((p, q)))
        relations.append(T(a, b) * T(c, d) - T(a, c) * T(b, d) + T(a, d) * T(b, c))
    logger.debug("[plucker] generated %d quadrics for n=%d", len(relations), n)
    return relations


def term_ranks(p: Polynomial, registry: VariableRegistry) -> set:
    """Total rank of every term: the sum of all T indices with multiplicity."""
    weights = [0] * registry.ngens
    for pos, key in zip(registry.t_positions, registry.t_index_sets):
        weights[pos] = sum(key)
    return {sum(w * e for w, e in zip(weights, monom)) for monom in p.keys()}


@dataclass(frozen=True)
class PosetIso:
    """Duality T_i -> T_{sigma(i^c)} from n-subsets to 2-subsets of [n+2]."""

    n: int
    forward: dict = field(init=False, repr=False, compare=False)
    inverse: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ShapeError("n must be at least 2")
        forward = {a: a.dual() for a in subsets(self.n + 2, self.n)}
        inverse = {b: a for a, b in forward.items()}
        if len(inverse) != len(forward):
            raise ValueError("duality map is not injective")
        object.__setattr__(self, "forward", forward)
        object.__setattr__(self, "inverse", inverse)

    @property
    def source(self) -> VariableRegistry:
        return t_registry(self.n)

    @property
    def target(self) -> VariableRegistry:
        return t_registry(self.n, 2)

    def is_involutive(self) -> bool:
        return all(self.forward[self.inverse[b]] == b for b in self.inverse) and all(
            self.inverse[self.forward[a]] == a for a in self.forward
        )


def phi_map(iso: PosetIso, p: Polynomial) -> Polynomial:
    """Relabel T-variables of Gr(n, n+2) as T-variables of Gr(2, n+2)."""
    target = iso.target
    names = {t_name(a): target.T(b) for a, b in iso.forward.items()}
    try:
        return substitute(p, names, target=target, identity_fallback=False)
    except UnassignedVariableError as exc:
        raise UnassignedVariableError(exc.name, "the duality map") from exc


def phi_inverse(iso: PosetIso, p: Polynomial) -> Polynomial:
    source = iso.source
    names = {t_name(b): source.T(a) for b, a in iso.inverse.items()}
    return substitute(p, names, target=source, identity_fallback=False)


def hasse_edges(ambient: int, size: int) -> list:
    """Covering pairs of the componentwise order on size-subsets of [ambient]."""
    nodes = subsets(ambient, size)
    members = set(nodes)
    edges = []
    for a in nodes:
        for pos, value in enumerate(a.elements):
            bumped = a.elements[:pos] + (value + 1,) + a.elements[pos + 1 :]
            if value + 1 > ambient or value + 1 in a.elements:
                continue
            b = IndexSet(ambient, bumped)
            if b in members:
                edges.append((a, b))
    return sorted(edges)


def hasse_document(n: int, fmt: str = "dot") -> str:
    """Hasse diagram of n-subsets of [n+2] as DOT or JSON text."""
    edges = hasse_edges(n + 2, n)
    nodes = subsets(n + 2, n)
    label = lambda s: "".join(str(i) for i in s.elements)
    if fmt == "json":
        return json.dumps(
            {
                "nodes": [label(s) for s in nodes],
                "edges": [[label(a), label(b)] for a, b in edges],
            },
            indent=2,
        )
    if fmt != "dot":
        raise ValueError(f"unknown poset format {fmt!r}")
    lines = [f"digraph poset_n{n} {{", "  rankdir=BT;"]
    for node in nodes:
        lines.append(f'  "{label(node)}";')
    for a, b in edges:
        lines.append(f'  "{label(a)}" -> "{label(b)}";')
    lines.append("}")
    return "\n".join(lines)


def order_preserved(iso: PosetIso) -> bool:
    """a <= b exactly when their duals satisfy dual(a) <= dual(b)."""
    keys = list(iso.forward)
    for a, b in combinations(keys, 2):
        left = poset_compare(a, b)
        right = poset_compare(iso.forward[a], iso.forward[b])
        if left != right:
            return False
    return True
