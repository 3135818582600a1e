"""Variable registries, the polynomial text grammar and basic ring operations.

Polynomials are sympy `PolyElement` values over `QQ`. A `VariableRegistry`
owns the sympy ring and fixes the variable layout: ground variables
``x1..xN`` first, then one ``T[...]`` variable per index set, then any extra
named variables (the Rees parameter ``t``).
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyElement, PolyRing

from utilities.errors import ParseError, RegistryMismatchError, UnassignedVariableError

logger = logging.getLogger(__name__)

Polynomial = PolyElement
Scalar = Union[int, Fraction, "QQ.dtype"]

_FACTOR = re.compile(r"(x\d+|T\[\d+(?:,\d+)*\]|[A-Za-z_]\w*)(?:\^(\d+))?")
_COEF = re.compile(r"(\d+)(?:/(\d+))?")
_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def index_key(index_set) -> tuple:
    """Tuple of ints for an IndexSet, a sequence, or a single int."""
    if isinstance(index_set, int):
        return (index_set,)
    return tuple(int(i) for i in getattr(index_set, "elements", index_set))


def t_name(index_set) -> str:
    return "T[" + ",".join(str(i) for i in index_key(index_set)) + "]"


def to_scalar(value) -> "QQ.dtype":
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    return QQ.convert(value)


@dataclass(frozen=True)
class VariableRegistry:
    x_count: int
    t_index_sets: tuple = ()
    extra: tuple = ()
    ring: PolyRing = field(init=False, repr=False, compare=False)
    _positions: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        keys = tuple(index_key(k) for k in self.t_index_sets)
        for key in keys:
            if list(key) != sorted(set(key)):
                raise ValueError(f"T-variable index set {key} must be strictly increasing")
        if len(set(keys)) != len(keys):
            raise ValueError("T-variable index sets must be pairwise distinct")
        object.__setattr__(self, "t_index_sets", keys)
        object.__setattr__(self, "extra", tuple(self.extra))
        names = (
            tuple(f"x{i}" for i in range(1, self.x_count + 1))
            + tuple(t_name(k) for k in keys)
            + self.extra
        )
        if not names:
            raise ValueError("a registry needs at least one variable")
        object.__setattr__(self, "ring", PolyRing(tuple(Symbol(n) for n in names), QQ, grevlex))
        object.__setattr__(self, "_positions", {name: i for i, name in enumerate(names)})

    @property
    def names(self) -> tuple:
        return tuple(str(s) for s in self.ring.symbols)

    @property
    def ngens(self) -> int:
        return self.ring.ngens

    @property
    def zero(self) -> Polynomial:
        return self.ring.zero

    @property
    def one(self) -> Polynomial:
        return self.ring.one

    @property
    def x_positions(self) -> tuple:
        return tuple(range(self.x_count))

    @property
    def t_positions(self) -> tuple:
        return tuple(range(self.x_count, self.x_count + len(self.t_index_sets)))

    @property
    def extra_positions(self) -> tuple:
        start = self.x_count + len(self.t_index_sets)
        return tuple(range(start, start + len(self.extra)))

    def has(self, name: str) -> bool:
        return name in self._positions

    def position(self, name: str) -> int:
        try:
            return self._positions[name]
        except KeyError:
            raise UnassignedVariableError(name, "registry") from None

    def gen(self, name: str) -> Polynomial:
        return self.ring.gens[self.position(name)]

    def x(self, i: int) -> Polynomial:
        return self.gen(f"x{i}")

    def T(self, index_set) -> Polynomial:
        return self.gen(t_name(index_set))

    def constant(self, value) -> Polynomial:
        return self.ring.ground_new(to_scalar(value))

    def owns(self, p: Polynomial) -> bool:
        return isinstance(p, PolyElement) and p.ring == self.ring

    def convert(self, p: Polynomial) -> Polynomial:
        """Move `p` into this registry, matching variables by name."""
        if p.ring == self.ring:
            return p
        source = [str(s) for s in p.ring.symbols]
        targets = [self._positions.get(name) for name in source]
        terms = {}
        for monom, coeff in p.items():
            expv = [0] * self.ngens
            for pos, e in enumerate(monom):
                if not e:
                    continue
                if targets[pos] is None:
                    raise RegistryMismatchError(
                        f"variable {source[pos]} is not part of the target registry"
                    )
                expv[targets[pos]] = e
            terms[tuple(expv)] = coeff
        return self.ring.from_dict(terms)

    def parse(self, text: str) -> Polynomial:
        return parse_polynomial(text, self)


def _format_scalar(value) -> str:
    q = to_scalar(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _format_monomial(names: Sequence[str], monom: tuple) -> str:
    factors = []
    for name, e in zip(names, monom):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


def sorted_terms(p: Polynomial) -> list:
    """Terms in canonical display order (grevlex in registry variable order)."""
    return sorted(p.items(), key=lambda term: grevlex(term[0]), reverse=True)


def format_polynomial(p: Polynomial) -> str:
    if not p:
        return "0"
    names = [str(s) for s in p.ring.symbols]
    pieces = []
    for monom, coeff in sorted_terms(p):
        negative = coeff < 0
        magnitude = -coeff if negative else coeff
        body = _format_monomial(names, monom)
        if not body:
            body = _format_scalar(magnitude)
        elif magnitude != 1:
            body = f"{_format_scalar(magnitude)}*{body}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


def parse_polynomial(text: str, registry: VariableRegistry) -> Polynomial:
    """Parse the plain-text grammar, e.g. ``-3/2*x3^2*T[2,4,5] + T[1,2]``."""
    source = text.strip()
    if not source:
        raise ParseError("empty polynomial text", text, 0)
    ring = registry.ring
    result = ring.zero
    pos = 0
    first = True
    while pos < len(source):
        match = _TERM.match(source, pos)
        if match is None:
            raise ParseError("expected a term", text, pos)
        sign, body = match.group(1), match.group(2).strip()
        if sign is None and not first:
            raise ParseError("missing '+' or '-' between terms", text, pos)
        term = ring.one
        for raw in body.split("*"):
            factor = raw.strip()
            coef = _COEF.fullmatch(factor)
            if coef:
                den = int(coef.group(2)) if coef.group(2) else 1
                if den == 0:
                    raise ParseError("zero denominator", text, pos)
                term = term * QQ(int(coef.group(1)), den)
                continue
            var = _FACTOR.fullmatch(factor)
            if var is None:
                raise ParseError(f"bad factor {factor!r}", text, pos)
            name = var.group(1)
            if not registry.has(name):
                raise ParseError(f"unknown variable {name}", text, pos)
            exponent = int(var.group(2)) if var.group(2) else 1
            term = term * registry.gen(name) ** exponent
        result = result - term if sign == "-" else result + term
        pos = match.end()
        first = False
    return result


def poly_arith(a: Polynomial, b, op: str) -> Polynomial:
    """Exact arithmetic on polynomials of one registry.

    Args:
        a: left operand.
        b: right operand; a scalar for ``scale``, ignored for ``neg``.
        op: one of ``add``, ``sub``, ``mul``, ``neg``, ``scale``.
    """
    if op == "neg":
        return -a
    if op == "scale":
        return a * to_scalar(b)
    if not isinstance(b, PolyElement) or a.ring != b.ring:
        raise RegistryMismatchError("operands live in different variable registries")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown polynomial operation {op!r}")


def _variable_name(key, ring: PolyRing) -> str:
    if isinstance(key, str):
        return key
    if isinstance(key, PolyElement):
        return str(ring.symbols[key.ring.gens.index(key)]) if key in key.ring.gens else str(key)
    return t_name(key)


def substitute(
    p: Polynomial,
    assignment: Mapping,
    target: Optional[VariableRegistry] = None,
    identity_fallback: bool = True,
) -> Polynomial:
    """Apply a ring map given on variables.

    Keys of `assignment` are variable names, generators of `p`'s ring or
    index sets naming T-variables; values are polynomials of the target
    registry or scalars. Variables without an assignment map to the variable
    of the same name in the target when `identity_fallback` is set.
    """
    source_ring = p.ring
    images = {}
    for key, value in assignment.items():
        images[_variable_name(key, source_ring)] = value
    if target is not None:
        target_ring = target.ring
    else:
        rings = [v.ring for v in images.values() if isinstance(v, PolyElement)]
        target_ring = rings[0] if rings else source_ring
    target_names = {str(s): i for i, s in enumerate(target_ring.symbols)}

    names = [str(s) for s in source_ring.symbols]
    used = set()
    for monom in p.keys():
        used.update(i for i, e in enumerate(monom) if e)
    resolved = {}
    for i in used:
        name = names[i]
        if name in images:
            value = images[name]
            if isinstance(value, PolyElement):
                if value.ring != target_ring:
                    raise RegistryMismatchError(f"image of {name} lives in a different registry")
                resolved[i] = value
            else:
                resolved[i] = target_ring.ground_new(to_scalar(value))
        elif identity_fallback and name in target_names:
            resolved[i] = target_ring.gens[target_names[name]]
        else:
            raise UnassignedVariableError(name)

    powers = {}

    def power(i, e):
        key = (i, e)
        if key not in powers:
            powers[key] = resolved[i] ** e
        return powers[key]

    result = target_ring.zero
    for monom, coeff in p.items():
        term = target_ring.ground_new(coeff)
        for i, e in enumerate(monom):
            if e:
                term = term * power(i, e)
                if not term:
                    break
        if term:
            result += term
    return result


def evaluate(p: Polynomial, point: Sequence) -> "QQ.dtype":
    """Value of `p` at a rational point given in ring variable order."""
    values = [to_scalar(v) for v in point]
    total = QQ.zero
    for monom, coeff in p.items():
        term = coeff
        for v, e in zip(values, monom):
            if e:
                term *= v**e
        total += term
    return total


def total_degree(p: Polynomial, positions: Optional[Iterable[int]] = None) -> int:
    if not p:
        return -1
    if positions is None:
        return max(sum(m) for m in p.keys())
    idx = tuple(positions)
    return max(sum(m[i] for i in idx) for m in p.keys())


def is_homogeneous(p: Polynomial, positions: Optional[Iterable[int]] = None) -> bool:
    if not p:
        return True
    idx = tuple(positions) if positions is not None else None
    degrees = {sum(m) if idx is None else sum(m[i] for i in idx) for m in p.keys()}
    return len(degrees) == 1


def variables_of(p: Polynomial) -> set:
    names = [str(s) for s in p.ring.symbols]
    used = set()
    for monom in p.keys():
        used.update(names[i] for i, e in enumerate(monom) if e)
    return used
