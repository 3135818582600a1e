import logging
from dataclasses import dataclass
from typing import Optional

from algebra.linalg import certified_rank
from algebra.matrix import PolyMatrix, determinant
from algebra.polynomial import VariableRegistry
from grassmann.index_set import IndexSet
from groebner.buchberger import Ideal
from hankel.sections import HankelSpec, MinorTable, build_section
from utilities.errors import ShapeError

logger = logging.getLogger(__name__)


def generic_hankel_det(n: int):
    """det of the generic (n+1) x (n+1) Hankel matrix in x1..x_{2n+1}."""
    spec = HankelSpec(n, 0, "square")
    return determinant(build_section(spec)), spec.registry()


def gradient_table(n: int, r: int) -> MinorTable:
    """Nonzero specialized partials dF/dx_i keyed by the singleton {i}."""
    if not 0 <= r <= n - 1:
        raise ShapeError(f"r must lie in 0..{n - 1}, got {r}")
    F, source = generic_hankel_det(n)
    target = VariableRegistry(x_count=2 * n + 1 - r)
    entries = {}
    for i in range(1, 2 * n + 2):
        partial = F.diff(source.x(i))
        image = _specialize(partial, target)
        if image:
            entries[IndexSet(2 * n + 1, (i,))] = image
    logger.debug("[syzygy] J[%d] for n=%d keeps %d partials", r, n, len(entries))
    return MinorTable(target, entries, 0, None, label=f"J[{r}] n={n}")


def _specialize(p, target: VariableRegistry):
    """Set the variables missing from `target` to zero."""
    keep = {}
    names = [str(s) for s in p.ring.symbols]
    for monom, c in p.items():
        if any(e and not target.has(name) for name, e in zip(names, monom)):
            continue
        keep[monom] = c
    return target.convert(p.ring.from_dict(keep))


def gradient_section(n: int, r: int) -> Ideal:
    table = gradient_table(n, r)
    return Ideal(table.registry, tuple(table.values()), table.label)


def euler_identity(n: int) -> bool:
    """sum x_i dF/dx_i equals (n+1) F."""
    F, registry = generic_hankel_det(n)
    total = registry.zero
    for i in range(1, 2 * n + 2):
        x = registry.x(i)
        total = total + x * F.diff(x)
    return total == F * (n + 1)


def linsyz_matrix(n: int) -> PolyMatrix:
    """(n+2) x (n+1) matrix of linear syzygies on the gradient of det calH[n-1].

    Column 1 has entries (n+1-i) x_i; column j >= 2 has (2n+5-2j-i) x_{i+j-1},
    zero once the index passes n+2.
    """
    if n < 2:
        raise ShapeError("n must be at least 2")
    registry = VariableRegistry(x_count=n + 2)

    def entry(i, j):
        if j == 1:
            return registry.x(i) * (n + 1 - i)
        k = i + j - 1
        if k > n + 2:
            return registry.zero
        return registry.x(k) * (2 * n + 5 - 2 * j - i)

    return PolyMatrix.from_function(registry, n + 2, n + 1, entry)


@dataclass(frozen=True)
class LinSyzCheck:
    n: int
    product_zero: bool
    rank: int
    lower_minor_is_power: bool
    certificate: Optional[dict] = None

    @property
    def holds(self) -> bool:
        return self.product_zero and self.rank == self.n + 1 and self.lower_minor_is_power

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "product_zero": self.product_zero,
            "rank": self.rank,
            "lower_minor_is_power": self.lower_minor_is_power,
            "certificate": self.certificate,
        }


def verify_linsyz(n: int, seed: int = 42) -> LinSyzCheck:
    matrix = linsyz_matrix(n)
    registry = matrix.registry
    spec = HankelSpec(n, n - 1, "square")
    f = determinant(build_section(spec, registry))
    gradient = [f.diff(registry.x(i)) for i in range(1, n + 3)]
    product_zero = True
    for j in range(1, n + 2):
        total = registry.zero
        for i in range(1, n + 3):
            total = total + gradient[i - 1] * matrix.entry(i, j)
        if total:
            product_zero = False
    result = certified_rank(matrix, seed=seed, certify=True)
    lower = determinant(matrix.submatrix(range(2, n + 3), range(1, n + 2)))
    power = registry.x(n + 2) ** (n + 1)
    lower_is_power = len(lower) == 1 and bool(lower.coeff(power))
    logger.info("[syzygy] LinSyz n=%d product_zero=%s rank=%d", n, product_zero, result.rank)
    certificate = result.certificate.to_dict() if result.certificate else None
    return LinSyzCheck(n, product_zero, result.rank, lower_is_power, certificate)
