import numpy as np
import pytest
from sympy.polys.domains import QQ


def random_polynomial(rng, registry, terms: int = 4, max_exp: int = 2, coeff_bound: int = 4):
    data: dict = {}
    for _ in range(terms):
        monom = tuple(int(e) for e in rng.integers(0, max_exp + 1, registry.ngens))
        data[monom] = data.get(monom, QQ.zero) + QQ(int(rng.integers(-coeff_bound, coeff_bound + 1)))
    return registry.ring.from_dict(data)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
