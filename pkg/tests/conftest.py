import numpy as np
import pytest

from msgrav import catalog


def interior_points(spec, n, seed, margin=0.05):
    """Seeded sample points strictly inside a metric's domain box."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        out.append(tuple(
            lo + (margin + (1 - 2 * margin) * rng.uniform()) * (hi - lo)
            for lo, hi in spec.domain))
    return out


@pytest.fixture(scope="session")
def all_specs():
    return {name: catalog.builtin(name) for name in catalog.list_builtins()}


@pytest.fixture(scope="session")
def vacuum_specs(all_specs):
    return {k: v for k, v in all_specs.items() if v.vacuum == "yes"}
