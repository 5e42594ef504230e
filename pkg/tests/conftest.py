import numpy as np
import pytest

from badk import FlowSpec, GroupElement, parse_field


@pytest.fixture(scope="session")
def sqrt2():
    return parse_field([-2, 0], label="Q(sqrt2)")


@pytest.fixture(scope="session")
def cubic():
    return parse_field([-1, -3, 0], units=[[0, 1, 0], [1, 1, 0]], label="cubic")


@pytest.fixture(scope="session")
def gauss():
    return parse_field([1, 0], label="Q(i)")


@pytest.fixture(scope="session")
def rationals():
    return parse_field([0], label="Q")


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels(sqrt2):
    """Compile/caches the JIT kernels once so test timings measure the work."""
    from badk import systole
    systole(sqrt2, GroupElement.identity(sqrt2), 2)
    from badk import bad_constant_estimate
    bad_constant_estimate(sqrt2, [0.3, 0.7], 3.0)


def random_sl2_floats(field, rng, op_norm_cap=4.0):
    """Per-place real 2x2 matrices with det 1 and bounded operator norm."""
    mats = []
    for _ in field.places:
        while True:
            a = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
            b = rng.uniform(-1.5, 1.5)
            c = rng.uniform(-1.5, 1.5)
            d = (1.0 + b * c) / a
            m = np.array([[a, b], [c, d]])
            if np.abs(m).sum(axis=1).max() <= op_norm_cap:
                mats.append(m)
                break
    return mats


@pytest.fixture
def sl2_sampler():
    return random_sl2_floats
