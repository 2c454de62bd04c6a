import numpy as np
import pytest

from slicecauchy import build_clifford, build_octonions, build_quaternions, build_sedenions, phi_J, sample_sphere


@pytest.fixture(scope="session")
def H():
    return build_quaternions()


@pytest.fixture(scope="session")
def O():
    return build_octonions()


@pytest.fixture(scope="session")
def S():
    return build_sedenions()


@pytest.fixture(scope="session")
def cl20():
    return build_clifford(2, 0)


def cone_points(algebra, count, radius=1.5, seed=0):
    """Random ``Re z + Im z I`` with ``|z| <= radius``, ``Im z > 0`` and random units."""
    rng = np.random.default_rng(seed)
    units = sample_sphere(algebra, seed=seed + 1000, count=count)
    rho = radius * np.sqrt(rng.uniform(0.01, 1, count))
    z = rho * np.exp(1j * rng.uniform(0.05, np.pi - 0.05, count))
    return [phi_J(zz, u) for zz, u in zip(z, units)]


def close(a, b, tol=1e-12):
    return float(np.linalg.norm(np.asarray(a.coeffs) - np.asarray(b.coeffs))) <= tol


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
