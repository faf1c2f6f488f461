import numpy as np
import pytest

from sattrack import MountConfig, PassTrajectory, generate_synthetic_pass


def constant_rate_pass(az_rate, el_rate=0.0, duration=60.0, az0=10.0, el0=45.0, step=1.0):
    t = np.arange(0.0, duration + step / 2, step)
    return PassTrajectory.from_arrays(t, az0 + az_rate * t, el0 + el_rate * t,
                                      name=f"const_{az_rate:g}_{el_rate:g}")


@pytest.fixture
def cfg():
    return MountConfig()


@pytest.fixture(scope="session")
def iss_like_passes():
    """Synthetic 420 km passes at the three peak elevations used throughout."""
    return {pk: generate_synthetic_pass(pk, altitude=420.0, sample_step=1.0, min_el=10.0)
            for pk in (47, 70, 83)}


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance")
        for line in lines:
            terminalreporter.write_line(line)
