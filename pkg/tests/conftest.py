import math

import pytest
from hypothesis import HealthCheck, settings

from dilastab import kernels as K
from dilastab import levy_models as lm

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


@pytest.fixture
def two_point():
    return lm.LevyModel.two_point(a=1.0, intensity=1.0)


@pytest.fixture
def laplace():
    return lm.LevyModel.laplace(b=1.0, intensity=1.0)


def all_catalog_kernels():
    return [
        K.fractional_ma(0.7),
        K.sub_fractional(0.75),
        K.log_fractional(),
        K.sghir(1.0),
        K.well_balanced(0.6, 1.5),
    ]


def fbm_cov(H, s, t):
    return 0.5 * (abs(s) ** (2 * H) + abs(t) ** (2 * H) - abs(t - s) ** (2 * H))


def subfbm_cov(H, s, t):
    return s ** (2 * H) + t ** (2 * H) - 0.5 * ((s + t) ** (2 * H) + abs(t - s) ** (2 * H))


PI = math.pi
