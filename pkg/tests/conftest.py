import math

import numpy as np
import pytest

from jacobiheat import JacobiParams

ORDERS = [(0.5, -0.5), (0.0, 0.0), (2.0, 1.0)]


@pytest.fixture(params=ORDERS, ids=lambda ab: f"a{ab[0]}_b{ab[1]}")
def params(request):
    return JacobiParams(*request.param)


@pytest.fixture
def closed_form():
    return JacobiParams(0.5, -0.5)


def closed_form_kernel(t, x):
    """Heat kernel of the order (1/2, -1/2)."""
    x = np.asarray(x, dtype=float)
    return x * np.exp(-t - x * x / (4 * t)) / (8 * math.sqrt(math.pi) * t ** 1.5 * np.sinh(x))


def closed_form_log_kernel(t, x):
    return (math.log(x) - t - x * x / (4 * t) - math.log(8 * math.sqrt(math.pi) * t ** 1.5)
            - x - math.log(-math.expm1(-2 * x) / 2))


def l2_norm(params, f):
    from jacobiheat import mu_integral
    return math.sqrt(mu_integral(params, f.with_values(np.abs(f.values) ** 2)).real)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
