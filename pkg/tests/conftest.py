import numpy as np
import pytest
from hypothesis import settings

from ballgreen.ballgeom import DimensionContext, QuadratureSpec

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")


@pytest.fixture(params=[3, 4, 5], ids=lambda n: f"n{n}")
def ctx(request):
    return DimensionContext(request.param)


@pytest.fixture
def ctx3():
    return DimensionContext(3)


@pytest.fixture
def spec():
    return QuadratureSpec("reduced-polar", 24, 24, 20_000, 0, 0.1)


@pytest.fixture
def full_spec():
    # full-sphere rule for non-radial fields
    return QuadratureSpec("singularity-split", 20, 16, 20_000, 0, 0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[k])
