import os
import sys
import random

import pytest
from hypothesis import HealthCheck, settings

from cremona.basegeom import analyze_base
from cremona.parsing import load_fixture, parse_poly

settings.register_profile(
    "repo", max_examples=60, deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

# fixtures whose F-points are all ordinary (the full pipeline applies)
ORDINARY = ["ex1_phi3_generic", "ex2_star", "ex3", "ex4", "std_quadratic", "generic_quadratic", "identity"]


def P(text, **params):
    return parse_poly(text, params)


def fixture_map(name):
    return load_fixture(name).birat_map()


def fixture_base(name):
    mf = load_fixture(name)
    return analyze_base(mf.birat_map(), mf.point_hints(), mf.inverse_point_hints(), mf.curve_hints())


def random_frames(seed, lo=-5, hi=5):
    """Two random nonsingular integer 3x3 matrices."""
    rng = random.Random(seed)

    def det(a):
        return (
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        )

    out = []
    while len(out) < 2:
        a = [[rng.randint(lo, hi) for _ in range(3)] for _ in range(3)]
        if det(a):
            out.append(a)
    return out


@pytest.fixture(scope="session")
def bases():
    return {name: fixture_base(name) for name in ORDINARY}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in mod.CRITERIA:
        if label in mod.RESULTS:
            terminalreporter.write_line(mod.format_line(label, *mod.RESULTS[label]))
