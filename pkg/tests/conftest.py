import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from sftorient.fixtures import orbit_with_index

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

ROOT = Path(__file__).resolve().parent.parent
DEMO = ROOT / "data" / "demo.json"


@pytest.fixture
def demo_path():
    return DEMO


@pytest.fixture
def graded():
    """Orbits indexed by grading in n = 3, where the grading equals mu."""
    cache = {}

    def make(k, n=3):
        key = (k, n)
        if key not in cache:
            cache[key] = orbit_with_index(f"g{k}n{n}", k - n + 3, n)
        return cache[key]

    return make


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.SUMMARY:
        terminalreporter.section("acceptance criteria")
        for line in module.SUMMARY:
            terminalreporter.write_line(line)
