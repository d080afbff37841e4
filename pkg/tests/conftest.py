import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qnull.constructor import build_rp2_certificate, build_wedge_commutator_certificate  # noqa: E402
from qnull.spaces import rp2_generator  # noqa: E402


@pytest.fixture(scope="session")
def rp2_cert():
    return build_rp2_certificate(rp2_generator(256))


@pytest.fixture(scope="session")
def rp2_square_cert():
    return build_rp2_certificate(rp2_generator(256, 2))


@pytest.fixture(scope="session")
def wedge_cert():
    return build_wedge_commutator_certificate(1, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when == "call" and "test_acceptance.py::test_criterion_" in rep.nodeid:
                num = int(rep.nodeid.split("test_criterion_")[1].split("_")[0])
                lines.append((num, f"criterion {num}: {'PASS' if rep.passed else 'FAIL'}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
