import json
from pathlib import Path

import pytest

from ellperiods.pipeline import exact_stage, reference_configuration, run_pipeline

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def reference():
    return reference_configuration()


@pytest.fixture(scope="session")
def reference_exact(reference):
    return exact_stage(reference)


@pytest.fixture(scope="session")
def result256(reference_exact):
    return run_pipeline(precision_bits=256, exact=reference_exact)


@pytest.fixture(scope="session")
def result128(reference_exact):
    return run_pipeline(precision_bits=128, exact=reference_exact)


@pytest.fixture(scope="session")
def oracle():
    return json.loads((FIXTURES / "reference_oracle.json").read_text())


@pytest.fixture(scope="session")
def richardson_report(reference):
    """PDE residuals at 2^-20 and 2^-21 on the reference configuration (about two minutes)."""
    from ellperiods.pde import richardson
    return richardson(reference)


ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """Record and print a PASS/FAIL line for an acceptance criterion, then assert it."""
    def record(n, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
