import numpy as np
import pytest

from panelcd.correlation import CorrSummary, correlation_summary

# One "ACCEPTANCE <id> PASS/FAIL" line per acceptance criterion, filled in
# by tests/test_acceptance.py and echoed after the run summary so output
# capture does not swallow them.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


def summary_from_corr(corr: np.ndarray, T: int) -> CorrSummary:
    """CorrSummary for a given correlation matrix (unit variances)."""
    return correlation_summary(np.asarray(corr, dtype=float), T)


def random_correlation(rng: np.random.Generator, n: int, T: int | None = None):
    """Well-conditioned random correlation matrix from T >= n+2 draws."""
    T = T or (2 * n + 10)
    resid = rng.standard_normal((n, T))
    return np.corrcoef(resid)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
