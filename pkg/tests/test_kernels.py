import subprocess
import sys

import numpy as np
import pytest

from panelcd import kernels
from panelcd.kernels import numpy_impl

from conftest import random_correlation


@pytest.fixture
def designs(rng):
    n, k, T = 5, 3, 20
    d = rng.standard_normal((n, k, T))
    grams = np.einsum("rat,rbt->rab", d, d)
    return d, np.linalg.inv(grams)


class TestLaneAgreement:
    def test_trace_powers(self, rng):
        corr = random_correlation(rng, 12)
        np.testing.assert_allclose(
            kernels.trace_powers(corr), numpy_impl.trace_powers(corr), rtol=1e-12
        )

    def test_offdiag_sums(self, rng):
        corr = random_correlation(rng, 12)
        np.testing.assert_allclose(
            kernels.offdiag_sums(corr), numpy_impl.offdiag_sums(corr), rtol=1e-12
        )

    def test_pair_projector_traces(self, designs):
        d, inv = designs
        active = kernels.pair_projector_traces(d, inv)
        pure = numpy_impl.pair_projector_traces(d, inv)
        for a, b in zip(active, pure):
            np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-12)


class TestOracles:
    def test_trace_powers_against_matrix_powers(self, rng):
        corr = random_correlation(rng, 8)
        tr2, tr4 = kernels.trace_powers(corr)
        assert tr2 == pytest.approx(np.trace(np.linalg.matrix_power(corr, 2)))
        assert tr4 == pytest.approx(np.trace(np.linalg.matrix_power(corr, 4)))

    def test_offdiag_sums_against_loops(self, rng):
        corr = random_correlation(rng, 8)
        s1, s2 = kernels.offdiag_sums(corr)
        n = corr.shape[0]
        b1 = sum(
            corr[i, j] for i in range(n) for j in range(n) if i != j
        )
        b2 = sum(
            corr[i, j] ** 2 for i in range(n) for j in range(n) if i != j
        )
        assert s1 == pytest.approx(b1, abs=1e-12)
        assert s2 == pytest.approx(b2, abs=1e-12)

    def test_pair_projector_traces_against_full_projectors(self, designs):
        d, inv = designs
        t2, t4 = kernels.pair_projector_traces(d, inv)
        n, k, T = d.shape
        P = [d[r].T @ inv[r] @ d[r] for r in range(n)]
        for r in range(n):
            for s in range(n):
                pp = P[r] @ P[s]
                expect_t2 = k if r == s else np.trace(pp)
                expect_t4 = k if r == s else np.trace(pp @ pp)
                assert t2[r, s] == pytest.approx(expect_t2, abs=1e-10)
                assert t4[r, s] == pytest.approx(expect_t4, abs=1e-10)

    def test_outputs_are_symmetric(self, designs):
        d, inv = designs
        t2, t4 = kernels.pair_projector_traces(d, inv)
        np.testing.assert_allclose(t2, t2.T, atol=1e-12)
        np.testing.assert_allclose(t4, t4.T, atol=1e-12)


class TestLaneSelection:
    def test_compiled_lane_is_active_by_default(self):
        # The build ships the extension; a broken build should fail loudly
        # here rather than silently running the fallback.
        assert kernels.USING_EXTENSION

    def test_env_var_forces_pure_lane(self):
        code = (
            "from panelcd import kernels; "
            "raise SystemExit(0 if not kernels.USING_EXTENSION else 1)"
        )
        proc = subprocess.run(
            [sys.executable, "-c", code],
            env={"PANELCD_PURE": "1", "PATH": "/usr/local/bin:/usr/bin:/bin"},
        )
        assert proc.returncode == 0
