"""The spectral envelope function psi and its subgradient.

Ground truth: exhaustive breakpoint enumeration (conftest.psi_oracle) plus
hand-evaluated cases.

Known values (s = 2 unless noted):
- y = (3, 2, 0, 0): k = 1, value = log 6, subgradient (1/3, 1/2, 1/2, 1/2)
- y = (1, 1, 1, 1): k = 0, value = 2 log 2
- y = (4, 1, 1):    k = 1, value = log 8, subgradient (1/4, 1/2, 1/2)
- s = 1 reduces to log of the total; s = n to the log product
"""
import math

import numpy as np
import pytest

from mesp_bounds import envelope_value, psi, psi_subgradient

from conftest import breakpoint_hits_oracle, psi_oracle


class TestPsiKnownValues:
    def test_two_positive_entries_with_zero_tail(self):
        ev = psi(np.array([3.0, 2.0, 0.0, 0.0]), 2)
        assert ev.k == 1
        assert ev.value == pytest.approx(math.log(6.0), abs=1e-12)
        assert not ev.rank_deficient

    def test_uniform_vector_averages_everything(self):
        ev = psi(np.array([1.0, 1.0, 1.0, 1.0]), 2)
        assert ev.k == 0
        assert ev.value == pytest.approx(2.0 * math.log(2.0), abs=1e-12)

    def test_dominant_head_splits(self):
        ev = psi(np.array([4.0, 1.0, 1.0]), 2)
        assert ev.k == 1
        assert ev.value == pytest.approx(math.log(8.0), abs=1e-12)

    def test_s_one_is_log_total(self):
        rng = np.random.RandomState(1)
        for _ in range(20):
            y = rng.uniform(0.1, 5.0, size=6)
            ev = psi(y, 1)
            assert ev.k == 0
            assert ev.value == pytest.approx(math.log(y.sum()), abs=1e-10)

    def test_s_equals_n_is_log_product(self):
        rng = np.random.RandomState(2)
        for _ in range(20):
            y = rng.uniform(0.5, 3.0, size=5)
            ev = psi(y, 5)
            assert ev.value == pytest.approx(np.log(y).sum(), abs=1e-10)


class TestPsiAgainstOracle:
    def test_matches_enumeration(self):
        rng = np.random.RandomState(7)
        for _ in range(300):
            n = rng.randint(2, 15)
            s = rng.randint(1, n + 1)
            y = np.where(rng.rand(n) < 0.2, 0.0, rng.uniform(0.0, 10.0, n))
            if y.sum() == 0.0:
                continue
            want_val, want_k = psi_oracle(y, s)
            ev = psi(y, s)
            if math.isinf(want_val):
                assert ev.rank_deficient
                continue
            assert ev.k == want_k
            assert ev.value == pytest.approx(want_val, abs=1e-10)

    def test_breakpoint_is_unique(self):
        rng = np.random.RandomState(8)
        for _ in range(300):
            n = rng.randint(2, 12)
            s = rng.randint(1, n + 1)
            y = rng.uniform(0.01, 8.0, n)
            hits, _ = breakpoint_hits_oracle(y, s)
            assert len(hits) == 1

    def test_large_scale_boundary_tie(self):
        # Exact tie at the breakpoint on a 1e5 scale must still resolve.
        y = np.array([2.0e5, 1.0e5, 1.0e5])
        ev = psi(y, 2)
        assert ev.k == 0
        assert ev.value == pytest.approx(2.0 * math.log(2.0e5), rel=1e-12)


class TestPsiDomainAndShape:
    def test_rank_deficient_when_too_few_positives(self):
        ev = psi(np.array([3.0, 2.0, 0.0, 0.0]), 3)
        assert ev.rank_deficient
        assert ev.value == -math.inf
        assert ev.subgradient is None

    def test_clamps_tiny_negative_noise(self):
        ev = psi(np.array([1.0, -1e-13]), 1)
        assert ev.value == pytest.approx(0.0, abs=1e-12)

    def test_rejects_genuine_negatives(self):
        with pytest.raises(ValueError):
            psi(np.array([1.0, -1e-9]), 1)

    def test_rejects_s_out_of_range(self):
        with pytest.raises(ValueError):
            psi(np.array([1.0, 2.0]), 3)
        with pytest.raises(ValueError):
            psi(np.array([1.0, 2.0]), 0)

    def test_permutation_invariance_is_exact(self):
        rng = np.random.RandomState(9)
        y = rng.uniform(0.1, 4.0, 7)
        base = psi(y, 3).value
        for _ in range(10):
            perm = rng.permutation(7)
            assert psi(y[perm], 3).value == base


class TestPsiConcavityStructure:
    def test_concave_along_segments(self):
        rng = np.random.RandomState(10)
        for _ in range(50):
            n = rng.randint(2, 10)
            s = rng.randint(1, n + 1)
            y = rng.uniform(0.1, 5.0, n)
            z = rng.uniform(0.1, 5.0, n)
            for alpha in (0.25, 0.5, 0.75):
                mix = psi(alpha * y + (1 - alpha) * z, s).value
                assert mix >= alpha * psi(y, s).value + (1 - alpha) * psi(z, s).value - 1e-9

    def test_robin_hood_transfers_never_decrease(self):
        # Moving mass from a larger to a smaller entry flattens the vector,
        # which can only raise a symmetric concave function.
        rng = np.random.RandomState(11)
        for _ in range(50):
            n = rng.randint(3, 10)
            s = rng.randint(1, n + 1)
            y = rng.uniform(0.2, 5.0, n)
            i, j = int(np.argmax(y)), int(np.argmin(y))
            if i == j:
                continue
            step = 0.25 * (y[i] - y[j])
            z = y.copy()
            z[i] -= step
            z[j] += step
            assert psi(z, s).value >= psi(y, s).value - 1e-9


class TestPsiSubgradient:
    def test_known_split_case(self):
        ev = psi(np.array([4.0, 1.0, 1.0]), 2)
        g = psi_subgradient(ev, np.array([4.0, 1.0, 1.0]))
        np.testing.assert_allclose(g, [0.25, 0.5, 0.5], atol=1e-12)

    def test_zero_tail_case(self):
        y = np.array([3.0, 2.0, 0.0, 0.0])
        g = psi_subgradient(psi(y, 2), y)
        np.testing.assert_allclose(g, [1.0 / 3.0, 0.5, 0.5, 0.5], atol=1e-12)

    def test_restores_input_order(self):
        y = np.array([1.0, 4.0, 1.0])
        g = psi_subgradient(psi(y, 2), y)
        np.testing.assert_allclose(g, [0.5, 0.25, 0.5], atol=1e-12)

    def test_supergradient_inequality(self):
        rng = np.random.RandomState(12)
        for _ in range(100):
            n = rng.randint(2, 10)
            s = rng.randint(1, n + 1)
            y = rng.uniform(0.2, 5.0, n)
            z = rng.uniform(0.2, 5.0, n)
            ev = psi(y, s)
            g = psi_subgradient(ev, y)
            assert psi(z, s).value <= ev.value + g @ (z - y) + 1e-9

    def test_rejects_rank_deficient_eval(self):
        y = np.array([1.0, 0.0, 0.0])
        ev = psi(y, 2)
        with pytest.raises(ValueError):
            psi_subgradient(ev, y)


class TestEnvelopeValue:
    def test_zero_spectrum_with_unit_shift(self):
        # All-zero spectrum shifted by t = 1 over s = 2 slots gives log 1 + log 1.
        ev = envelope_value(np.zeros(4), 1.0, 2)
        assert ev.value == pytest.approx(0.0, abs=1e-12)

    def test_matches_psi_on_shifted_head(self):
        eigs = np.array([5.0, 3.0, 1.0, 0.5])
        t = 0.7
        shifted = eigs.copy()
        shifted[:2] += t
        assert envelope_value(eigs, t, 2).value == pytest.approx(psi(shifted, 2).value, abs=1e-12)

    def test_rejects_unsorted_spectrum(self):
        with pytest.raises(ValueError):
            envelope_value(np.array([1.0, 2.0]), 0.0, 1)

    def test_rejects_negative_spectrum(self):
        with pytest.raises(ValueError):
            envelope_value(np.array([1.0, -1e-6]), 0.5, 1)

    def test_clamps_rounding_noise(self):
        ev = envelope_value(np.array([1.0, -5e-11]), 0.5, 1)
        assert np.isfinite(ev.value)
