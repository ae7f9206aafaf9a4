import math

import numpy as np
import pytest
from scipy.linalg import expm

import randqpe as rq
from conftest import random_hamiltonian
from randqpe import lcu
from randqpe._rng import derive_rng


class TestSegmentDistribution:
    def test_time_zero(self):
        d = lcu.segment_distribution(0.0, 3, 8)
        assert d.probs[0] == pytest.approx(1.0)
        assert d.thetas[0] == 0.0
        assert d.mu_segment == pytest.approx(1.0)

    def test_unit_ratio_frozen(self):
        # direct evaluation: weights sqrt(2), sqrt(10)/6, sqrt(26)/120
        d = lcu.segment_distribution(1.0, 1, 4)
        np.testing.assert_allclose(
            d.probs, [0.712898486709766, 0.26568157955662786, 0.021419933733606202],
            rtol=1e-12)
        assert d.mu_segment == pytest.approx(1.983751668347765, rel=1e-12)

    def test_theta_zero_order(self):
        d = lcu.segment_distribution(2.0, 2, 4)
        assert d.thetas[0] == pytest.approx(math.pi / 4, rel=1e-12)

    def test_angles_formula(self):
        d = lcu.segment_distribution(-1.7, 3, 10)
        x = -1.7 / 3
        for n, th in zip(d.orders, d.thetas):
            assert th == pytest.approx(
                math.acos(1.0 / math.sqrt(1 + (x / (n + 1)) ** 2)), rel=1e-12)
            assert 0 <= th < math.pi / 2

    def test_validation(self):
        with pytest.raises(ValueError):
            lcu.segment_distribution(1.0, 0, 4)
        with pytest.raises(ValueError):
            lcu.segment_distribution(1.0, 1, 3)


class TestTruncationOrder:
    def test_frozen_examples(self):
        # gamma' = e^-e: bound e / W(1) = 4.7926...; smallest even is 6
        assert lcu.truncation_order(0.5 * math.exp(-math.e), 1.0, 1.0) == 6
        # gamma' = 1e-10: bound ln(1e10)/W(ln(1e10)/e) = 23.02585/1.641176
        # = 14.0303, so the smallest even order is 16 (14 fails the bound:
        # (e/14)^14 = 1.08e-10 > 1e-10)
        assert lcu.truncation_order(0.5e-10, 1.0, 1.0) == 16

    def test_bound_satisfied(self):
        for gp in (0.5, 1e-2, 1e-6, 1e-14):
            m = lcu.truncation_order(gp / 2, 1.0, 1.0)
            if m:
                assert (math.e / m) ** m <= gp

    def test_monotone_in_gamma(self):
        gammas = np.geomspace(1e-14, 0.4, 25)
        ms = [lcu.truncation_order(g, 1.0, 1.0) for g in gammas]
        assert all(a >= b for a, b in zip(ms, ms[1:]))

    def test_loose_budget_returns_zero(self):
        assert lcu.truncation_order(10.0, 1.0, 1.0) == 0


class TestWeightMu:
    def test_time_zero(self):
        assert lcu.weight_mu(0.0, 3, 8) == pytest.approx(1.0)

    def test_frozen_series_value(self):
        # direct series: sum_{even n<=8} (1/n!) sqrt(1+1/(n+1)^2) = 1.9851796122068712
        assert lcu.weight_mu(1.0, 1, 8) == pytest.approx(1.9851796122068712, rel=1e-12)

    def test_bounded_by_exponential(self):
        for t in np.linspace(-3, 3, 20):
            for r in (1, 2, 5, 9):
                assert lcu.weight_mu(float(t), r, 40) <= math.exp(t * t / r) * (1 + 1e-12)

    def test_lemma_bound_example(self):
        assert lcu.weight_mu(2.0, 4, 40) <= math.e * (1 + 1e-12)


def test_even_series_bounded_by_gaussian():
    # sum_{even n<=40} |x|^n/n! sqrt(1+(x/(n+1))^2) <= e^{x^2}
    xs = np.linspace(-3, 3, 200)
    vals = lcu.segment_weight(xs, 40)
    assert np.all(vals <= np.exp(xs * xs) * (1 + 1e-12))


class TestSampleUnitary:
    def test_seed_determinism(self):
        h = random_hamiltonian(3, 5, seed=2)
        hhat = h.normalized_distribution()
        u1 = lcu.sample_unitary(hhat, -1.5, 5, 8, derive_rng(99))
        u2 = lcu.sample_unitary(hhat, -1.5, 5, 8, derive_rng(99))
        assert u1.serialize() == u2.serialize()

    def test_rotation_count_and_angles(self):
        h = random_hamiltonian(2, 3, seed=4)
        hhat = h.normalized_distribution()
        dist = lcu.segment_distribution(2.2, 6, 8)
        u = lcu.sample_unitary(hhat, 2.2, 6, 8, derive_rng(1))
        assert u.rotation_count == 6
        allowed = set(np.round(dist.thetas, 12))
        for f in u.factors:
            if isinstance(f, lcu.PauliRotation):
                assert round(abs(f.angle), 12) in allowed

    def test_time_zero_gives_identity(self):
        h = random_hamiltonian(2, 3, seed=4)
        u = lcu.sample_unitary(h.normalized_distribution(), 0.0, 4, 8, derive_rng(5))
        assert u.rotation_count == 4
        assert all(isinstance(f, lcu.PauliRotation) and f.angle == 0.0
                   for f in u.factors)
        np.testing.assert_allclose(u.matrix(), np.eye(4), atol=1e-12)

    def test_unitarity(self):
        h = random_hamiltonian(3, 6, seed=9)
        hhat = h.normalized_distribution()
        for seed in range(5):
            u = lcu.sample_unitary(hhat, 1.3, 4, 8, derive_rng(seed))
            m = u.matrix()
            np.testing.assert_allclose(m @ m.conj().T, np.eye(8), atol=1e-10)

    def test_single_term_unbiasedness(self):
        h = rq.parse_hamiltonian("1.0 Z")
        hhat = h.normalized_distribution()
        t, r, M, n = 1.0, 2, 8, 40_000
        rng = derive_rng(17)
        acc = np.zeros((2, 2), dtype=complex)
        for _ in range(n):
            acc += lcu.sample_unitary(hhat, t, r, M, rng).matrix()
        mu = lcu.weight_mu(t, r, M)
        est = mu * acc / n
        exact = np.diag([np.exp(1j * t), np.exp(-1j * t)])
        se = mu / math.sqrt(n)
        bias = lcu.truncation_bias_bound(t, r, M)
        assert np.linalg.norm(est - exact, 2) <= 4 * se + bias

    def test_negative_time_conjugates(self):
        # E[U(-t)] must track exp(-i H t / lambda); checks the rotation sign fix
        h = rq.parse_hamiltonian("0.6 X\n0.4 Z")
        hhat = h.normalized_distribution()
        t, r, M, n = -1.2, 3, 8, 60_000
        rng = derive_rng(23)
        acc = np.zeros((2, 2), dtype=complex)
        for _ in range(n):
            acc += lcu.sample_unitary(hhat, t, r, M, rng).matrix()
        mu = lcu.weight_mu(t, r, M)
        exact = expm(1j * t * h.matrix() / h.lam)
        se = mu / math.sqrt(n)
        bias = lcu.truncation_bias_bound(t, r, M)
        assert np.linalg.norm(mu * acc / n - exact, 2) <= 4 * se + bias


class TestSerialization:
    def test_format(self):
        h = rq.parse_hamiltonian("1.0 Z")
        u = lcu.sample_unitary(h.normalized_distribution(), 1.0, 1, 0, derive_rng(0))
        text = u.serialize()
        assert text.startswith("ROT +0.785398")
        assert text.rstrip().endswith("Z")

    def test_round_trip(self):
        h = random_hamiltonian(3, 5, seed=6)
        u = lcu.sample_unitary(h.normalized_distribution(), -2.0, 8, 8, derive_rng(3))
        v = lcu.parse_lcu(u.serialize())
        assert v.serialize() == u.serialize()
        np.testing.assert_allclose(v.matrix(), u.matrix(), atol=1e-10)

    def test_phase_line(self):
        u = lcu.LcuUnitary((lcu.Phase(2),), width=1)
        assert u.serialize().strip() == "PHASE 2"
        np.testing.assert_allclose(u.matrix(), -np.eye(2), atol=0)
