import math

import numpy as np
import pytest

import randqpe as rq
from conftest import random_hamiltonian
from randqpe import backend, lcu
from randqpe._rng import derive_rng


class TestPrepareState:
    def test_basis_single_qubit(self):
        s = backend.prepare_state("basis:0")
        np.testing.assert_allclose(s.amplitudes, [1.0, 0.0])

    def test_basis_little_endian(self):
        # bits '01': qubit0=0, qubit1=1 -> index 2
        s = backend.prepare_state("basis:01")
        assert s.amplitudes[2] == 1.0

    def test_groundmix_full_overlap(self):
        h = rq.parse_hamiltonian("1.0 Z")
        s = backend.prepare_state("groundmix:1.0", h)
        np.testing.assert_allclose(np.abs(s.amplitudes), [0.0, 1.0], atol=1e-12)

    def test_groundmix_half_overlap(self):
        h = rq.parse_hamiltonian("1.0 Z")
        s = backend.prepare_state("groundmix:0.5", h)
        assert abs(s.amplitudes[1]) ** 2 == pytest.approx(0.5, abs=1e-10)

    def test_groundmix_overlap_property(self):
        h = random_hamiltonian(4, 8, seed=21)
        eta = 0.37
        s = backend.prepare_state(f"groundmix:{eta}", h)
        evals, evecs = np.linalg.eigh(h.matrix())
        mask = evals <= evals[0] + 1e-9 * h.lam
        proj = evecs[:, mask]
        overlap = float(np.linalg.norm(proj.conj().T @ s.amplitudes) ** 2)
        assert overlap == pytest.approx(eta, abs=1e-10)

    def test_file_round_trip(self, tmp_path):
        h = random_hamiltonian(3, 4, seed=5)
        s = backend.prepare_state("groundmix:0.8", h)
        p = tmp_path / "amps.txt"
        backend.write_amplitudes(s, p)
        s2 = backend.prepare_state(f"file:{p}", None)
        np.testing.assert_allclose(s2.amplitudes, s.amplitudes, atol=1e-12)

    def test_errors(self, tmp_path):
        with pytest.raises(ValueError):
            backend.prepare_state("groundmix:0.5")
        h = rq.parse_hamiltonian("1.0 Z")
        with pytest.raises(ValueError):
            backend.prepare_state("groundmix:1.5", h)
        bad = tmp_path / "zero.txt"
        bad.write_text("0 0\n0 0\n")
        with pytest.raises(ValueError):
            backend.prepare_state(f"file:{bad}")


class TestExpectation:
    def test_identity(self):
        s = backend.prepare_state("basis:0")
        u = lcu.LcuUnitary((), width=1)
        assert backend.expectation(s, u) == pytest.approx(1.0)

    def test_off_diagonal_pauli(self):
        s = backend.prepare_state("basis:0")
        u = lcu.LcuUnitary((lcu.PauliOp(rq.SignedPauli(rq.PauliString.from_axes("X"))),),
                           width=1)
        assert backend.expectation(s, u) == pytest.approx(0.0)

    def test_against_dense_matrix(self):
        h = random_hamiltonian(3, 6, seed=7)
        s = backend.prepare_state("groundmix:0.6", h)
        for seed in range(6):
            u = lcu.sample_unitary(h.normalized_distribution(), -1.7, 4, 8,
                                   derive_rng(seed))
            direct = backend.expectation(s, u)
            dense = complex(np.vdot(s.amplitudes, u.matrix() @ s.amplitudes))
            assert direct == pytest.approx(dense, abs=1e-10)
            assert abs(direct) <= 1 + 1e-10

    def test_width_mismatch(self):
        s = backend.prepare_state("basis:00")
        u = lcu.LcuUnitary((), width=1)
        with pytest.raises(ValueError):
            backend.expectation(s, u)


class TestHadamard:
    def test_identity_always_plus(self):
        s = backend.prepare_state("basis:0")
        u = lcu.LcuUnitary((), width=1)
        rng = derive_rng(3)
        for _ in range(50):
            m = backend.hadamard_sample(s, u, rng)
            assert m.real == 1.0
            assert m.imag in (-1.0, 1.0)

    def test_zero_expectation_is_fair_coin(self):
        s = backend.prepare_state("basis:0")
        u = lcu.LcuUnitary((lcu.PauliOp(rq.SignedPauli(rq.PauliString.from_axes("X"))),),
                           width=1)
        rng = derive_rng(11)
        n = 20000
        tot = sum(backend.hadamard_sample(s, u, rng).real for _ in range(n))
        assert abs(tot / n) <= 4 / math.sqrt(n)

    def test_unbiased_on_random_instance(self):
        h = random_hamiltonian(2, 3, seed=13)
        s = backend.prepare_state("groundmix:0.9", h)
        u = lcu.sample_unitary(h.normalized_distribution(), 1.1, 3, 8, derive_rng(2))
        exact = backend.expectation(s, u)
        rng = derive_rng(4)
        n = 20000
        acc = sum(backend.hadamard_sample(s, u, rng) for _ in range(n))
        est = acc / n
        assert abs(est.real - exact.real) <= 4 / math.sqrt(n)
        assert abs(est.imag - exact.imag) <= 4 / math.sqrt(n)


class TestSpectrum:
    def test_z_basis0(self):
        h = rq.parse_hamiltonian("1.0 Z")
        spec = backend.exact_spectrum(h, backend.prepare_state("basis:0"))
        np.testing.assert_allclose(spec.eigenvalues, [-1.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(spec.overlaps, [0.0, 1.0], atol=1e-12)

    def test_x_symmetric(self):
        h = rq.parse_hamiltonian("1.0 X")
        spec = backend.exact_spectrum(h, backend.prepare_state("basis:0"))
        np.testing.assert_allclose(spec.overlaps, [0.5, 0.5], atol=1e-12)

    def test_residual_and_total_weight(self):
        h = random_hamiltonian(4, 8, seed=17)
        s = backend.prepare_state("groundmix:0.5", h)
        spec = backend.exact_spectrum(h, s)
        assert spec.overlaps.sum() == pytest.approx(1.0, abs=1e-10)
        evals, evecs = np.linalg.eigh(h.matrix())
        m = h.matrix()
        for e, v in zip(evals, evecs.T):
            assert np.linalg.norm(m @ v - e * v) <= 1e-9 * h.lam
        assert np.abs(spec.eigenvalues).max() <= h.lam * (1 + 1e-12)

    def test_degenerate_grouping(self):
        h = rq.parse_hamiltonian("1.0 ZI")
        s = backend.prepare_state("basis:00")
        spec = backend.exact_spectrum(h, s)
        assert len(spec.eigenvalues) == 2
        np.testing.assert_allclose(spec.overlaps, [0.0, 1.0], atol=1e-12)


class TestExactCdf:
    def test_step_limits(self):
        h = random_hamiltonian(3, 5, seed=19)
        s = backend.prepare_state("groundmix:0.7", h)
        spec = backend.exact_spectrum(h, s)
        tau = 1.2 / h.lam
        assert backend.exact_cdf(spec, tau, tau * spec.eigenvalues[0] - 1e-9) == 0.0
        assert backend.exact_cdf(spec, tau, tau * spec.eigenvalues[-1]) == pytest.approx(1.0)

    def test_single_jump(self):
        h = rq.parse_hamiltonian("1.0 Z")
        spec = backend.exact_spectrum(h, backend.prepare_state("basis:0"))
        assert backend.exact_cdf(spec, 1.0, 0.5) == 0.0
        assert backend.exact_cdf(spec, 1.0, 1.0) == pytest.approx(1.0)

    def test_monotone_step(self):
        h = random_hamiltonian(3, 6, seed=23)
        s = backend.prepare_state("groundmix:0.4", h)
        spec = backend.exact_spectrum(h, s)
        tau = 1.0 / h.lam
        xs = np.linspace(-1.5, 1.5, 400)
        vals = backend.exact_cdf(spec, tau, xs)
        assert np.all(np.diff(vals) >= 0)
        assert set(np.round(np.unique(vals), 12)) <= set(
            np.round(np.unique(np.cumsum(np.concatenate([[0], spec.overlaps]))), 12))

    def test_tau_too_large(self):
        h = rq.parse_hamiltonian("1.0 Z")
        spec = backend.exact_spectrum(h, backend.prepare_state("basis:0"))
        with pytest.raises(ValueError):
            backend.exact_cdf(spec, 2.0, 0.0)
