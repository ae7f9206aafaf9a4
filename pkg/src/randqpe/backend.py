"""Desk-scale exact quantum backend.

Pure states only; expectation values of sampled LCU unitaries are
computed by applying factors to a working copy of the state, and
Hadamard-test outcomes are Bernoulli draws from the exact expectation
(statistically identical to simulating the ancilla circuit).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lcu import LcuUnitary, PauliOp, PauliRotation, Phase
from .pauli import DENSE_QUBIT_CAP, Hamiltonian, index_action

# fixed stream for the deterministic pseudo-random orthogonal component
_GROUNDMIX_SEED = 0x5EED_CAFE_F00D


@dataclass(frozen=True)
class StateVector:
    """Unit-norm complex amplitudes; index bit q is qubit q (little-endian)."""

    amplitudes: np.ndarray
    width: int

    def __post_init__(self):
        self.amplitudes.flags.writeable = False
        if self.amplitudes.shape != (1 << self.width,):
            raise ValueError("amplitude length must be 2^width")
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state norm {norm} not 1 within 1e-10")


@dataclass(frozen=True)
class SpectralData:
    """Grouped eigenvalues of a Hamiltonian and ansatz overlaps per group."""

    eigenvalues: np.ndarray
    overlaps: np.ndarray

    def __post_init__(self):
        self.eigenvalues.flags.writeable = False
        self.overlaps.flags.writeable = False


def prepare_state(spec: str, h: Hamiltonian | None = None,
                  max_width: int = DENSE_QUBIT_CAP) -> StateVector:
    """Build an ansatz from 'basis:<bits>', 'file:<path>', or 'groundmix:<eta>'.

    groundmix mixes sqrt(eta) of the ground state with sqrt(1-eta) of a
    deterministic pseudo-random unit vector orthogonal to the ground space.
    """
    kind, _, arg = spec.partition(":")
    if kind == "basis":
        if not arg or any(c not in "01" for c in arg):
            raise ValueError(f"bad basis descriptor {spec!r}")
        width = len(arg)
        index = sum(int(c) << q for q, c in enumerate(arg))
        amps = np.zeros(1 << width, dtype=complex)
        amps[index] = 1.0
        return StateVector(amps, width)
    if kind == "file":
        rows = []
        for raw in Path(arg).read_text().splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            re_s, im_s = line.split()
            rows.append(complex(float(re_s), float(im_s)))
        amps = np.array(rows, dtype=complex)
        width = int(math.log2(len(amps)))
        if 1 << width != len(amps):
            raise ValueError("amplitude count must be a power of two")
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize zero amplitudes")
        return StateVector(amps / norm, width)
    if kind == "groundmix":
        if h is None:
            raise ValueError("groundmix requires a Hamiltonian")
        eta = float(arg)
        if not 0.0 < eta <= 1.0:
            raise ValueError("groundmix overlap must lie in (0, 1]")
        if h.width > max_width:
            raise ValueError(f"width {h.width} exceeds cap {max_width}")
        evals, evecs = np.linalg.eigh(h.matrix(max_width))
        ground = evals <= evals[0] + 1e-9 * h.lam
        g = evecs[:, 0]
        if eta == 1.0:
            return StateVector(g.astype(complex), h.width)
        rng = np.random.Generator(np.random.PCG64(_GROUNDMIX_SEED))
        v = rng.standard_normal(len(g)) + 1j * rng.standard_normal(len(g))
        gspace = evecs[:, ground]
        v = v - gspace @ (gspace.conj().T @ v)
        v /= np.linalg.norm(v)
        return StateVector(math.sqrt(eta) * g + math.sqrt(1.0 - eta) * v, h.width)
    raise ValueError(f"unknown state descriptor {spec!r}")


def write_amplitudes(state: StateVector, path) -> None:
    lines = [f"{a.real:.17g} {a.imag:.17g}" for a in state.amplitudes]
    Path(path).write_text("\n".join(lines) + "\n")


def apply_unitary(psi: np.ndarray, u: LcuUnitary) -> np.ndarray:
    """Apply factors in order (factors[0] first) to a copy of psi."""
    out = psi.copy()
    for f in u.factors:
        if isinstance(f, PauliRotation):
            perm, phase = index_action(f.op)
            out = math.cos(f.angle) * out + (1j * math.sin(f.angle)) * (phase * out[perm])
        elif isinstance(f, PauliOp):
            perm, phase = index_action(f.op)
            out = phase * out[perm]
        elif isinstance(f, Phase):
            out = (1j ** (f.quarter_turns % 4)) * out
        else:
            raise TypeError(f"unknown factor {f!r}")
    return out


def expectation(state: StateVector, u: LcuUnitary) -> complex:
    """<psi| U |psi> with factors applied term by term in O(2^n) each."""
    if state.width != u.width:
        raise ValueError("state and unitary widths differ")
    if state.width > DENSE_QUBIT_CAP:
        raise ValueError(f"width {state.width} exceeds cap {DENSE_QUBIT_CAP}")
    return complex(np.vdot(state.amplitudes, apply_unitary(state.amplitudes, u)))


def hadamard_sample(state: StateVector, u: LcuUnitary,
                    rng: np.random.Generator) -> complex:
    """One +-1 +-1i Hadamard-test outcome pair; E[m] equals <U> exactly."""
    z = expectation(state, u)
    p_re = min(max(0.5 * (1.0 + z.real), 0.0), 1.0)
    p_im = min(max(0.5 * (1.0 + z.imag), 0.0), 1.0)
    m_re = 1.0 if rng.random() < p_re else -1.0
    m_im = 1.0 if rng.random() < p_im else -1.0
    return complex(m_re, m_im)


def exact_spectrum(h: Hamiltonian, state: StateVector,
                   max_width: int = DENSE_QUBIT_CAP) -> SpectralData:
    """Dense eigendecomposition with degenerate groups merged at 1e-9 * lambda."""
    if h.width != state.width:
        raise ValueError("Hamiltonian and state widths differ")
    if h.width > max_width:
        raise ValueError(f"width {h.width} exceeds cap {max_width}")
    evals, evecs = np.linalg.eigh(h.matrix(max_width))
    w = np.abs(evecs.conj().T @ state.amplitudes) ** 2
    tol = 1e-9 * h.lam
    grouped_e, grouped_w = [], []
    for e, wk in zip(evals, w):
        if grouped_e and e - grouped_e[-1] <= tol:
            grouped_w[-1] += wk
        else:
            grouped_e.append(float(e))
            grouped_w.append(float(wk))
    return SpectralData(np.array(grouped_e), np.array(grouped_w))


def exact_cdf(spec: SpectralData, tau: float, x):
    """C(x) = sum of overlaps with tau * E_k <= x (right-continuous step)."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    top = tau * float(np.abs(spec.eigenvalues).max())
    if top >= math.pi / 2:
        raise ValueError("tau * max|E| must stay below pi/2")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    scaled = tau * spec.eigenvalues
    out = (scaled[None, :] <= xs[:, None]) @ spec.overlaps
    return float(out[0]) if np.isscalar(x) else out
