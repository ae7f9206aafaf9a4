"""Randomized LCU decomposition of exp(i H t / lambda) and its sampler.

Each of r segments draws an even Taylor order n, one rotation axis and n
extra Pauli factors from the Hamiltonian distribution.  The sampled
unitary is a product of segments; its weighted average reproduces the
exact evolution up to a truncation bias that decays superexponentially
in the truncation order M.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import specfun
from .pauli import DENSE_QUBIT_CAP, SignedPauli, index_action


@dataclass(frozen=True)
class PauliRotation:
    """exp(i * angle * P) for a signed Pauli P; |angle| < pi/2."""

    angle: float
    op: SignedPauli


@dataclass(frozen=True)
class PauliOp:
    """A bare signed Pauli factor."""

    op: SignedPauli


@dataclass(frozen=True)
class Phase:
    """Scalar factor i^quarter_turns."""

    quarter_turns: int


LcuFactor = Union[PauliRotation, PauliOp, Phase]


@dataclass(frozen=True)
class LcuUnitary:
    """Ordered factor list; factors[0] is applied to the state first."""

    factors: tuple
    width: int

    @property
    def rotation_count(self) -> int:
        return sum(1 for f in self.factors if isinstance(f, PauliRotation))

    def matrix(self, max_width: int = DENSE_QUBIT_CAP) -> np.ndarray:
        if self.width > max_width:
            raise ValueError(f"width {self.width} exceeds dense-matrix cap {max_width}")
        dim = 1 << self.width
        m = np.eye(dim, dtype=complex)
        for f in self.factors:
            m = _apply_factor_to_matrix(f, m)
        return m

    def serialize(self) -> str:
        lines = []
        for f in self.factors:
            if isinstance(f, PauliRotation):
                lines.append(f"ROT {f.angle:+.12f} {f.op.word()}")
            elif isinstance(f, PauliOp):
                lines.append(f"PAULI {f.op.word()}")
            else:
                lines.append(f"PHASE {f.quarter_turns % 4}")
        return "\n".join(lines) + "\n"


def parse_lcu(text: str, width: int | None = None) -> LcuUnitary:
    """Inverse of LcuUnitary.serialize for a single unitary."""
    factors = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        kind, rest = line.split(None, 1)
        if kind == "ROT":
            angle, word = rest.split()
            factors.append(PauliRotation(float(angle), SignedPauli.from_word(word)))
        elif kind == "PAULI":
            factors.append(PauliOp(SignedPauli.from_word(rest.strip())))
        elif kind == "PHASE":
            factors.append(Phase(int(rest)))
        else:
            raise ValueError(f"unknown factor line {raw!r}")
    if width is None:
        widths = [f.op.width for f in factors if not isinstance(f, Phase)]
        if not widths:
            raise ValueError("cannot infer width from phase-only unitary")
        width = widths[0]
    return LcuUnitary(tuple(factors), width)


@functools.lru_cache(maxsize=8192)
def _factor_matrix(angle: float | None, op: SignedPauli) -> np.ndarray:
    dim = 1 << op.width
    perm, phase = index_action(op)
    m = np.zeros((dim, dim), dtype=complex)
    m[np.arange(dim), perm] = phase
    if angle is not None:
        m = math.cos(angle) * np.eye(dim) + (1j * math.sin(angle)) * m
    m.flags.writeable = False
    return m


def _apply_factor_to_matrix(f: LcuFactor, m: np.ndarray) -> np.ndarray:
    if isinstance(f, Phase):
        return (1j ** (f.quarter_turns % 4)) * m
    if isinstance(f, PauliOp):
        return _factor_matrix(None, f.op) @ m
    return _factor_matrix(f.angle, f.op) @ m


@dataclass(frozen=True)
class SegmentDistribution:
    """Truncated even-order distribution for one segment of length x = t/r."""

    x: float
    M: int
    orders: np.ndarray
    probs: np.ndarray
    thetas: np.ndarray
    mu_segment: float

    def __post_init__(self):
        for arr in (self.orders, self.probs, self.thetas):
            arr.flags.writeable = False


def _segment_terms(x, M: int):
    """Unnormalized weights |x|^n/n! sqrt(1+(x/(n+1))^2) for even n <= M.

    x may be a scalar or an array; the n axis is appended last.
    """
    xs = np.abs(np.atleast_1d(np.asarray(x, dtype=float)))
    orders = np.arange(0, M + 1, 2)
    logfact = np.array([math.lgamma(n + 1) for n in orders])
    with np.errstate(divide="ignore", invalid="ignore"):
        logx = np.where(xs > 0, np.log(xs), -np.inf)
        lg = np.where(orders == 0, 0.0, orders * logx[..., None])
    w = np.exp(lg - logfact) * np.sqrt(1.0 + (xs[..., None] / (orders + 1.0)) ** 2)
    return orders, w


def segment_weight(x, M: int):
    """mu for one segment: sum of the truncated even-order weights."""
    _, w = _segment_terms(x, M)
    out = w.sum(axis=-1)
    return float(out[0]) if np.isscalar(x) else out


@functools.lru_cache(maxsize=16384)
def segment_distribution(t: float, r: int, M: int) -> SegmentDistribution:
    """Normalized order distribution, angles, and weight for segments of t/r."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if M < 0 or M % 2 != 0:
        raise ValueError("M must be even and non-negative")
    x = t / r
    orders, w = _segment_terms(x, M)
    w = w[0]
    mu = float(w.sum())
    thetas = np.arccos(1.0 / np.sqrt(1.0 + (x / (orders + 1.0)) ** 2))
    return SegmentDistribution(x=x, M=M, orders=orders, probs=w / mu,
                               thetas=thetas, mu_segment=mu)


def weight_mu(t: float, r: int, M: int) -> float:
    """Total LCU weight mu = mu_segment^r; bounded by exp(t^2/r)."""
    if r < 1:
        raise ValueError("r must be >= 1")
    return segment_weight(t / r, M) ** r


def truncation_order(gamma: float, weight_A: float, cgate: float) -> int:
    """Smallest even M with bias |B| <= gamma (requires r_j >= |t_j|).

    M >= ln(1/gamma') / W(ln(1/gamma')/e) with gamma' = 2 gamma / (A * cgate);
    gamma' >= 1 means no truncation control is needed at this budget.
    """
    if min(gamma, weight_A, cgate) <= 0:
        raise ValueError("gamma, weight_A, cgate must be positive")
    gamma_p = 2.0 * gamma / (weight_A * cgate)
    if gamma_p >= 1.0:
        return 0
    log_inv = -math.log(gamma_p)
    bound = log_inv / specfun.lambert_w0(log_inv / math.e)
    return 2 * math.ceil(bound / 2.0)


def truncation_bias_bound(t: float, r: int, M: int, tail_terms: int = 80) -> float:
    """Operator-norm bound on ||truncated LCU - exp(i H t/lambda)||.

    r * mu_segment_full^(r-1) * (full - truncated segment weight).
    """
    x = t / r
    big = max(M + 2 * tail_terms, 40)
    full = segment_weight(x, big)
    tail = full - segment_weight(x, M)
    return r * full ** (r - 1) * max(tail, 0.0)


def sample_unitary(hhat, t: float, r: int, M: int, rng: np.random.Generator) -> LcuUnitary:
    """Draw one unitary whose weighted mean reproduces exp(i H t / lambda).

    Args:
        hhat: normalized distribution [(p_l, SignedPauli)] with sum p_l = 1.
        t: evolution time for the lambda-normalized Hamiltonian.
        r: number of segments (controlled-rotation count of the output).
        M: even truncation order of the per-segment Taylor distribution.
        rng: seeded generator; identical seeds give identical factor lists.
    """
    probs = np.array([p for p, _ in hhat], dtype=float)
    if abs(probs.sum() - 1.0) > 1e-9 or np.any(probs < 0):
        raise ValueError("hhat must be a normalized distribution")
    ops = [op for _, op in hhat]
    width = ops[0].width
    dist = segment_distribution(float(t), int(r), int(M))
    sgn = 1.0 if t >= 0 else -1.0
    cum_q = np.cumsum(dist.probs)
    cum_q[-1] = 1.0
    n_idx = np.searchsorted(cum_q, rng.random(r), side="right")
    orders = dist.orders[n_idx]
    cum_p = np.cumsum(probs)
    cum_p[-1] = 1.0
    term_draws = np.searchsorted(cum_p, rng.random(int(orders.sum() + r)), side="right")
    factors = []
    pos = 0
    for k in range(r):
        n = int(orders[k])
        theta = sgn * float(dist.thetas[n_idx[k]])
        factors.append(PauliRotation(theta, ops[term_draws[pos]]))
        for i in range(n):
            factors.append(PauliOp(ops[term_draws[pos + 1 + i]]))
        pos += n + 1
        if n % 4 != 0:
            # (i sgn(t))^n = i^n for even n
            factors.append(Phase(n % 4))
    return LcuUnitary(tuple(factors), width)
