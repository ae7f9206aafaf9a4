"""Eigenvalue thresholding and ground-state energy search.

A Plan fixes the spectral window tau, the certified Fourier filter, the
per-index runtime vector, the truncation order, and the sample budget.
One SampleSet of Hadamard-test records is x-independent: the estimate at
any threshold x re-phases the same records, so a full bisection reuses a
single quantum data set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import runtime
from .backend import StateVector, exact_spectrum
from .heaviside import FourierSeries, build_fourier, eval_fourier, optimize_split
from .lcu import segment_distribution, truncation_order
from .pauli import Hamiltonian, index_action


@dataclass(frozen=True)
class Plan:
    """Everything the threshold sampler needs, fixed before data collection."""

    h: Hamiltonian
    tau: float
    delta: float
    eta: float
    eps: float
    theta: float
    b: float
    gamma: float
    M: int
    rmode: str
    fourier: FourierSeries
    js: np.ndarray          # positive odd indices 1, 3, ..., 2d+1
    times: np.ndarray       # t_j = -j tau lambda  (negative for these js)
    weights: np.ndarray     # 2 |F_j| (both signs of each index)
    rvec: np.ndarray
    mu: np.ndarray          # exact truncated LCU weights per index
    complexities: runtime.Complexities
    eps_total: float

    def __post_init__(self):
        for arr in (self.js, self.times, self.weights, self.rvec, self.mu):
            arr.flags.writeable = False

    @property
    def x_max(self) -> float:
        """Certified query window: |x| <= (pi - delta) / 2."""
        return 0.5 * (math.pi - self.delta)

    def runtime_map(self) -> dict:
        """Mapping view of the runtime vector, {j: r_j} over both signs."""
        out = {}
        for j, r in zip(self.js, self.rvec):
            out[int(j)] = int(r)
            out[-int(j)] = int(r)
        return out


@dataclass(frozen=True)
class SampleSet:
    """x-independent Hadamard records (j_i, m_i) tied to their Plan."""

    js: np.ndarray          # signed sampled indices
    m: np.ndarray           # complex outcomes, real and imag parts in {-1, +1}
    plan: Plan

    def __post_init__(self):
        self.js.flags.writeable = False
        self.m.flags.writeable = False


def build_plan(h: Hamiltonian, Delta: float, eta: float, eps: float, theta: float,
               b: float = 1.0, rmode: str = "total", g: float | None = None,
               delta_scale: float = 1.0) -> Plan:
    """Assemble tau, filter, runtime vector, truncation order, and budgets.

    rmode selects the runtime vector: 'constant' (r_j = ceil(2 t_j^2)),
    'total' (minimize 2 c_sample c_gate), or 'gated' (minimize c_sample
    subject to expected gates <= g).  delta_scale 0.5 is the ground-state
    search setting; 1.0 the plain thresholding one.
    """
    if Delta <= 0:
        raise ValueError("Delta must be positive")
    if b < 1.0:
        raise ValueError("b must be >= 1")
    if Delta > 2.0 * h.lam / b:
        raise ValueError("need Delta <= 2 lambda / b to keep delta below pi/2")
    if not 0.0 < eps < eta / 2.0 <= 0.5:
        raise ValueError("need 0 < eps < eta/2 <= 1/2")
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must be a probability")
    if not 0.0 < delta_scale <= 1.0:
        raise ValueError("delta_scale must lie in (0, 1]")
    tau = math.pi / (2.0 * h.lam / b + Delta)
    delta = delta_scale * tau * Delta
    params = optimize_split(delta, eps)
    series = build_fourier(params)
    js = 2 * np.arange(series.d + 1, dtype=np.int64) + 1
    times = -js * tau * h.lam
    weights = 2.0 * series.odd_abs
    if rmode == "constant":
        rvec = runtime.constant_weight(times)
    elif rmode == "total":
        rvec = runtime.minimize_total(weights, times)
    elif rmode == "gated":
        if g is None:
            raise ValueError("rmode 'gated' needs a gate budget g")
        rvec = runtime.minimize_samples(weights, times, g)
    else:
        raise ValueError(f"unknown rmode {rmode!r}")
    gamma = 0.01 * (eta / 2.0 - eps)
    u = np.exp(times ** 2 / rvec)
    a_u = float((weights * u).sum())
    cg_u = float((weights * u * rvec).sum() / a_u)
    M = truncation_order(gamma, a_u, cg_u)
    complexities = runtime.complexity_report(weights, times, rvec, eta, eps, theta,
                                             exact_mu=True, M=M, bias=gamma)
    mu = runtime.mu_vector(times, rvec, M, exact=True)
    return Plan(h=h, tau=tau, delta=delta, eta=eta, eps=eps, theta=theta, b=b,
                gamma=gamma, M=M, rmode=rmode, fourier=series, js=js, times=times,
                weights=weights, rvec=rvec, mu=mu, complexities=complexities,
                eps_total=params.eps_total)


def collect_samples(plan: Plan, state: StateVector, rng: np.random.Generator) -> SampleSet:
    """Draw c_sample Hadamard records: index j with prob ~ |F_j| mu_j, then a
    randomly compiled unitary for exp(i H t_j / lambda), then the test outcome.

    The segment draws follow the LCU sampler's distribution exactly
    (truncated even orders, i.i.d. Pauli indices) but are evaluated in a
    vectorized batch: all live records advance one segment per step, so
    the run cost is sum_i r_i state updates instead of a Python loop per
    record.  The record stream is deterministic for a fixed seed.
    """
    if plan.h.width != state.width:
        raise ValueError("plan and state widths differ")
    n_rec = plan.complexities.c_sample
    dim = 1 << state.width
    psi0 = state.amplitudes

    pj = plan.weights * plan.mu
    pj = pj / pj.sum()
    gid = rng.choice(len(pj), size=n_rec, p=pj)
    neg = rng.random(n_rec) < 0.5  # True: index -j (time +j tau lambda)

    # per-term index action tables
    dist = plan.h.normalized_distribution()
    p_term = np.array([p for p, _ in dist])
    cum_term = np.cumsum(p_term)
    cum_term[-1] = 1.0
    g_tab = np.empty((len(dist), dim), dtype=np.int64)
    f_tab = np.empty((len(dist), dim), dtype=complex)
    for i, (_, op) in enumerate(dist):
        perm, phase = index_action(op)
        g_tab[i] = perm
        f_tab[i] = phase

    # per-group segment tables (orders share the truncation M)
    n_groups = len(plan.js)
    segs = [segment_distribution(float(t), int(r), plan.M)
            for t, r in zip(plan.times, plan.rvec)]
    n_orders = len(segs[0].orders)
    q_cum = np.empty((n_groups, n_orders))
    thetas = np.empty((n_groups, n_orders))
    for i, s in enumerate(segs):
        q_cum[i] = np.cumsum(s.probs)
        thetas[i] = s.thetas
    q_cum[:, -1] = 1.0
    orders = segs[0].orders

    # records sorted by descending segment count; active prefix shrinks
    r_rec = plan.rvec[gid]
    order_idx = np.argsort(-r_rec, kind="stable")
    inv_order = np.empty_like(order_idx)
    inv_order[order_idx] = np.arange(n_rec)
    gid_s = gid[order_idx]
    r_s = r_rec[order_idx]
    # rotation sign = sgn(t); t = -j tau lam for +j records, +j tau lam for -j
    rot_sign = np.where(neg[order_idx], 1.0, -1.0)

    psi = np.tile(psi0, (n_rec, 1))
    cos0 = np.cos(thetas[gid_s, 0])
    isin0 = 1j * np.sin(thetas[gid_s, 0]) * rot_sign
    max_r = int(r_s[0]) if n_rec else 0
    row_idx = np.arange(n_rec)
    for k in range(max_r):
        m_act = int(np.searchsorted(-r_s, -(k + 1), side="right"))
        if m_act == 0:
            break
        u_n = rng.random(m_act)
        n_idx = n_orders - 1 - (u_n[:, None] <= q_cum[gid_s[:m_act], :-1]).sum(axis=1)
        ells = np.searchsorted(cum_term, rng.random(m_act), side="right")
        fast = n_idx == 0
        rows = row_idx[:m_act][fast]
        if rows.size:
            el = ells[fast]
            gathered = np.take_along_axis(psi[rows], g_tab[el], axis=1)
            psi[rows] = (cos0[rows, None] * psi[rows]
                         + isin0[rows, None] * (f_tab[el] * gathered))
        for row in row_idx[:m_act][~fast]:
            ni = int(n_idx[row])
            n = int(orders[ni])
            th = float(thetas[gid_s[row], ni]) * rot_sign[row]
            el0 = int(ells[row])
            vec = (math.cos(th) * psi[row]
                   + (1j * math.sin(th)) * (f_tab[el0] * psi[row][g_tab[el0]]))
            extra = np.searchsorted(cum_term, rng.random(n), side="right")
            for el in extra:
                vec = f_tab[el] * vec[g_tab[el]]
            if n % 4 != 0:
                vec = -vec
            psi[row] = vec
    z = psi @ psi0.conj()
    p_re = np.clip(0.5 * (1.0 + z.real), 0.0, 1.0)
    p_im = np.clip(0.5 * (1.0 + z.imag), 0.0, 1.0)
    m_re = np.where(rng.random(n_rec) < p_re, 1.0, -1.0)
    m_im = np.where(rng.random(n_rec) < p_im, 1.0, -1.0)
    m = (m_re + 1j * m_im)[inv_order]
    js_signed = plan.js[gid] * np.where(neg, -1, 1)
    return SampleSet(js=js_signed, m=m, plan=plan)


def _check_x(plan: Plan, x: float):
    if abs(x) > plan.x_max + 1e-12:
        raise ValueError(f"threshold x={x} outside certified window +-{plan.x_max:.6g}")


def acdf_estimate(samples: SampleSet, x: float) -> complex:
    """Re-phase the records into the ACDF estimate at threshold x."""
    plan = samples.plan
    _check_x(plan, x)
    if samples.js.size == 0:
        raise ValueError("empty sample set")
    sgn = np.sign(samples.js)
    phase = (-1j * sgn) * np.exp(1j * samples.js * x)
    a = plan.complexities.weight_A
    return complex(0.5 + a * np.mean(phase * samples.m))


def acdf_exact(plan: Plan, h: Hamiltonian, state: StateVector, x) -> float:
    """Exact approximate-CDF via the spectral oracle: sum_k w_k F(x - tau E_k)."""
    spec = exact_spectrum(h, state)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    args = xs[:, None] - plan.tau * spec.eigenvalues[None, :]
    vals = eval_fourier(plan.fourier, args.ravel()).reshape(args.shape)
    out = vals @ spec.overlaps
    return float(out[0]) if np.isscalar(x) else out


def threshold_query(samples: SampleSet, plan: Plan, x: float) -> int:
    """0 certifies C(x - delta) < eta, 1 certifies C(x + delta) > 0."""
    zbar = acdf_estimate(samples, x)
    return 0 if zbar.real < plan.eta / 2.0 else 1


@dataclass(frozen=True)
class GroundEnergyResult:
    estimate: float
    interval_lo: float
    interval_hi: float
    s_queries: int
    queries_used: int
    theta: float
    c_sample: int
    c_gate_expected: float
    seed: int | None = None

    def to_json_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "interval_lo": self.interval_lo,
            "interval_hi": self.interval_hi,
            "s_queries": self.s_queries,
            "theta": self.theta,
            "c_sample": self.c_sample,
            "c_gate_expected": self.c_gate_expected,
            "seed": self.seed,
        }


def plan_queries(tau: float, lam: float, delta: float) -> int:
    """Conservative bisection query count for the ground-state search."""
    return math.ceil(math.log2((2.0 * tau * lam + 4.0 * delta) / (2.0 * delta)))


def ground_energy(h: Hamiltonian, state: StateVector, Delta: float, eta: float,
                  xi: float, rng: np.random.Generator, b: float = 1.0,
                  rmode: str = "total", g: float | None = None,
                  eps: float | None = None, seed: int | None = None,
                  plan: Plan | None = None) -> GroundEnergyResult:
    """Estimate the lowest eigenvalue to within Delta with probability 1 - xi.

    Requires the promise tr[rho P_ground] >= eta (not detected if violated).
    One SampleSet is collected and reused across all bisection queries;
    each query errs with probability <= theta = xi / s, so the union bound
    over the s planned queries gives the overall guarantee.
    """
    if not 0.0 < xi < 1.0:
        raise ValueError("xi must lie in (0, 1)")
    if eps is None:
        eps = eta / 4.0
    if plan is None:
        tau = math.pi / (2.0 * h.lam / b + Delta)
        delta = 0.5 * tau * Delta
        s = plan_queries(tau, h.lam, delta)
        theta = xi / s
        plan = build_plan(h, Delta, eta, eps, theta, b=b, rmode=rmode, g=g,
                          delta_scale=0.5)
    else:
        tau, delta = plan.tau, plan.delta
        s = plan_queries(tau, h.lam, delta)
    samples = collect_samples(plan, state, rng)
    tl = plan.tau * h.lam
    # lo - delta = -tau lam - 2 delta < tau E_min, so lo acts as a virtual
    # answer 0; with the loop condition every midpoint stays above lo + delta
    # = -tau lam, inside the legal query window.
    lo = -tl - plan.delta
    hi = tl                       # virtual answer 1: tau E_min <= hi + delta
    used = 0
    while hi - lo > 2.0 * plan.delta:
        mid = 0.5 * (lo + hi)
        if threshold_query(samples, plan, mid) == 0:
            lo = mid
        else:
            hi = mid
        used += 1
        if used > s:
            raise RuntimeError("bisection exceeded planned query count")
    mid = 0.5 * (lo + hi)
    return GroundEnergyResult(
        estimate=mid / plan.tau,
        interval_lo=(lo - plan.delta) / plan.tau,
        interval_hi=(hi + plan.delta) / plan.tau,
        s_queries=s,
        queries_used=used,
        theta=plan.theta,
        c_sample=plan.complexities.c_sample,
        c_gate_expected=plan.complexities.c_gate,
        seed=seed,
    )
