"""Interval solver for u_t = u_xx + c(t) u^p with a memory boundary flux.

The outward slope at each endpoint equals k(t) times the accumulated history
integral of u^q there.  Diffusion is advanced implicitly (backward Euler on a
symmetrizable tridiagonal system, factor cached per step size); reaction and
boundary flux are explicit with a rate-controlled adaptive step, so blow-up is
resolved without coupling dt to h^2 on long global runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from .coeffs import CoefficientSpec, CumulativeIntegral, eval_coeff
from .errors import ConfigurationError, NotApplicableError, SolverFault

STATUS_BLOWUP = "BlowUp"
STATUS_GLOBAL = "GlobalToHorizon"
STATUS_ABORTED = "Aborted"

TRACE_HEADER = "t,sup_norm,mass_w,M_left,M_right,dt"

_SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# boundary rules

class MemoryRule:
    """Outward slope k(t) * M with plain accumulation M = int_0^t u_b^q."""

    def __init__(self, k: CoefficientSpec):
        self.k = k

    def slope(self, t: float, M: float) -> float:
        return eval_coeff(self.k, t) * M

    def acc_weight(self, t: float) -> float:
        return 1.0


def _exp(x: float) -> float:
    # math.exp raises OverflowError instead of returning inf
    return math.exp(x) if x < 709.0 else math.inf


class WeightedMemoryRule:
    """Outward slope k(t) e^{-C(t)} A with A = int_0^t e^{q C} v_b^q.

    This realizes the memory condition of the reaction-stripped problem: the
    t-dependent damping factors out of the history integral, so one scalar
    accumulator per endpoint suffices.
    """

    def __init__(self, k: CoefficientSpec, cum: CumulativeIntegral, q: float):
        self.k = k
        self.cum = cum
        self.q = q

    def slope(self, t: float, M: float) -> float:
        return eval_coeff(self.k, t) * math.exp(-self.cum(t)) * M

    def acc_weight(self, t: float) -> float:
        return _exp(self.q * self.cum(t))


class PrescribedFluxRule:
    """Time-prescribed outward slope g(t); no memory accumulation."""

    def __init__(self, g: Callable[[float], float]):
        self.g = g

    def slope(self, t: float, M: float) -> float:
        return float(self.g(t))

    def acc_weight(self, t: float) -> float:
        return 0.0


# ---------------------------------------------------------------------------
# scenario containers

INITIAL_FAMILIES = ("constant", "cos_bump", "tabulated")


@dataclass(frozen=True)
class InitialSpec:
    """Initial data with vanishing endpoint slope.

    constant:  u0 = value
    cos_bump:  u0 = value * (1 - cos(2 pi x / L)) / 2
    tabulated: node values (must match the grid; endpoint slope checked)
    """

    family: str
    value: object = 0.0

    def __post_init__(self):
        if self.family not in INITIAL_FAMILIES:
            raise ConfigurationError(f"unknown initial family {self.family!r}")
        if self.family == "tabulated":
            vals = self.value
            if not isinstance(vals, (list, tuple, np.ndarray)) or len(vals) < 3:
                raise ConfigurationError("tabulated initial data needs >= 3 node values")
            if any((not math.isfinite(float(v))) or float(v) < 0 for v in vals):
                raise ConfigurationError("initial data must be finite and >= 0")
        else:
            v = self.value
            if not isinstance(v, (int, float)) or not math.isfinite(v) or v < 0:
                raise ConfigurationError("initial amplitude must be finite and >= 0")

    def evaluate(self, length: float, n_nodes: int) -> np.ndarray:
        x = np.linspace(0.0, length, n_nodes)
        if self.family == "constant":
            return np.full(n_nodes, float(self.value))
        if self.family == "cos_bump":
            return float(self.value) * (1.0 - np.cos(2.0 * np.pi * x / length)) / 2.0
        vals = np.asarray(self.value, dtype=float)
        if vals.size != n_nodes:
            raise ConfigurationError(
                f"tabulated initial data has {vals.size} values; grid has {n_nodes}")
        h = length / (n_nodes - 1)
        amp = max(float(vals.max()), 1e-30)
        slope0 = abs(-3.0 * vals[0] + 4.0 * vals[1] - vals[2]) / (2.0 * h)
        slope1 = abs(3.0 * vals[-1] - 4.0 * vals[-2] + vals[-3]) / (2.0 * h)
        if max(slope0, slope1) > 1e-8 * amp:
            raise ConfigurationError(
                "tabulated initial data must have vanishing endpoint slope "
                f"(measured {max(slope0, slope1):.3e} vs {1e-8 * amp:.3e} allowed)")
        return vals.copy()

    def scaled(self, factor: float) -> "InitialSpec":
        if self.family == "tabulated":
            return InitialSpec("tabulated", tuple(factor * float(v) for v in self.value))
        return InitialSpec(self.family, factor * float(self.value))


@dataclass(frozen=True)
class SolverControls:
    n_nodes: int = 201
    theta: float = 0.1
    dt_max: float = 2e-3
    dt_init: Optional[float] = None
    blowup_threshold: float = 1e10
    t_max: float = 10.0
    snapshot_every: Optional[float] = None
    max_steps: int = 5_000_000

    def __post_init__(self):
        if int(self.n_nodes) != self.n_nodes or self.n_nodes < 3:
            raise ConfigurationError("node count must be an integer >= 3")
        if not (0.0 < self.theta <= 1.0):
            raise ConfigurationError("safety factor theta must lie in (0, 1]")
        if self.dt_max <= 0 or self.t_max <= 0 or self.blowup_threshold <= 0:
            raise ConfigurationError("dt_max, t_max, blowup_threshold must be > 0")
        if self.dt_init is not None and self.dt_init <= 0:
            raise ConfigurationError("dt_init must be > 0")
        if self.snapshot_every is not None and self.snapshot_every <= 0:
            raise ConfigurationError("snapshot_every must be > 0")
        if self.max_steps < 1:
            raise ConfigurationError("max_steps must be >= 1")

    def refined(self, levels: int) -> "SolverControls":
        """Halve the grid spacing and the safety factor `levels` times."""
        if levels < 0:
            raise ConfigurationError("refinement level must be >= 0")
        f = 2 ** levels
        return replace(self, n_nodes=(self.n_nodes - 1) * f + 1,
                       theta=self.theta / f)


@dataclass(frozen=True)
class Scenario:
    length: float
    p: float
    q: float
    c: CoefficientSpec
    k: CoefficientSpec
    u0: InitialSpec
    controls: SolverControls = field(default_factory=SolverControls)
    boundary: Optional[object] = None   # boundary rule override

    def __post_init__(self):
        if not (isinstance(self.length, (int, float)) and self.length > 0):
            raise ConfigurationError("domain length must be > 0")
        if self.p <= 0 or self.q <= 0:
            raise ConfigurationError("exponents p and q must be positive")
        for spec, name in ((self.c, "c"), (self.k, "k")):
            if not isinstance(spec, CoefficientSpec):
                raise ConfigurationError(f"{name} must be a CoefficientSpec")
        if not isinstance(self.u0, InitialSpec):
            raise ConfigurationError("u0 must be an InitialSpec")

    @property
    def h(self) -> float:
        return self.length / (self.controls.n_nodes - 1)

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.length, self.controls.n_nodes)

    def boundary_rule(self):
        return self.boundary if self.boundary is not None else MemoryRule(self.k)

    def initial_field(self) -> np.ndarray:
        return self.u0.evaluate(self.length, self.controls.n_nodes)


@dataclass
class State:
    t: float
    u: np.ndarray
    M_left: float
    M_right: float
    steps: int = 0

    @property
    def sup(self) -> float:
        return float(np.max(self.u))

    def mass(self, h: float) -> float:
        return float(np.trapezoid(self.u, dx=h))


@dataclass(frozen=True)
class BlowupEstimate:
    T_cross: float
    T_fit: Optional[float]
    fit_quality: Optional[float]


@dataclass
class Trace:
    t: np.ndarray
    sup_norm: np.ndarray
    mass_w: np.ndarray
    M_left: np.ndarray
    M_right: np.ndarray
    dt: np.ndarray


@dataclass
class SimulationOutcome:
    status: str
    t_end: float
    sup_norm_end: float
    trace: Trace
    snapshots: list
    blowup_estimate: Optional[BlowupEstimate] = None
    reason: str = ""


# ---------------------------------------------------------------------------
# diffusion solve

@lru_cache(maxsize=512)
def _banded_factor(n: int, h: float, dt: float):
    # symmetrized I - dt*D: scaling the end rows by 1/sqrt(2) makes the
    # ghost-node Neumann Laplacian symmetric; spectrum of D is <= 0, so the
    # system is SPD for every dt > 0
    r = dt / (h * h)
    ab = np.zeros((2, n))
    ab[1, :] = 1.0 + 2.0 * r
    ab[0, 1:] = -r
    ab[0, 1] = -r * _SQRT2
    ab[0, -1] = -r * _SQRT2
    return cholesky_banded(ab, lower=False)


def _solve_diffusion(rhs: np.ndarray, dt: float, h: float) -> np.ndarray:
    cb = _banded_factor(rhs.size, h, dt)
    b = rhs.copy()
    b[0] /= _SQRT2
    b[-1] /= _SQRT2
    v = cho_solve_banded((cb, False), b)
    v[0] *= _SQRT2
    v[-1] *= _SQRT2
    return v


# ---------------------------------------------------------------------------
# stepping

def step(state: State, scenario: Scenario, dt: float, rule=None) -> State:
    """One IMEX step: explicit reaction and boundary flux, implicit diffusion,
    then the trapezoid update of the memory accumulators."""
    if dt <= 0.0 or not math.isfinite(dt):
        raise ConfigurationError("dt must be positive and finite")
    rule = rule if rule is not None else scenario.boundary_rule()
    u = state.u
    h = scenario.h
    t = state.t
    c_t = eval_coeff(scenario.c, t)
    with np.errstate(over="ignore", invalid="ignore"):
        if c_t != 0.0:
            rhs = u + (dt * c_t) * np.power(u, scenario.p)
        else:
            rhs = u.copy()
        g_left = rule.slope(t, state.M_left)
        g_right = rule.slope(t, state.M_right)
        rhs[0] += dt * (2.0 / h) * g_left
        rhs[-1] += dt * (2.0 / h) * g_right

    if np.all(np.isfinite(rhs)):
        u_new = _solve_diffusion(rhs, dt, h)
        m = float(u_new.min())
        if m < 0.0:
            scale = max(float(u_new.max()), 1e-300)
            if m < -1e-10 * scale:
                raise SolverFault(
                    f"negative undershoot {m:.3e} at t={t:.6g} (dt too large)")
            np.clip(u_new, 0.0, None, out=u_new)
    else:
        # reaction or flux overflowed: blow-up trigger, not an error
        u_new = np.where(np.isfinite(rhs), rhs, np.inf)

    q = scenario.q
    w0 = rule.acc_weight(t)
    w1 = rule.acc_weight(t + dt)
    with np.errstate(over="ignore", invalid="ignore"):
        M_left = state.M_left + 0.5 * dt * (_acc_term(w0, float(u[0]), q)
                                            + _acc_term(w1, float(u_new[0]), q))
        M_right = state.M_right + 0.5 * dt * (_acc_term(w0, float(u[-1]), q)
                                              + _acc_term(w1, float(u_new[-1]), q))
    return State(t + dt, u_new, float(M_left), float(M_right), state.steps + 1)


def _acc_term(w: float, ub: float, q: float) -> float:
    # a vanished boundary value contributes nothing even if the weight overflowed
    if ub == 0.0:
        return 0.0
    return w * ub ** q


def choose_dt(state: State, scenario: Scenario, rule=None) -> float:
    """Rate-controlled step: the explicit reaction and flux terms may change u
    by about theta relative per step.  The quadratic flux term resolves
    boundary-driven blow-up, where the slope grows faster than the field."""
    ctr = scenario.controls
    rule = rule if rule is not None else scenario.boundary_rule()
    sup = state.sup
    t = state.t
    if sup <= 0.0:
        rate_react = 0.0
    else:
        s = sup if scenario.p >= 1.0 else max(sup, 1e-6)
        rate_react = eval_coeff(scenario.c, t) * s ** (scenario.p - 1.0)
    g_left = abs(rule.slope(t, state.M_left))
    g_right = abs(rule.slope(t, state.M_right))
    scale_left = max(float(state.u[0]), 1e-6 * sup, 1e-300)
    scale_right = max(float(state.u[-1]), 1e-6 * sup, 1e-300)
    nu = max(g_left / scale_left, g_right / scale_right)
    denom = rate_react + nu + nu * nu + 1e-30
    if not math.isfinite(denom):
        # runaway flux estimate; take a token step so the overflow lands in
        # the field and trips the blow-up threshold
        return ctr.dt_max * 2.0 ** -60
    dt = min(ctr.dt_max, ctr.theta / denom)
    if state.steps == 0:
        h = scenario.h
        dt = min(dt, ctr.dt_init if ctr.dt_init is not None else ctr.theta * h * h)
    return dt


def _ladder(dt: float, dt_max: float) -> float:
    """Round dt down to dt_max * 2^-k so the diffusion factor cache hits."""
    if dt >= dt_max:
        return dt_max
    k = math.ceil(math.log2(dt_max / dt))
    return dt_max * 2.0 ** (-k)


# ---------------------------------------------------------------------------
# full runs

def run(scenario: Scenario, rule=None) -> SimulationOutcome:
    """Advance until blow-up, the horizon, or an abort; record the trace at
    the snapshot cadence plus every step once the sup nears the threshold."""
    rule = rule if rule is not None else scenario.boundary_rule()
    ctr = scenario.controls
    h = scenario.h
    state = State(0.0, scenario.initial_field(), 0.0, 0.0)
    snap_dt = ctr.snapshot_every if ctr.snapshot_every is not None else ctr.t_max / 100.0
    next_snap = snap_dt
    dense_from = 0.01 * ctr.blowup_threshold

    rows = [(0.0, state.sup, state.mass(h), 0.0, 0.0, 0.0)]
    snapshots = [(0.0, state.u.copy())]
    status = None
    reason = ""

    while True:
        sup = state.sup
        if math.isnan(sup):
            status, reason = STATUS_ABORTED, "NaN detected in the field"
            break
        if sup >= ctr.blowup_threshold:
            status = STATUS_BLOWUP
            break
        if state.t >= ctr.t_max - 1e-12:
            status = STATUS_GLOBAL
            break
        if state.steps >= ctr.max_steps:
            status, reason = STATUS_ABORTED, "step budget exhausted"
            break

        dt = _ladder(choose_dt(state, scenario, rule), ctr.dt_max)
        while next_snap <= state.t + 1e-12:
            next_snap += snap_dt
        hit_snap = False
        if state.t + dt >= next_snap - 1e-12:
            dt = next_snap - state.t
            hit_snap = True
        if state.t + dt > ctr.t_max:
            dt = ctr.t_max - state.t
            hit_snap = False
        try:
            state = step(state, scenario, dt, rule)
        except SolverFault as fault:
            status, reason = STATUS_ABORTED, str(fault)
            break
        if hit_snap or state.sup >= dense_from or state.t >= ctr.t_max - 1e-12:
            rows.append((state.t, state.sup, state.mass(h),
                         state.M_left, state.M_right, dt))
        if hit_snap:
            snapshots.append((state.t, state.u.copy()))
            next_snap += snap_dt

    if rows[-1][0] != state.t:
        rows.append((state.t, state.sup, state.mass(h),
                     state.M_left, state.M_right, 0.0))
    if snapshots[-1][0] != state.t:
        snapshots.append((state.t, state.u.copy()))
    cols = [np.array(col) for col in zip(*rows)]
    trace = Trace(*cols)

    estimate = None
    if status == STATUS_BLOWUP:
        estimate = estimate_blowup_time(trace, scenario.p,
                                        threshold=ctr.blowup_threshold)
    t_end = state.t
    if status == STATUS_GLOBAL:
        t_end = max(t_end, ctr.t_max)
    return SimulationOutcome(status=status, t_end=t_end,
                             sup_norm_end=state.sup, trace=trace,
                             snapshots=snapshots, blowup_estimate=estimate,
                             reason=reason)


def estimate_blowup_time(trace: Trace, p: float,
                         threshold: float = 1e10) -> BlowupEstimate:
    """First threshold crossing, plus (for p > 1) the zero crossing of a line
    through the last 20 samples of sup^{1-p} against t."""
    above = np.nonzero(trace.sup_norm >= threshold)[0]
    if above.size == 0:
        raise NotApplicableError("trace never reaches the blow-up threshold")
    i = int(above[0])
    T_cross = float(trace.t[i])
    if p <= 1.0:
        return BlowupEstimate(T_cross, None, None)
    lo = i - 19
    if lo < 0:
        return BlowupEstimate(T_cross, None, None)
    ts = trace.t[lo:i + 1]
    ss = trace.sup_norm[lo:i + 1]
    keep = ss > 0
    if keep.sum() < 20 or np.unique(ts[keep]).size < 20:
        return BlowupEstimate(T_cross, None, None)
    g = ss[keep] ** (1.0 - p)
    tt = ts[keep]
    # centered least squares: the samples cluster tightly near the blow-up
    # time, where an uncentered normal-equation fit loses all precision
    t_bar = float(tt.mean())
    g_bar = float(g.mean())
    dt_c = tt - t_bar
    dg_c = g - g_bar
    s_tt = float(np.dot(dt_c, dt_c))
    s_tg = float(np.dot(dt_c, dg_c))
    s_gg = float(np.dot(dg_c, dg_c))
    if s_tt == 0.0:
        return BlowupEstimate(T_cross, None, None)
    m = s_tg / s_tt
    if m >= 0.0:
        return BlowupEstimate(T_cross, None, None)
    T_fit = t_bar - g_bar / m
    r2 = s_tg * s_tg / (s_tt * s_gg) if s_gg > 0.0 else 1.0
    return BlowupEstimate(T_cross, float(T_fit), r2)


# ---------------------------------------------------------------------------
# comparison and mass checks

@dataclass(frozen=True)
class ComparisonReport:
    holds: bool
    max_violation: float
    t_end: float
    truncated: bool
    note: str = ""


def verify_comparison(scenario_low: Scenario,
                      scenario_high: Scenario) -> ComparisonReport:
    """Run both problems on the low run's accepted step sequence and check
    u_low <= u_high (relative tolerance 1e-8) at every shared step."""
    a, b = scenario_low, scenario_high
    if (a.length, a.p, a.q, a.c, a.k, a.controls) != (b.length, b.p, b.q, b.c,
                                                      b.k, b.controls):
        raise ConfigurationError(
            "comparison scenarios must agree in everything except initial data")
    u0_low = a.initial_field()
    u0_high = b.initial_field()
    if np.any(u0_low > u0_high + 1e-15):
        raise ConfigurationError("low initial data must sit below high pointwise")
    if min(a.p, a.q) < 1.0 and not np.all(u0_low > 0):
        raise ConfigurationError(
            "sublinear exponents require strictly positive lower data")

    ctr = a.controls
    rule_a = a.boundary_rule()
    rule_b = b.boundary_rule()
    st_low = State(0.0, u0_low, 0.0, 0.0)
    st_high = State(0.0, u0_high, 0.0, 0.0)
    max_viol = 0.0
    truncated = False
    note = ""
    while True:
        sup_h = st_high.sup
        sup_l = st_low.sup
        if not math.isfinite(sup_h) or sup_h >= ctr.blowup_threshold:
            truncated, note = True, "high run reached the blow-up threshold"
            break
        if not math.isfinite(sup_l) or sup_l >= ctr.blowup_threshold:
            truncated, note = True, "low run reached the blow-up threshold"
            break
        if st_low.t >= ctr.t_max - 1e-12:
            break
        if st_low.steps >= ctr.max_steps:
            truncated, note = True, "step budget exhausted"
            break
        dt = _ladder(choose_dt(st_low, a, rule_a), ctr.dt_max)
        dt = min(dt, ctr.t_max - st_low.t)
        try:
            st_low = step(st_low, a, dt, rule_a)
            st_high = step(st_high, b, dt, rule_b)
        except SolverFault as fault:
            truncated, note = True, str(fault)
            break
        with np.errstate(invalid="ignore"):
            gap = float(np.max(st_low.u - st_high.u))
        if math.isfinite(gap) and math.isfinite(st_high.sup):
            viol = max(0.0, gap) / (1.0 + st_high.sup)
            max_viol = max(max_viol, viol)
    return ComparisonReport(holds=max_viol <= 1e-8, max_violation=max_viol,
                            t_end=st_low.t, truncated=truncated, note=note)


def mass_inequality_check(trace, scenario: Scenario,
                          sup_cap: float = 1e6) -> float:
    """Max deficit of w' >= |Omega|^{1-p} c(t) w^p over the recorded trace.

    Accepts a Trace or a SimulationOutcome.  Rows with sup norm above sup_cap
    are excluded: finite differencing of w across near-blow-up rows measures
    only the recording cadence.
    """
    if scenario.p < 1.0:
        raise NotApplicableError("the mass inequality needs p >= 1 (convexity)")
    tr = trace.trace if isinstance(trace, SimulationOutcome) else trace
    keep = tr.sup_norm <= sup_cap
    t = tr.t[keep]
    w = tr.mass_w[keep]
    t, idx = np.unique(t, return_index=True)
    w = w[idx]
    if t.size < 3:
        raise NotApplicableError("trace has fewer than 3 usable rows")
    dwdt = np.gradient(w, t)
    L = scenario.length
    lower = L ** (1.0 - scenario.p) * eval_coeff(scenario.c, t) * w ** scenario.p
    deficit = lower - dwdt
    return float(np.max(deficit[1:-1], initial=0.0))
