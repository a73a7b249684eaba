"""Time-dependent coefficient families and improper-integral verdicts.

The solver and the regime classifier consume nonnegative continuous
coefficients of time.  Five parametric families cover the regimes the
classifier distinguishes; each family knows its own tail behavior, so
convergence questions are answered in closed form whenever possible and by
a guarded numerical protocol otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from .errors import ConfigurationError, DomainError, NotApplicableError

FAMILIES = ("constant", "power", "exp_decay", "power_log", "tabulated")

CONVERGES = "Converges"
DIVERGES = "Diverges"
INDETERMINATE = "Indeterminate"

_EXP_TOL = 1e-12  # tolerance when comparing exponents for borderline cases


# ---------------------------------------------------------------------------
# iterated logarithms

def log_tower(j: int) -> float:
    """T_j, the tower of exponentials: T_0 = 1, T_1 = e, T_2 = e^e, ..."""
    if j < 0:
        raise DomainError("tower height must be >= 0")
    t = 1.0
    for _ in range(j):
        t = math.exp(t)
    return t


def iterated_log(j: int, t):
    """ln_j t  (ln_1 = ln, ln_{j+1} = ln o ln_j).  Requires t > T_{j-1}."""
    if j < 1:
        raise DomainError("iterated_log depth must be >= 1")
    threshold = log_tower(j - 1)
    arr = np.asarray(t, dtype=float)
    if np.any(arr <= threshold):
        raise DomainError(
            f"iterated_log depth {j} needs t > {threshold!r}; got min {arr.min()!r}"
        )
    v = np.log(arr)
    for _ in range(j - 1):
        v = np.log(v)
    return float(v) if np.isscalar(t) or arr.ndim == 0 else v


def log_product(j: int, t):
    """l_j(t) = prod_{i=1..j} ln_i t, with l_0 = 1."""
    if j < 0:
        raise DomainError("log_product depth must be >= 0")
    if j == 0:
        arr = np.asarray(t, dtype=float)
        out = np.ones_like(arr)
        return 1.0 if arr.ndim == 0 else out
    threshold = log_tower(j - 1)
    arr = np.asarray(t, dtype=float)
    if np.any(arr <= threshold):
        raise DomainError(
            f"log_product depth {j} needs t > {threshold!r}; got min {arr.min()!r}"
        )
    v = np.log(arr)
    prod = v.copy() if v.ndim else np.array(v)
    for _ in range(j - 1):
        v = np.log(v)
        prod = prod * v
    return float(prod) if arr.ndim == 0 else prod


def log_product_weighted(j: int, gamma: float, t):
    """l_{j,gamma}(t) = l_j(t) * (ln_j t)^gamma.  Requires j >= 1."""
    if j < 1:
        raise DomainError("log_product_weighted depth must be >= 1")
    return log_product(j, t) * iterated_log(j, t) ** gamma


# ---------------------------------------------------------------------------
# coefficient specs

@dataclass(frozen=True)
class CoefficientSpec:
    """One nonnegative coefficient of time.

    family
        "constant":  c0
        "power":     c0 * (1+t)^(-gamma)
        "exp_decay": c0 * exp(-lam*t)
        "power_log": c0 / ((T_j+t)^gamma * l_j(T_j+t) * ln_j(T_j+t)^log_power),
                     shifted by the tower T_j so every log factor is >= 1 at t=0.
                     With log_depth == 0 the log factors are absent and the family
                     coincides with "power" (log_power is inert).
        "tabulated": piecewise-linear through `table`, constant extrapolation
                     of the first/last value, times `amplitude`.
    """

    family: str
    amplitude: float = 1.0
    gamma: float = 0.0
    lam: float = 0.0
    log_depth: int = 0
    log_power: float = 0.0
    table: Optional[tuple[tuple[float, float], ...]] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(f"unknown coefficient family {self.family!r}")
        if not math.isfinite(self.amplitude) or self.amplitude < 0:
            raise ConfigurationError("amplitude must be finite and >= 0")
        if not math.isfinite(self.gamma):
            raise ConfigurationError("gamma must be finite")
        if self.family in ("power", "power_log") and self.gamma < 0:
            raise ConfigurationError("gamma must be >= 0")
        if not math.isfinite(self.lam) or self.lam < 0:
            raise ConfigurationError("lambda must be finite and >= 0")
        if int(self.log_depth) != self.log_depth or self.log_depth < 0:
            raise ConfigurationError("log_depth must be a nonnegative integer")
        if self.log_power < 0:
            raise ConfigurationError("log_power must be >= 0")
        if self.family == "tabulated":
            if not self.table:
                raise ConfigurationError("tabulated family needs a nonempty table")
            ts = [row[0] for row in self.table]
            vs = [row[1] for row in self.table]
            if any(b <= a for a, b in zip(ts, ts[1:])):
                raise ConfigurationError("table times must be strictly increasing")
            if ts[0] < 0:
                raise ConfigurationError("table times must be >= 0")
            if any(v < 0 or not math.isfinite(v) for v in vs):
                raise ConfigurationError("table values must be finite and >= 0")
        elif self.table is not None:
            raise ConfigurationError("only the tabulated family carries a table")

    # -- constructors ------------------------------------------------------
    @classmethod
    def constant(cls, c0: float) -> "CoefficientSpec":
        return cls("constant", amplitude=c0)

    @classmethod
    def power(cls, c0: float, gamma: float) -> "CoefficientSpec":
        return cls("power", amplitude=c0, gamma=gamma)

    @classmethod
    def exp_decay(cls, c0: float, lam: float) -> "CoefficientSpec":
        return cls("exp_decay", amplitude=c0, lam=lam)

    @classmethod
    def power_log(cls, c0: float, gamma: float, log_depth: int,
                  log_power: float = 0.0) -> "CoefficientSpec":
        return cls("power_log", amplitude=c0, gamma=gamma,
                   log_depth=log_depth, log_power=log_power)

    @classmethod
    def tabulated(cls, table: Sequence[Sequence[float]],
                  amplitude: float = 1.0) -> "CoefficientSpec":
        rows = tuple((float(a), float(b)) for a, b in table)
        return cls("tabulated", amplitude=amplitude, table=rows)

    def __call__(self, t):
        return eval_coeff(self, t)

    @property
    def is_zero(self) -> bool:
        if self.amplitude == 0.0:
            return True
        if self.family == "tabulated":
            return all(v == 0.0 for _, v in self.table)
        return False


ZERO = CoefficientSpec.constant(0.0)


def eval_coeff(spec: CoefficientSpec, t):
    """Evaluate the coefficient at t (scalar or array), t >= 0."""
    if isinstance(t, (int, float)):
        tf = float(t)
        if tf < 0:
            raise DomainError("coefficients are defined for t >= 0")
        fam = spec.family
        if fam == "constant":
            return spec.amplitude
        if fam == "power":
            return spec.amplitude * (1.0 + tf) ** (-spec.gamma)
        if fam == "exp_decay":
            return spec.amplitude * math.exp(-spec.lam * tf)
        if fam == "power_log":
            s = log_tower(spec.log_depth) + tf
            denom = s ** spec.gamma * log_product(spec.log_depth, s)
            if spec.log_depth >= 1 and spec.log_power != 0.0:
                denom *= iterated_log(spec.log_depth, s) ** spec.log_power
            return spec.amplitude / denom
        ts = np.array([row[0] for row in spec.table])
        vs = np.array([row[1] for row in spec.table])
        return spec.amplitude * float(np.interp(tf, ts, vs))

    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise DomainError("coefficients are defined for t >= 0")
    fam = spec.family
    if fam == "constant":
        return np.full_like(arr, spec.amplitude)
    if fam == "power":
        return spec.amplitude * (1.0 + arr) ** (-spec.gamma)
    if fam == "exp_decay":
        return spec.amplitude * np.exp(-spec.lam * arr)
    if fam == "power_log":
        s = log_tower(spec.log_depth) + arr
        denom = s ** spec.gamma * log_product(spec.log_depth, s)
        if spec.log_depth >= 1 and spec.log_power != 0.0:
            denom = denom * iterated_log(spec.log_depth, s) ** spec.log_power
        return spec.amplitude / denom
    ts = np.array([row[0] for row in spec.table])
    vs = np.array([row[1] for row in spec.table])
    return spec.amplitude * np.interp(arr, ts, vs)


def coefficient_sup(spec: CoefficientSpec, t_max: float, samples: int = 10001) -> float:
    """sup of the coefficient on [0, t_max].

    The four analytic families are nonincreasing, so the sup sits at t = 0;
    a dense sample is taken anyway and the max of both answers returned.
    """
    analytic = eval_coeff(spec, 0.0)
    if spec.family == "tabulated":
        ts = np.array([row[0] for row in spec.table])
        inside = ts[(ts >= 0) & (ts <= t_max)]
        cand = eval_coeff(spec, inside) if inside.size else np.array([])
        analytic = max([analytic, eval_coeff(spec, t_max)] + list(cand))
    grid = np.linspace(0.0, t_max, samples)
    return float(max(analytic, eval_coeff(spec, grid).max()))


# ---------------------------------------------------------------------------
# JSON mapping

def spec_to_json(spec: CoefficientSpec) -> dict:
    d = {"family": spec.family, "amplitude": spec.amplitude}
    if spec.family == "power":
        d["gamma"] = spec.gamma
    elif spec.family == "exp_decay":
        d["lambda"] = spec.lam
    elif spec.family == "power_log":
        d["gamma"] = spec.gamma
        d["log_depth"] = spec.log_depth
        d["log_power"] = spec.log_power
    elif spec.family == "tabulated":
        d["table"] = [[a, b] for a, b in spec.table]
    return d


_JSON_KEYS = {
    "constant": {"family", "amplitude"},
    "power": {"family", "amplitude", "gamma"},
    "exp_decay": {"family", "amplitude", "lambda"},
    "power_log": {"family", "amplitude", "gamma", "log_depth", "log_power"},
    "tabulated": {"family", "amplitude", "table"},
}


def spec_from_json(doc: dict, where: str = "coefficient") -> CoefficientSpec:
    if not isinstance(doc, dict):
        raise ConfigurationError(f"{where} must be an object")
    family = doc.get("family")
    if family not in FAMILIES:
        raise ConfigurationError(f"{where}.family must be one of {FAMILIES}")
    allowed = _JSON_KEYS[family]
    for key in doc:
        if key not in allowed:
            raise ConfigurationError(f"unknown key {key!r} in {where}")
    try:
        if family == "tabulated":
            return CoefficientSpec.tabulated(doc["table"],
                                             amplitude=doc.get("amplitude", 1.0))
        return CoefficientSpec(
            family,
            amplitude=doc.get("amplitude", 1.0),
            gamma=doc.get("gamma", 0.0),
            lam=doc.get("lambda", 0.0),
            log_depth=doc.get("log_depth", 0),
            log_power=doc.get("log_power", 0.0),
        )
    except KeyError as exc:
        raise ConfigurationError(f"{where} is missing required key {exc}") from exc
    except ConfigurationError as exc:
        raise ConfigurationError(f"{where}: {exc}") from exc


# ---------------------------------------------------------------------------
# cumulative integrals

class CumulativeIntegral:
    """C(t) = int_0^t f, plus tails and log-domain exponential integrals."""

    def __init__(self, spec: CoefficientSpec):
        self.spec = spec
        self._knots_t = [0.0]
        self._knots_c = [0.0]

    def __call__(self, t):
        sp = self.spec
        scalar = isinstance(t, (int, float))
        arr = np.asarray(t, dtype=float)
        if np.any(arr < 0):
            raise DomainError("cumulative integral defined for t >= 0")
        if sp.family == "constant":
            out = sp.amplitude * arr
        elif sp.family == "power":
            if abs(sp.gamma - 1.0) <= _EXP_TOL:
                out = sp.amplitude * np.log1p(arr)
            else:
                out = sp.amplitude * ((1.0 + arr) ** (1.0 - sp.gamma) - 1.0) / (1.0 - sp.gamma)
        elif sp.family == "exp_decay":
            if sp.lam == 0.0:
                out = sp.amplitude * arr
            else:
                out = sp.amplitude * (-np.expm1(-sp.lam * arr)) / sp.lam
        elif sp.family == "tabulated":
            out = self._tabulated_cumulative(arr)
        else:
            out = self._numeric_cumulative(arr)
        return float(out) if scalar or arr.ndim == 0 else out

    def _tabulated_cumulative(self, arr):
        sp = self.spec
        ts = np.array([0.0] + [row[0] for row in sp.table if row[0] > 0.0])
        vs = eval_coeff(sp, ts)
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (vs[1:] + vs[:-1]) * np.diff(ts))])
        flat = np.atleast_1d(arr)
        out = np.empty_like(flat)
        for i, t in enumerate(flat):
            j = np.searchsorted(ts, t, side="right") - 1
            if j >= len(ts) - 1:
                out[i] = cum[-1] + eval_coeff(sp, float(ts[-1])) * (t - ts[-1])
            else:
                fa = vs[j]
                fb = eval_coeff(sp, float(t))
                out[i] = cum[j] + 0.5 * (fa + fb) * (t - ts[j])
        return out.reshape(np.shape(arr))

    def _numeric_cumulative(self, arr):
        flat = np.atleast_1d(arr)
        out = np.empty_like(flat)
        for i, t in enumerate(flat):
            out[i] = self._numeric_scalar(float(t))
        return out.reshape(np.shape(arr))

    def _numeric_scalar(self, t: float) -> float:
        # extend the knot cache monotonically; integrand is smooth and decreasing
        kt, kc = self._knots_t, self._knots_c
        if t <= kt[-1]:
            j = int(np.searchsorted(kt, t, side="right")) - 1
            if kt[j] == t:
                return kc[j]
            val, _ = integrate.quad(lambda x: eval_coeff(self.spec, x), kt[j], t,
                                    epsabs=1e-12, epsrel=1e-10, limit=200)
            return kc[j] + val
        while kt[-1] < t:
            nxt = min(t, max(kt[-1] * 2.0, kt[-1] + 1.0))
            val, _ = integrate.quad(lambda x: eval_coeff(self.spec, x), kt[-1], nxt,
                                    epsabs=1e-12, epsrel=1e-10, limit=200)
            kt.append(nxt)
            kc.append(kc[-1] + val)
        return kc[-1]

    def tail(self, t: float) -> float:
        """int_t^inf f.  Raises NotApplicableError when divergent."""
        verdict = integrate_improper(self.spec, weight=0.0, t_lower=t)
        if verdict.status != CONVERGES:
            raise NotApplicableError(
                f"tail integral from {t} does not converge ({verdict.status})")
        return verdict.value

    def log_int_exp(self, t: float, mult: float) -> float:
        """ln of int_0^t exp(mult * C(tau)) dtau, evaluated without overflow."""
        if t < 0:
            raise DomainError("log_int_exp defined for t >= 0")
        if t == 0.0:
            return -math.inf
        sp = self.spec
        if mult == 0.0 or sp.is_zero:
            return math.log(t)
        if sp.family == "constant":
            r = mult * sp.amplitude
            # int_0^t e^{r tau} = (e^{rt} - 1)/r
            return r * t + math.log1p(-math.exp(-r * t)) - math.log(r)
        if sp.family == "power" and abs(sp.gamma - 1.0) <= _EXP_TOL:
            e = mult * sp.amplitude
            # int_0^t (1+tau)^e = ((1+t)^{e+1} - 1)/(e+1)
            return ((e + 1.0) * math.log1p(t)
                    + math.log1p(-(1.0 + t) ** (-(e + 1.0)))
                    - math.log(e + 1.0))
        ct = self(t)

        def g(tau):
            return math.exp(min(mult * (self(tau) - ct), 0.0))

        # integrand peaks at tau = t with width ~ 1/(mult * f(t)); hint quad
        rate = mult * max(eval_coeff(sp, t), 1e-300)
        width = 1.0 / rate
        hints = {max(0.0, t - k * width) for k in (1.0, 3.0, 10.0, 30.0)}
        if sp.family == "tabulated":
            hints.update(row[0] for row in sp.table)
        pts = sorted(p for p in hints if 0.0 < p < t)
        val, _ = integrate.quad(g, 0.0, t, points=pts or None,
                                epsabs=1e-14, epsrel=1e-10, limit=200)
        val = max(val, 1e-300)
        return mult * ct + math.log(val)


# ---------------------------------------------------------------------------
# asymptotic growth forms

@dataclass(frozen=True)
class GrowthForm:
    """Envelope  C * e^{exp_rate t} * e^{stretch_rate t^stretch_pow} * t^power * prod ln_i(t)^logs[i]."""

    exp_rate: float = 0.0
    stretch_rate: float = 0.0
    stretch_pow: float = 0.0
    power: float = 0.0
    logs: tuple[float, ...] = ()
    zero: bool = False

    def times(self, other: "GrowthForm") -> "GrowthForm":
        if self.zero or other.zero:
            return GrowthForm(zero=True)
        if self.stretch_rate and other.stretch_rate and \
                abs(self.stretch_pow - other.stretch_pow) > _EXP_TOL:
            raise NotApplicableError("incompatible stretched-exponential factors")
        sp = self.stretch_pow if self.stretch_rate else other.stretch_pow
        n = max(len(self.logs), len(other.logs))
        logs = tuple(
            (self.logs[i] if i < len(self.logs) else 0.0)
            + (other.logs[i] if i < len(other.logs) else 0.0)
            for i in range(n)
        )
        return GrowthForm(
            exp_rate=self.exp_rate + other.exp_rate,
            stretch_rate=self.stretch_rate + other.stretch_rate,
            stretch_pow=sp,
            power=self.power + other.power,
            logs=logs,
        )


def power_weight_form(a: float) -> GrowthForm:
    return GrowthForm(power=a)


def growth_form(spec: CoefficientSpec) -> Optional[GrowthForm]:
    """Tail growth form of a family, or None when unknown (tabulated)."""
    if spec.is_zero:
        return GrowthForm(zero=True)
    fam = spec.family
    if fam == "constant":
        return GrowthForm()
    if fam == "power":
        return GrowthForm(power=-spec.gamma)
    if fam == "exp_decay":
        if spec.lam == 0.0:
            return GrowthForm()
        return GrowthForm(exp_rate=-spec.lam)
    if fam == "power_log":
        j = spec.log_depth
        logs = ()
        if j >= 1:
            logs = (-1.0,) * (j - 1) + (-(1.0 + spec.log_power),)
        return GrowthForm(power=-spec.gamma, logs=logs)
    return None


def tail_verdict(form: GrowthForm) -> tuple[str, str]:
    """(status, reason) for int^inf of a function with the given growth form."""
    if form.zero:
        return CONVERGES, "integrand vanishes identically"
    if form.exp_rate > _EXP_TOL:
        return DIVERGES, f"exponential growth rate {form.exp_rate:.6g}"
    if form.exp_rate < -_EXP_TOL:
        return CONVERGES, f"exponential decay rate {form.exp_rate:.6g}"
    if form.stretch_rate > _EXP_TOL:
        return DIVERGES, f"stretched-exponential growth ~ exp({form.stretch_rate:.4g} t^{form.stretch_pow:.4g})"
    if form.stretch_rate < -_EXP_TOL:
        return CONVERGES, f"stretched-exponential decay ~ exp({form.stretch_rate:.4g} t^{form.stretch_pow:.4g})"
    if form.power > -1.0 + _EXP_TOL:
        return DIVERGES, f"tail ~ t^{form.power:.6g} with exponent > -1"
    if form.power < -1.0 - _EXP_TOL:
        return CONVERGES, f"tail ~ t^{form.power:.6g} with exponent < -1"
    # harmonic borderline: ladder of iterated-log exponents
    for i, e in enumerate(form.logs, start=1):
        if e > -1.0 + _EXP_TOL:
            return DIVERGES, f"harmonic tail, ln_{i} exponent {e:.6g} > -1"
        if e < -1.0 - _EXP_TOL:
            return CONVERGES, f"harmonic tail, ln_{i} exponent {e:.6g} < -1"
    return DIVERGES, "harmonic tail with all iterated-log exponents = -1"


# ---------------------------------------------------------------------------
# improper integrals

@dataclass(frozen=True)
class IntegralVerdict:
    status: str
    value: Optional[float]
    evidence: str

    @property
    def converges(self) -> bool:
        return self.status == CONVERGES

    @property
    def diverges(self) -> bool:
        return self.status == DIVERGES


@dataclass(frozen=True)
class QuadraturePolicy:
    t_max: float = 1e9
    eps_flat: float = 1e-6        # relative decade increment that counts as flat
    ratio_converge: float = 0.9   # sustained decade ratio below this => geometric tail
    ratio_drift: float = 0.005    # max allowed drift among the final ratios
    ratio_diverge: float = 0.999  # sustained ratio at/above this => still growing
    force_numeric: bool = False


DEFAULT_POLICY = QuadraturePolicy()


def _parse_weight(weight):
    """-> (power_exponent or None, callable)."""
    if weight is None:
        return 0.0, (lambda t: np.ones_like(np.asarray(t, dtype=float)))
    if isinstance(weight, str):
        w = weight.strip().lower()
        if w in ("1", "one"):
            return 0.0, (lambda t: np.ones_like(np.asarray(t, dtype=float)))
        if w == "t":
            return 1.0, (lambda t: np.asarray(t, dtype=float))
        raise ConfigurationError(f"unknown weight descriptor {weight!r}")
    if isinstance(weight, (int, float)):
        a = float(weight)
        if a == 0.0:
            return 0.0, (lambda t: np.ones_like(np.asarray(t, dtype=float)))
        return a, (lambda t: np.asarray(t, dtype=float) ** a)
    if isinstance(weight, tuple) and len(weight) == 2 and weight[0] == "power":
        return _parse_weight(float(weight[1]))
    if callable(weight):
        return None, weight
    raise ConfigurationError(f"unknown weight descriptor {weight!r}")


def integrate_improper(spec: CoefficientSpec, weight="1", t_lower: float = 0.0,
                       policy: Optional[QuadraturePolicy] = None, *,
                       weight_form: Optional[GrowthForm] = None) -> IntegralVerdict:
    """Verdict on int_{t_lower}^inf weight(t) * spec(t) dt.

    Closed-form families get an analytic verdict; tabulated specs and callable
    weights without a declared growth form go through the numerical protocol.
    """
    if t_lower < 0:
        raise DomainError("t_lower must be >= 0")
    policy = policy or DEFAULT_POLICY
    a, wfun = _parse_weight(weight)

    def integrand(t):
        return wfun(t) * eval_coeff(spec, t)

    points = None
    if spec.family == "tabulated":
        points = [row[0] for row in spec.table]

    if policy.force_numeric:
        return _numeric_verdict(integrand, t_lower, policy, points)

    form = growth_form(spec)
    wform = power_weight_form(a) if a is not None else weight_form
    if form is None or wform is None:
        return _numeric_verdict(integrand, t_lower, policy, points)

    try:
        total = form.times(wform)
    except NotApplicableError:
        return _numeric_verdict(integrand, t_lower, policy, points)
    status, reason = tail_verdict(total)
    if status == DIVERGES:
        return IntegralVerdict(DIVERGES, None, f"closed form: {reason}")
    if total.zero:
        return IntegralVerdict(CONVERGES, 0.0, "closed form: integrand identically zero")
    value, note = _convergent_value(integrand, t_lower, spec, total)
    return IntegralVerdict(CONVERGES, value, f"closed form: {reason}{note}")


def _convergent_value(integrand, t_lower, spec, form: GrowthForm):
    """Numerical value of a convergent improper integral."""
    borderline = abs(form.power + 1.0) <= 1e-9 and form.logs
    if borderline and spec.family == "power_log":
        # slow iterated-log decay: decade panels to t_cut, then the tail in
        # closed form (the integrand is the derivative of -ln_j^{-delta}/delta
        # up to a factor that is 1 + O(T_j/t_cut) at the cut)
        t_cut = max(t_lower, 1e8)
        body = 0.0
        a = t_lower
        while a < t_cut:
            b = min(max(a * 10.0, 1.0), t_cut)
            body += _panel(integrand, a, b, None)
            a = b
        delta = -(form.logs[-1] + 1.0)  # ln_j exponent is -(1+delta)
        j = spec.log_depth
        s = log_tower(j) + t_cut
        tail = spec.amplitude * iterated_log(j, s) ** (-delta) / delta
        return body + tail, f"; slow-log tail beyond {t_cut:.3g} added in closed form"
    try:
        with np.errstate(all="ignore"):
            val, err = integrate.quad(lambda t: float(integrand(t)),
                                      t_lower, np.inf, limit=400)
        if math.isfinite(val) and err <= 1e-6 * max(1.0, abs(val)):
            return val, ""
    except Exception:
        pass
    # fall back to decade summation with a geometric tail estimate
    verdict = _numeric_verdict(integrand, t_lower, DEFAULT_POLICY, None)
    if verdict.value is not None:
        return verdict.value, "; value from decade summation"
    return math.nan, "; value unresolved numerically"


def numeric_improper(f: Callable, t_lower: float = 0.0,
                     policy: Optional[QuadraturePolicy] = None,
                     points: Optional[Sequence[float]] = None) -> IntegralVerdict:
    """Decade protocol on an arbitrary scalar integrand callable."""
    return _numeric_verdict(f, t_lower, policy or DEFAULT_POLICY, points)


def _panel(f, a, b, points):
    pts = None
    if points:
        pts = [p for p in points if a < p < b][:50] or None
    with np.errstate(all="ignore"):
        val, _ = integrate.quad(lambda t: float(f(t)), a, b, points=pts, limit=200)
    return val


def _numeric_verdict(f, t_lower, policy: QuadraturePolicy, points) -> IntegralVerdict:
    tiny = 1e-300
    start = max(t_lower, 1.0)
    total = _panel(f, t_lower, start, points) if start > t_lower else 0.0
    incs: list[float] = []
    a = start
    while a < policy.t_max:
        b = min(a * 10.0, policy.t_max)
        inc = _panel(f, a, b, points)
        if not math.isfinite(inc):
            return IntegralVerdict(DIVERGES, None,
                                   "numeric: integrand overflows on a finite panel")
        incs.append(inc)
        total += inc
        if len(incs) >= 2:
            prev = incs[-2]
            if abs(inc) <= tiny and abs(prev) <= tiny:
                return IntegralVerdict(CONVERGES, total,
                                       "numeric: tail vanishes beyond the data")
            rel = abs(inc) / max(abs(total), tiny)
            if rel < policy.eps_flat and inc <= prev:
                r = inc / prev if prev > tiny else 0.0
                tail = inc * r / (1.0 - r) if 0.0 <= r < 1.0 else 0.0
                return IntegralVerdict(
                    CONVERGES, total + tail,
                    f"numeric: decade increments flattened (relative {rel:.2e})")
        if len(incs) >= 4:
            r3 = [incs[i] / incs[i - 1] for i in range(len(incs) - 3, len(incs))
                  if incs[i - 1] > tiny]
            if len(r3) == 3 and min(r3) >= 1.2:
                return IntegralVerdict(DIVERGES, None,
                                       "numeric: decade increments growing")
        a = b
    if len(incs) >= 4:
        rs = [incs[i] / incs[i - 1] for i in range(len(incs) - 3, len(incs))
              if incs[i - 1] > tiny]
        if len(rs) == 3:
            if min(rs) >= policy.ratio_diverge or rs[-1] > 1.0:
                return IntegralVerdict(
                    DIVERGES, None,
                    f"numeric: partial sums still growing at t={policy.t_max:.3g}"
                    f" (decade ratio {rs[-1]:.4f})")
            if max(rs) < policy.ratio_converge and max(rs) - min(rs) < policy.ratio_drift:
                r = rs[-1]
                tail = incs[-1] * r / (1.0 - r)
                return IntegralVerdict(
                    CONVERGES, total + tail,
                    f"numeric: stable geometric decade decay (ratio {r:.4f})")
    return IntegralVerdict(
        INDETERMINATE, None,
        f"numeric: undecided at t={policy.t_max:.3g}; partial sum {total:.6g}")


# ---------------------------------------------------------------------------
# square-root-window supremum

def sqrt_window_integral(flux: Callable, t: float, t0: float, nodes: int = 48) -> float:
    """int_{t-t0}^{t} flux(tau)/sqrt(t-tau) dtau via the substitution tau = t - s^2.

    The substitution removes the endpoint singularity exactly:
    the integral equals 2 * int_0^{sqrt(t0)} flux(t - s^2) ds.
    """
    if t < t0:
        raise DomainError("window integral needs t >= t0")
    x, w = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * math.sqrt(t0)
    s = half * (x + 1.0)
    return float(2.0 * half * np.sum(w * flux(t - s * s)))


@dataclass(frozen=True)
class WindowBound:
    k_sup: float
    holds: bool
    probe_times: np.ndarray
    values: np.ndarray


def memory_window_check(k: CoefficientSpec, t0: float = 1.0, alpha: float = 2.0,
                        t_probe: float = 1e4, n_probes: int = 120,
                        nodes: int = 48, flux: Optional[Callable] = None) -> WindowBound:
    """Supremum over t in [alpha, t_probe] of the sqrt-window integral of tau*k(tau).

    `holds` reports whether the running sup has stabilized: the last probed
    decade adds nothing beyond the earlier maximum (within 0.1%).
    """
    if alpha < t0:
        raise DomainError("probe start must be >= the window width t0")
    if flux is None:
        def flux(ts):
            return np.asarray(ts, dtype=float) * eval_coeff(k, ts)
    times = np.geomspace(alpha, t_probe, n_probes)
    vals = np.array([sqrt_window_integral(flux, float(t), t0, nodes) for t in times])
    k_sup = float(vals.max())
    early_mask = times <= t_probe / 10.0
    if not early_mask.any():
        early_mask = times <= times[max(1, len(times) // 4)]
    k_early = float(vals[early_mask].max())
    holds = k_sup <= k_early * (1.0 + 1e-3) + 1e-12 * (1.0 + abs(k_early))
    return WindowBound(k_sup=k_sup, holds=bool(holds), probe_times=times, values=vals)
