"""Simulated T1/T2 estimation experiments and exponential-decay fitting.

Three experiments are modeled: population inversion (amplitude damping rate),
static Ramsey, and the Ramsey experiment averaged over equatorial preparation
angles.  All return noiseless expectation values by default; binomial shot
noise can be switched on for finite-statistics studies.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from gdbench.channels import _expm1_over
from gdbench.eigen import eigensystem_exact
from gdbench.model import PerturbedGDParams, SpamParams, bloch_generator

NO_SPAM = SpamParams()


@dataclass(frozen=True)
class DecaySeries:
    """Time-stamped expectation values of one decay experiment."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape or t.ndim != 1:
            raise ValueError("times and values must be 1-d arrays of equal length")
        if t.size and (np.any(np.diff(t) <= 0) or t[0] < 0):
            raise ValueError("times must be nonnegative and strictly increasing")
        t.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("time,value\n")
        for t, v in zip(self.times, self.values):
            buf.write(f"{t:.17g},{v:.17g}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "DecaySeries":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        if not lines or lines[0].split(",")[:2] != ["time", "value"]:
            raise ValueError("expected header 'time,value'")
        pairs = [ln.split(",") for ln in lines[1:]]
        times = np.array([float(p[0]) for p in pairs])
        values = np.array([float(p[1]) for p in pairs])
        return cls(times=times, values=values)


@dataclass(frozen=True)
class FitResult:
    """Parameters of c1 * exp(-rate * t) + c0 fitted to a decay series."""

    c1: float
    rate: float
    c0: float
    rms_residual: float
    converged: bool
    iterations: int


def apply_spam(trace_value, spam: SpamParams):
    """Measurement distortion: v -> (1 - n1) v + n2.

    Preparation shrinkage (1 - k) is applied where the initial Bloch vector
    is built, not here.
    """
    return (1.0 - spam.n1) * trace_value + spam.n2


def _maybe_shot_noise(values, shots, rng):
    if shots is None:
        return values
    if rng is None:
        raise ValueError("shot noise requires an rng")
    prob = np.clip((1.0 + values) / 2.0, 0.0, 1.0)
    return 2.0 * rng.binomial(shots, prob) / shots - 1.0


def simulate_population_inversion(
    params: PerturbedGDParams,
    spam: SpamParams = NO_SPAM,
    times: Sequence[float] = None,
    shots: Optional[int] = None,
    rng=None,
) -> DecaySeries:
    """Excited-state preparation, -Z measurement: Q1(t) = -r_z(t)."""
    times = _default_times(times, params.gamma1_rate)
    r0 = np.array([0.0, 0.0, -(1.0 - spam.k)])
    vals = -_evolve_series(params, r0, times)[:, 2]
    vals = apply_spam(vals, spam)
    return DecaySeries(times=times, values=_maybe_shot_noise(vals, shots, rng))


def simulate_static_ramsey(
    params: PerturbedGDParams,
    spam: SpamParams = NO_SPAM,
    times: Sequence[float] = None,
    shots: Optional[int] = None,
    rng=None,
) -> DecaySeries:
    """Fixed |+> preparation, X measurement: Q2(t) = r_x(t)."""
    times = _default_times(times, params.gamma2_prime)
    r0 = np.array([1.0 - spam.k, 0.0, 0.0])
    vals = _evolve_series(params, r0, times)[:, 0]
    vals = apply_spam(vals, spam)
    return DecaySeries(times=times, values=_maybe_shot_noise(vals, shots, rng))


def simulate_avg_ramsey(
    params: PerturbedGDParams,
    spam: SpamParams = NO_SPAM,
    times: Sequence[float] = None,
    n_angles: Optional[int] = None,
    shots: Optional[int] = None,
    rng=None,
) -> DecaySeries:
    """Ramsey decay averaged over equatorial preparation/measurement angles.

    With n_angles=None the exact continuum average is used: the drive term
    integrates to zero and the signal is half the trace of the upper-left
    2x2 block of exp(C t).  Discrete mode averages n_angles equally spaced
    angles instead.
    """
    times = _default_times(times, params.gamma2_prime)
    gen = bloch_generator(params)
    es = eigensystem_exact(gen)
    tarr = np.asarray(times, float)
    shrink = 1.0 - spam.k
    if n_angles is None:
        # sum_j e^{eta_j t} (v_xj^2 + v_yj^2) / 2
        w = es.eigvecs[0] ** 2 + es.eigvecs[1] ** 2
        vals = 0.5 * shrink * (np.exp(np.outer(tarr, es.eigvals)) @ w)
    else:
        if n_angles < 1:
            raise ValueError("n_angles must be >= 1")
        omegas = 2.0 * np.pi * np.arange(n_angles) / n_angles
        axes = np.stack([np.cos(omegas), np.sin(omegas), np.zeros(n_angles)], axis=1)
        v, eta, drive = es.eigvecs, es.eigvals, gen.drive
        vals = np.empty_like(tarr)
        for idx, t in enumerate(tarr):
            decay = np.exp(eta * t)
            gain = _expm1_over(eta, t)
            acc = 0.0
            for m in axes:
                r0 = shrink * m
                rt = v @ (decay * (v.T @ r0)) + v @ (gain * (v.T @ drive))
                acc += m @ rt
            vals[idx] = acc / n_angles
    vals = apply_spam(vals, spam)
    return DecaySeries(times=tarr, values=_maybe_shot_noise(vals, shots, rng))


def _evolve_series(params: PerturbedGDParams, r0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Bloch vectors at each time, sharing one eigen decomposition."""
    gen = bloch_generator(params)
    es = eigensystem_exact(gen)
    v, eta = es.eigvecs, es.eigvals
    c0 = v.T @ r0
    d = v.T @ gen.drive
    out = np.empty((times.size, 3))
    for i, t in enumerate(times):
        out[i] = v @ (np.exp(eta * t) * c0) + v @ (_expm1_over(eta, t) * d)
    return out


def _default_times(times, rate) -> np.ndarray:
    if times is not None:
        return np.asarray(times, dtype=float)
    if rate <= 0:
        raise ValueError("cannot build a default time grid for a zero rate")
    return np.linspace(0.0, 1.0 / rate, 100)


def fit_exponential(series: DecaySeries, max_iter: int = 500, tol: float = 1e-10) -> FitResult:
    """Least-squares fit of c1 * exp(-rate t) + c0 by damped Gauss-Newton.

    Damping is multiplied by 10 whenever a step increases the residual and
    divided by 10 on success (Levenberg style).  Convergence: relative step
    below tol.  Non-convergence is reported in the result, never raised.
    """
    t = series.times
    y = series.values
    if t.size < 4:
        raise ValueError("need at least 4 points to fit 3 parameters")

    c0 = y[-1]
    c1 = y[0] - y[-1]
    rate = _init_rate(t, y, c0)
    theta = np.array([c1, rate, c0])

    mu = 1e-3
    converged = False
    it = 0
    res = _residual(theta, t, y)
    cost = res @ res
    gtol = 1e-14 * max(1.0, float(np.abs(y).max()))
    for it in range(1, max_iter + 1):
        jac = _jacobian(theta, t)
        g = jac.T @ res
        if np.abs(g).max() < gtol:
            # Stationary point at the numerical noise floor.
            converged = True
            break
        h = jac.T @ jac
        try:
            step = np.linalg.solve(h + mu * np.eye(3), -g)
        except np.linalg.LinAlgError:
            mu *= 10.0
            continue
        trial = theta + step
        trial_res = _residual(trial, t, y)
        trial_cost = trial_res @ trial_res
        if trial_cost <= cost:
            # Guard the denominator against parameters sitting at zero.
            scale = max(1e-300, np.abs(theta).max())
            rel = np.max(np.abs(step) / np.maximum(np.abs(theta), 1e-8 * scale))
            theta, res, cost = trial, trial_res, trial_cost
            mu = max(mu / 10.0, 1e-15)
            if rel < tol:
                converged = True
                break
        else:
            mu *= 10.0
            if mu > 1e12:
                break
    rms = float(np.sqrt(cost / t.size))
    return FitResult(
        c1=float(theta[0]),
        rate=float(theta[1]) if converged else float("nan"),
        c0=float(theta[2]),
        rms_residual=rms,
        converged=converged,
        iterations=it,
    )


def _init_rate(t, y, c0) -> float:
    half = max(4, t.size // 2)
    amp = y[:half] - c0
    sign = np.sign(amp[np.argmax(np.abs(amp))]) or 1.0
    z = np.log(np.maximum(sign * amp, 1e-300))
    slope = np.polyfit(t[:half], z, 1)[0]
    rate = -slope
    if not np.isfinite(rate) or rate <= 0:
        rate = 1.0 / max(t[-1], 1e-300)
    return rate


def _residual(theta, t, y):
    c1, rate, c0 = theta
    return c1 * np.exp(-rate * t) + c0 - y


def _jacobian(theta, t):
    c1, rate, _ = theta
    e = np.exp(-rate * t)
    return np.stack([e, -c1 * t * e, np.ones_like(t)], axis=1)


def predicted_estimator_bias(params: PerturbedGDParams) -> tuple:
    """Leading-order biased estimates (gamma1_est, gamma2'_est).

    The population-inversion fit underestimates gamma1 and the averaged
    Ramsey fit overestimates gamma2', both at second order in the effective
    transverse coupling.
    """
    g1 = params.gamma1_rate
    g2p = params.gamma2_prime
    if g2p <= g1:
        raise ValueError("bias prediction requires gamma2' > gamma1")
    shift = params.beta_eff**2 / (g2p - g1)
    return g1 - shift, g2p + 0.5 * shift
