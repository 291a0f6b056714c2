"""Pseudo-period measurement protocol.

A bob completes a pseudo-cycle when its angular velocity about the pivot
goes through zero, changes sign, and comes back through zero in the same
direction as before (two direction changes), or, failing that, when it
returns to its starting height on the same side of the vertical. Per-bob
means are averaged into the system's measured pseudo-period and compared
against the analytic model at the perturbed release amplitude.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from pendlab.chain_model import cartesian_arrays, uniform_chain, uniform_state
from pendlab.errors import ContractViolation, DomainError, EstimationError
from pendlab.integrator import IntegrationConfig, Trajectory, integrate
from pendlab.linear_analysis import pseudo_period_corrected

logger = logging.getLogger(__name__)

PERTURBATION_WIDTH = 0.017   # rad, one degree of reading uncertainty
HEIGHT_TOLERANCE = 1e-3      # m
HYSTERESIS_FRACTION = 0.05   # of the peak |angular velocity|
MIN_SIGN_CHANGE_CYCLES = 2


class PeriodMethod(str, Enum):
    VELOCITY_SIGN_CHANGE = 'velocity-sign-change'
    RETURN_TO_HEIGHT = 'return-to-height'


@dataclass(frozen=True)
class BobPeriodEstimate:
    bob_index: int
    crossing_periods: Tuple[float, ...]
    mean_period: float
    method: PeriodMethod


@dataclass(frozen=True)
class SystemMeasurement:
    """Per-bob estimates plus the bobs that yielded no cycle"""

    estimates: Tuple[BobPeriodEstimate, ...]
    failed: Dict[int, str] = field(default_factory=dict)

    @property
    def period(self) -> float:
        if not self.estimates:
            raise EstimationError("no bob produced a complete cycle")
        total = 0.0
        for est in self.estimates:
            total += est.mean_period
        return total / len(self.estimates)


@dataclass(frozen=True)
class TrialReport:
    n: int
    trial: int
    seed: int
    theta0_used: float
    model_t0: Optional[float]
    model_t_real: Optional[float]
    measured_period: Optional[float] = None
    decimal_error: Optional[float] = None
    bob_periods: Tuple[float, ...] = ()
    measured_bobs: Tuple[int, ...] = ()
    failed_bobs: Tuple[int, ...] = ()
    energy_drift: Optional[float] = None
    status: str = 'ok'
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status == 'ok'


def _interpolate_zero(t0: float, t1: float, v0: float, v1: float) -> float:
    if v0 == v1:
        return t0
    return t0 + (t1 - t0) * v0 / (v0 - v1)


def zero_crossings(times: np.ndarray, signal: np.ndarray,
                   threshold: float = 0.0) -> Tuple[List[float], List[float]]:
    """Times of downward and upward zero crossings.

    A crossing only counts once the signal has moved past -threshold (down)
    or +threshold (up), so small wiggles around zero are ignored. The time
    itself is the linearly interpolated zero between the bracketing samples.
    """
    downs: List[float] = []
    ups: List[float] = []
    armed = 0
    down_candidate: Optional[float] = None
    up_candidate: Optional[float] = None

    for k in range(1, len(signal)):
        prev, cur = signal[k - 1], signal[k]
        if prev >= 0 > cur:
            down_candidate = _interpolate_zero(times[k - 1], times[k], prev, cur)
        elif prev <= 0 < cur:
            up_candidate = _interpolate_zero(times[k - 1], times[k], prev, cur)

        if cur < -threshold and armed >= 0:
            if down_candidate is not None:
                downs.append(down_candidate)
            armed, down_candidate = -1, None
        elif cur > threshold and armed <= 0:
            if up_candidate is not None:
                ups.append(up_candidate)
            armed, up_candidate = 1, None

    return downs, ups


def crossing_periods(times: np.ndarray, signal: np.ndarray,
                     hysteresis: float = HYSTERESIS_FRACTION) -> List[float]:
    """Durations between consecutive same-direction zero crossings, in time order"""
    peak = float(np.max(np.abs(signal))) if len(signal) else 0.0
    if peak == 0.0:
        return []
    downs, ups = zero_crossings(times, signal, hysteresis * peak)
    cycles = [(b, b - a) for a, b in zip(downs, downs[1:])]
    cycles += [(b, b - a) for a, b in zip(ups, ups[1:])]
    cycles.sort()
    return [period for _, period in cycles if period > 0]


def _parabolic_vertex(t: np.ndarray, g: np.ndarray) -> Tuple[float, float]:
    """Vertex (time, value) of the parabola through three evenly spaced samples"""
    curvature = g[0] - 2.0 * g[1] + g[2]
    if curvature == 0.0:
        return float(t[1]), float(g[1])
    offset = min(max(0.5 * (g[0] - g[2]) / curvature, -1.0), 1.0)
    value = g[1] - 0.25 * (g[0] - g[2]) * offset
    return float(t[1] + offset * (t[2] - t[1])), float(value)


def _return_to_height(times: np.ndarray, xs: np.ndarray, ys: np.ndarray,
                      tolerance: float) -> Optional[float]:
    """First time the bob is back at its starting height on the starting side.

    Besides sign changes of y - y0, a local minimum of |y - y0| counts when
    its interpolated vertex falls within `tolerance`, so a bob that only
    grazes its starting height between two samples is still caught.
    """
    x0, y0 = xs[0], ys[0]
    gap = ys - y0
    left_band = False
    last = len(times) - 1
    for k in range(1, len(times)):
        if not left_band:
            left_band = abs(gap[k]) > tolerance
            continue
        if x0 != 0.0 and np.sign(xs[k]) != np.sign(x0):
            continue
        if gap[k - 1] * gap[k] < 0:
            return float(_interpolate_zero(times[k - 1], times[k], gap[k - 1], gap[k]) - times[0])
        if abs(gap[k]) < tolerance:
            return float(times[k] - times[0])
        if k < last and abs(gap[k]) <= abs(gap[k - 1]) and abs(gap[k]) < abs(gap[k + 1]):
            t_min, g_min = _parabolic_vertex(times[k - 1:k + 2], gap[k - 1:k + 2])
            if abs(g_min) < tolerance or g_min * gap[k] <= 0:
                return t_min - float(times[0])
    return None


def pivot_angular_velocity(xs: np.ndarray, ys: np.ndarray,
                           vxs: np.ndarray, vys: np.ndarray) -> np.ndarray:
    """d/dt of atan2(x, -y), the bob's angle seen from the pivot"""
    r_sq = xs ** 2 + ys ** 2
    rate = xs * vys - ys * vxs
    return np.divide(rate, r_sq, out=np.zeros_like(rate), where=r_sq > 1e-12)


def _estimate(times: np.ndarray, xs: np.ndarray, ys: np.ndarray, vxs: np.ndarray,
              vys: np.ndarray, bob_index: int) -> BobPeriodEstimate:
    periods = crossing_periods(times, pivot_angular_velocity(xs, ys, vxs, vys))
    if len(periods) >= MIN_SIGN_CHANGE_CYCLES:
        return BobPeriodEstimate(bob_index, tuple(periods), float(np.mean(periods)),
                                 PeriodMethod.VELOCITY_SIGN_CHANGE)

    recurrence = _return_to_height(times, xs, ys, HEIGHT_TOLERANCE)
    if recurrence is None or recurrence <= 0:
        raise EstimationError("no complete cycle within the trajectory", bob_index)
    logger.debug(f"bob {bob_index}: falling back to return-to-height ({recurrence:.4f} s)")
    return BobPeriodEstimate(bob_index, (recurrence,), recurrence, PeriodMethod.RETURN_TO_HEIGHT)


def _check_trajectory(trajectory: Trajectory) -> None:
    if len(trajectory) < 3:
        raise ContractViolation(f"need at least 3 samples, got {len(trajectory)}")


def estimate_bob_period(trajectory: Trajectory, bob_index: int) -> BobPeriodEstimate:
    """Mean pseudo-period of one bob (1-based index)"""
    _check_trajectory(trajectory)
    if not 1 <= bob_index <= trajectory.chain.n:
        raise ContractViolation(f"bob index {bob_index} outside 1..{trajectory.chain.n}")
    col = bob_index - 1
    xs, ys, vxs, vys = cartesian_arrays(trajectory.chain.lengths, trajectory.thetas, trajectory.omegas)
    return _estimate(trajectory.times, xs[:, col], ys[:, col], vxs[:, col], vys[:, col], bob_index)


def measure_system(trajectory: Trajectory) -> SystemMeasurement:
    _check_trajectory(trajectory)
    xs, ys, vxs, vys = cartesian_arrays(trajectory.chain.lengths, trajectory.thetas, trajectory.omegas)
    estimates: List[BobPeriodEstimate] = []
    failed: Dict[int, str] = {}
    for col in range(trajectory.chain.n):
        bob = col + 1
        try:
            estimates.append(_estimate(trajectory.times, xs[:, col], ys[:, col],
                                       vxs[:, col], vys[:, col], bob))
        except EstimationError as e:
            failed[bob] = str(e)
    if failed:
        logger.warning(f"⚠️  Excluded {len(failed)} of {trajectory.chain.n} bobs with no complete cycle")
    return SystemMeasurement(tuple(estimates), failed)


def system_period(trajectory: Trajectory) -> float:
    """Average of the per-bob mean pseudo-periods [s]"""
    return measure_system(trajectory).period


def perturb_initial(theta0: float, seed: int) -> float:
    """theta0 plus a seeded Uniform[0, 0.017) rad reading perturbation"""
    rng = np.random.default_rng(seed)
    return theta0 + float(rng.uniform(0.0, PERTURBATION_WIDTH))


def decimal_error(measured: Sequence[float], model: Sequence[float]) -> float:
    """Mean of |S_i - T_i| / S_i over measured S and model T"""
    if len(measured) == 0 or len(measured) != len(model):
        raise ContractViolation(
            f"need equal, nonzero lengths; got {len(measured)} measured and {len(model)} model values"
        )
    total = 0.0
    for s, t in zip(measured, model):
        if s == 0:
            raise DomainError("measured period of zero")
        total += abs(s - t) / abs(s)
    return total / len(measured)


def simulate_trial(n: int, theta0: float, seed: int, config: IntegrationConfig,
                   trial: int = 1) -> Tuple[Trajectory, TrialReport]:
    """Run the release protocol once and return the trajectory with its report"""
    if n < 1:
        raise ContractViolation(f"trial needs n >= 1, got {n}")
    chain = uniform_chain(n)
    theta0_used = perturb_initial(theta0, seed)
    model = pseudo_period_corrected(chain, theta0_used)

    trajectory = integrate(chain, uniform_state(n, theta0_used), config)
    measurement = measure_system(trajectory)
    measured = measurement.period
    error = decimal_error([measured], [model.t_real])

    report = TrialReport(
        n=n,
        trial=trial,
        seed=seed,
        theta0_used=theta0_used,
        model_t0=model.t0,
        model_t_real=model.t_real,
        measured_period=measured,
        decimal_error=error,
        bob_periods=tuple(est.mean_period for est in measurement.estimates),
        measured_bobs=tuple(est.bob_index for est in measurement.estimates),
        failed_bobs=tuple(sorted(measurement.failed)),
        energy_drift=trajectory.energy_drift,
    )
    logger.info(
        f"N={n} trial {trial}: theta0={theta0_used:.5f} rad, measured {measured:.4f} s, "
        f"model {model.t_real:.4f} s, decimal error {error:.3f}"
    )
    return trajectory, report


def run_trial(n: int, theta0: float, seed: int, config: IntegrationConfig,
              trial: int = 1) -> TrialReport:
    return simulate_trial(n, theta0, seed, config, trial)[1]


@dataclass(frozen=True)
class TrialSetStatistics:
    """Mean decimal error e over t trials and sigma = e * sqrt(t)"""

    n: int
    trials: int
    mean_decimal_error: float
    sigma: float


def trial_set_statistics(reports: Sequence[TrialReport]) -> Dict[int, TrialSetStatistics]:
    grouped: Dict[int, List[float]] = {}
    for report in reports:
        if report.ok and report.decimal_error is not None:
            grouped.setdefault(report.n, []).append(report.decimal_error)
    stats = {}
    for n in sorted(grouped):
        errors = grouped[n]
        mean_error = sum(errors) / len(errors)
        stats[n] = TrialSetStatistics(n, len(errors), mean_error, mean_error * math.sqrt(len(errors)))
    return stats
