"""Fixed-step classical Runge-Kutta integration of the chain.

The second-order equations are marched as the first-order system
alpha = [theta; omega], alpha' = [omega; theta_dd(theta, omega)].
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from pendlab.chain_model import ChainState, PendulumChain, energy_series, rest_energy_scale
from pendlab.dynamics import accelerations, packed_derivative
from pendlab.errors import ConfigError, IntegrationError, PendlabError, UndefinedOrderError

logger = logging.getLogger(__name__)

Derivative = Callable[[np.ndarray], np.ndarray]

DEFAULT_DT = 1e-3


@dataclass(frozen=True)
class IntegrationConfig:
    """Step size dt [s], duration t_end [s] and sampling stride (every k-th step)"""

    dt: float = DEFAULT_DT
    t_end: float = 10.0
    sample_stride: int = 10

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ConfigError(f"dt must be > 0, got {self.dt}")
        if not self.t_end >= self.dt:
            raise ConfigError(f"t_end ({self.t_end}) must be >= dt ({self.dt})")
        if self.sample_stride < 1:
            raise ConfigError(f"sample_stride must be >= 1, got {self.sample_stride}")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    @classmethod
    def from_frames(cls, duration: float, frames: int, dt: float = DEFAULT_DT) -> 'IntegrationConfig':
        """Config whose samples give `frames` equal intervals over `duration`"""
        if frames < 1:
            raise ConfigError(f"frames must be >= 1, got {frames}")
        frame_interval = duration / frames
        if frame_interval < dt:
            raise ConfigError(f"frame interval {frame_interval} s is shorter than dt {dt} s")
        stride = int(round(frame_interval / dt))
        if not math.isclose(stride * dt, frame_interval, rel_tol=1e-9):
            raise ConfigError(
                f"frame interval {frame_interval} s is not a whole number of steps of {dt} s"
            )
        return cls(dt=dt, t_end=duration, sample_stride=stride)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution: times (S,), thetas (S, N), omegas (S, N)"""

    chain: PendulumChain
    times: np.ndarray
    thetas: np.ndarray
    omegas: np.ndarray
    energy_drift: float = 0.0

    def __len__(self) -> int:
        return int(self.times.size)

    def state_at(self, k: int) -> ChainState:
        return ChainState(self.thetas[k], self.omegas[k], float(self.times[k]))

    def states(self) -> List[ChainState]:
        return [self.state_at(k) for k in range(len(self))]

    def energies(self) -> np.ndarray:
        return energy_series(self.chain, self.thetas, self.omegas)


def rk4_advance(derivative: Derivative, y: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step of an autonomous system y' = f(y)"""
    k1 = derivative(y)
    k2 = derivative(y + 0.5 * dt * k1)
    k3 = derivative(y + 0.5 * dt * k2)
    k4 = derivative(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_packed(derivative: Derivative, y0: np.ndarray, dt: float, n_steps: int) -> np.ndarray:
    y = np.array(y0, dtype=float)
    for _ in range(n_steps):
        y = rk4_advance(derivative, y, dt)
    return y


def rk4_step(chain: PendulumChain, state: ChainState, dt: float,
             derivative: Optional[Derivative] = None) -> ChainState:
    """Advance one step; `derivative` overrides the chain dynamics if given"""
    if not dt > 0:
        raise ConfigError(f"dt must be > 0, got {dt}")
    state.ensure_matches(chain)
    f = derivative if derivative is not None else packed_derivative(chain)
    try:
        y = rk4_advance(f, state.packed(), dt)
    except PendlabError as e:
        raise IntegrationError(f"derivative evaluation failed: {e}", state.time) from e
    if not np.all(np.isfinite(y)):
        raise IntegrationError("non-finite state after step", state.time + dt)
    return ChainState.from_packed(y, state.time + dt)


def _relative_drift(chain: PendulumChain, energies: np.ndarray) -> float:
    e0 = energies[0]
    # a zero reference energy (e.g. a single horizontal bob at rest) falls back to the rest-energy scale
    scale = abs(e0) if abs(e0) > 1e-12 else rest_energy_scale(chain)
    return float(np.max(np.abs(energies - e0)) / scale)


def integrate(chain: PendulumChain, initial: ChainState, config: IntegrationConfig) -> Trajectory:
    """March from initial.time for config.t_end seconds, recording every stride-th step"""
    initial.ensure_matches(chain)
    n = chain.n
    n_steps = config.n_steps
    stride = config.sample_stride
    n_samples = n_steps // stride + 1

    times = np.empty(n_samples)
    thetas = np.empty((n_samples, n))
    omegas = np.empty((n_samples, n))

    f = packed_derivative(chain)
    y = initial.packed()
    t0 = initial.time
    times[0] = t0
    thetas[0], omegas[0] = y[:n], y[n:]

    logger.debug(f"Integrating N={n} for {n_steps} steps of {config.dt} s (stride {stride})")
    sample = 1
    for step in range(1, n_steps + 1):
        try:
            y = rk4_advance(f, y, config.dt)
        except PendlabError as e:
            raise IntegrationError(f"derivative evaluation failed: {e}",
                                   t0 + (step - 1) * config.dt) from e
        if not np.all(np.isfinite(y)):
            raise IntegrationError("non-finite state", t0 + step * config.dt)
        if step % stride == 0:
            times[sample] = t0 + step * config.dt
            thetas[sample], omegas[sample] = y[:n], y[n:]
            sample += 1

    energies = energy_series(chain, thetas, omegas)
    drift = _relative_drift(chain, energies)
    logger.debug(f"Integration done: {n_samples} samples, energy drift {drift:.3e}")
    return Trajectory(chain, times, thetas, omegas, drift)


def richardson_order(solve: Callable[[float], np.ndarray], dt: float) -> float:
    """Observed order p = log2(|y_h - y_h/2| / |y_h/2 - y_h/4|)"""
    y_coarse = solve(dt)
    y_mid = solve(dt / 2.0)
    y_fine = solve(dt / 4.0)
    num = float(np.linalg.norm(y_coarse - y_mid))
    den = float(np.linalg.norm(y_mid - y_fine))
    if num == 0.0 or den == 0.0:
        raise UndefinedOrderError("successive solutions coincide; order is undefined")
    return math.log2(num / den)


def convergence_order(chain: PendulumChain, initial: ChainState, dt_coarse: float,
                      t_end: float = 1.0) -> float:
    """Richardson estimate of the integrator's global order on [0, t_end]"""
    initial.ensure_matches(chain)
    f = packed_derivative(chain)
    y0 = initial.packed()

    def solve(dt: float) -> np.ndarray:
        return integrate_packed(f, y0, dt, int(round(t_end / dt)))

    order = richardson_order(solve, dt_coarse)
    logger.info(f"📊 Observed convergence order for N={chain.n}: {order:.3f}")
    return order


def local_truncation_estimate(chain: PendulumChain, state: ChainState, dt: float) -> float:
    """Leading-order single Euler-step error bound 1/2 dt^2 |theta_dd|_2.

    This is a conservative per-step diagnostic, not RK4's own local error.
    """
    return 0.5 * dt * dt * float(np.linalg.norm(accelerations(chain, state)))


def max_angular_separation(first: Trajectory, second: Trajectory) -> float:
    """Largest |theta_a - theta_b| over all samples and links"""
    if first.thetas.shape != second.thetas.shape:
        raise ConfigError("trajectories must share sampling and chain size")
    return float(np.max(np.abs(first.thetas - second.thetas)))
