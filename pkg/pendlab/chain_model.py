"""Static and dynamic description of an N-link planar pendulum chain.

Angles are measured counterclockwise from the downward vertical and the
pivot sits at the origin, so bobs hanging below it have negative y. The
potential-energy datum is the pivot.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from pendlab.errors import ContractViolation

STANDARD_GRAVITY = 9.8


def _frozen_vector(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True).reshape(-1)
    if arr.size == 0:
        raise ContractViolation(f"{name} must not be empty")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PendulumChain:
    """Rod lengths [m], bob masses [kg] and gravity [m s^-2]"""

    lengths: np.ndarray
    masses: np.ndarray
    gravity: float = STANDARD_GRAVITY

    def __post_init__(self):
        lengths = _frozen_vector(self.lengths, 'lengths')
        masses = _frozen_vector(self.masses, 'masses')
        if lengths.size != masses.size:
            raise ContractViolation(
                f"lengths ({lengths.size}) and masses ({masses.size}) must have the same count"
            )
        if not np.all(np.isfinite(lengths)) or np.any(lengths <= 0):
            raise ContractViolation("every rod length must be finite and > 0")
        if not np.all(np.isfinite(masses)) or np.any(masses <= 0):
            raise ContractViolation("every bob mass must be finite and > 0")
        if not np.isfinite(self.gravity) or self.gravity <= 0:
            raise ContractViolation(f"gravity must be > 0, got {self.gravity}")
        object.__setattr__(self, 'lengths', lengths)
        object.__setattr__(self, 'masses', masses)
        object.__setattr__(self, 'gravity', float(self.gravity))

    @property
    def n(self) -> int:
        return int(self.lengths.size)

    def total_mass(self) -> float:
        # plain left-to-right sum: ascending index, bit-reproducible
        total = 0.0
        for m in self.masses.tolist():
            total += m
        return total

    def tail_masses(self) -> np.ndarray:
        """Mass hanging at or below each link: sum_{k>=j} m_k"""
        return np.cumsum(self.masses[::-1])[::-1]

    def cumulative_lengths(self) -> np.ndarray:
        """Distance along the chain from the pivot to each bob"""
        return np.cumsum(self.lengths)


def uniform_chain(n: int, length: float = 1.0, mass: float = 1.0,
                  gravity: float = STANDARD_GRAVITY) -> PendulumChain:
    """Chain of n identical links"""
    if n < 1:
        raise ContractViolation(f"chain needs at least one link, got n={n}")
    return PendulumChain(np.full(n, float(length)), np.full(n, float(mass)), gravity)


@dataclass(frozen=True, eq=False)
class ChainState:
    """Angles [rad], angular velocities [rad s^-1] and time [s]"""

    thetas: np.ndarray
    omegas: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        thetas = _frozen_vector(self.thetas, 'thetas')
        omegas = _frozen_vector(self.omegas, 'omegas')
        if thetas.size != omegas.size:
            raise ContractViolation(
                f"thetas ({thetas.size}) and omegas ({omegas.size}) must have the same count"
            )
        if not (np.all(np.isfinite(thetas)) and np.all(np.isfinite(omegas))):
            raise ContractViolation("state contains non-finite entries")
        if not np.isfinite(self.time):
            raise ContractViolation(f"state time must be finite, got {self.time}")
        object.__setattr__(self, 'thetas', thetas)
        object.__setattr__(self, 'omegas', omegas)
        object.__setattr__(self, 'time', float(self.time))

    @property
    def n(self) -> int:
        return int(self.thetas.size)

    def packed(self) -> np.ndarray:
        """First-order state vector [theta; omega]"""
        return np.concatenate((self.thetas, self.omegas))

    @classmethod
    def from_packed(cls, y: np.ndarray, time: float) -> 'ChainState':
        half = y.size // 2
        return cls(y[:half], y[half:], time)

    def ensure_matches(self, chain: PendulumChain) -> None:
        if self.n != chain.n:
            raise ContractViolation(
                f"state has {self.n} angles but chain has {chain.n} links"
            )


def uniform_state(n: int, theta0: float, omega0: float = 0.0, time: float = 0.0) -> ChainState:
    """Every link displaced by theta0 and moving at omega0"""
    return ChainState(np.full(n, float(theta0)), np.full(n, float(omega0)), time)


@dataclass(frozen=True, eq=False)
class CartesianSample:
    """Bob positions [m] and velocities [m s^-1]"""

    xs: np.ndarray
    ys: np.ndarray
    vxs: np.ndarray
    vys: np.ndarray


def cartesian_arrays(lengths: np.ndarray, thetas: np.ndarray,
                     omegas: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Prefix-sum kinematics over the last axis.

    Works on single states (shape (N,)) and on stacked samples (shape (S, N)).
    """
    sin_t = np.sin(thetas)
    cos_t = np.cos(thetas)
    xs = np.cumsum(lengths * sin_t, axis=-1)
    ys = -np.cumsum(lengths * cos_t, axis=-1)
    vxs = np.cumsum(lengths * omegas * cos_t, axis=-1)
    vys = np.cumsum(lengths * omegas * sin_t, axis=-1)
    return xs, ys, vxs, vys


def to_cartesian(chain: PendulumChain, state: ChainState) -> CartesianSample:
    state.ensure_matches(chain)
    xs, ys, vxs, vys = cartesian_arrays(chain.lengths, state.thetas, state.omegas)
    return CartesianSample(xs, ys, vxs, vys)


def kinetic_energy(chain: PendulumChain, state: ChainState) -> float:
    """Mass-weighted kinetic energy 1/2 sum m_i (vx_i^2 + vy_i^2) [J]"""
    sample = to_cartesian(chain, state)
    speeds_sq = sample.vxs ** 2 + sample.vys ** 2
    return 0.5 * float(np.dot(chain.masses, speeds_sq))


def potential_energy(chain: PendulumChain, state: ChainState) -> float:
    """Gravitational potential sum m_i g y_i with the datum at the pivot [J]"""
    sample = to_cartesian(chain, state)
    return chain.gravity * float(np.dot(chain.masses, sample.ys))


def total_energy(chain: PendulumChain, state: ChainState) -> float:
    return kinetic_energy(chain, state) + potential_energy(chain, state)


def energy_series(chain: PendulumChain, thetas: np.ndarray, omegas: np.ndarray) -> np.ndarray:
    """Total energy for stacked samples of shape (S, N)"""
    _, ys, vxs, vys = cartesian_arrays(chain.lengths, thetas, omegas)
    kinetic = 0.5 * (vxs ** 2 + vys ** 2) @ chain.masses
    potential = chain.gravity * (ys @ chain.masses)
    return kinetic + potential


def rest_energy_scale(chain: PendulumChain) -> float:
    """|E| of the chain hanging at rest: g * sum m_i * cumlen_i"""
    return chain.gravity * float(np.dot(chain.masses, chain.cumulative_lengths()))
