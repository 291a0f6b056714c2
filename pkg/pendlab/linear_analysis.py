"""Linearized chain model, normal frequencies and the analytic pseudo-period.

The model is the diagonal approximation M theta_dd + L theta = 0 with

    M = diag(l_j * sum_{k>=j} m_k)      L = diag(g * m_j)

Its determinant equation det(L - w^2 M) = 0 factorizes because both
matrices are diagonal. The frequencies use the total mass M = sum m_i in
place of the tail sums, which gives T0(N) = 2 pi N / sum_j w_j and, for
equal links, T0 = 2 pi sqrt(N l / g).

Amplitude corrections use the complete-elliptic-integral series

    dT/T0 = sum_{n>=1} [(2n)! / (2^{2n} (n!)^2)]^2 sin^{2n}(theta0 / 2)
"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import ellipk

from pendlab.chain_model import ChainState, PendulumChain, uniform_chain
from pendlab.errors import DomainError

logger = logging.getLogger(__name__)

DEFAULT_SERIES_ORDER = 40


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """Diagonals of the inertia-like M and stiffness L matrices"""

    m_diagonal: np.ndarray
    l_diagonal: np.ndarray

    @property
    def m_matrix(self) -> np.ndarray:
        return np.diag(self.m_diagonal)

    @property
    def l_matrix(self) -> np.ndarray:
        return np.diag(self.l_diagonal)


@dataclass(frozen=True)
class PeriodModel:
    n: int
    omega_bar: float
    t0: float
    correction: float
    t_real: float

    @property
    def delta_t(self) -> float:
        """Absolute amplitude uncertainty dT = correction * T0"""
        return self.correction * self.t0


def linear_system(chain: PendulumChain) -> LinearSystem:
    return LinearSystem(chain.lengths * chain.tail_masses(), chain.gravity * chain.masses)


def linearized_accelerations(chain: PendulumChain, state: ChainState) -> np.ndarray:
    """theta_dd_j = -(g m_j / (l_j sum_{k>=j} m_k)) theta_j, velocity terms dropped"""
    state.ensure_matches(chain)
    system = linear_system(chain)
    return -(system.l_diagonal / system.m_diagonal) * state.thetas


def normal_frequencies(chain: PendulumChain) -> np.ndarray:
    """w_j = sqrt(g m_j / (l_j M)) with M the total mass [rad s^-1]"""
    return np.sqrt(chain.gravity * chain.masses / (chain.lengths * chain.total_mass()))


def pseudo_period_ideal(chain: PendulumChain) -> float:
    """Small-angle pseudo-period T0 = 2 pi N / sum_j w_j [s]"""
    omegas = normal_frequencies(chain)
    total = 0.0
    for w in omegas.tolist():
        total += w
    return 2.0 * math.pi * chain.n / total


def simple_pendulum_period(length: float, gravity: float) -> float:
    return 2.0 * math.pi * math.sqrt(length / gravity)


def _check_amplitude(theta0: float) -> None:
    if not 0.0 <= theta0 < math.pi:
        raise DomainError(f"amplitude must lie in [0, pi), got {theta0}")


def correction_series(theta0: float, order: int = DEFAULT_SERIES_ORDER) -> float:
    """Fractional period correction dT/T0 truncated after `order` terms.

    The coefficient (2n)!/(2^{2n} (n!)^2) is built by the recurrence
    c_n = c_{n-1} (2n - 1) / (2n), so no factorial is ever formed.
    """
    _check_amplitude(theta0)
    if order < 1:
        raise DomainError(f"series order must be >= 1, got {order}")

    k_sq = math.sin(theta0 / 2.0) ** 2
    coeff = 1.0
    power = 1.0
    total = 0.0
    for n in range(1, order + 1):
        coeff *= (2 * n - 1) / (2 * n)
        power *= k_sq
        total += coeff * coeff * power
    return total


def exact_correction(theta0: float) -> float:
    """Closed form of the series: (2/pi) K(sin(theta0/2)) - 1.

    scipy's ellipk takes the parameter m = k^2.
    """
    _check_amplitude(theta0)
    return 2.0 / math.pi * float(ellipk(math.sin(theta0 / 2.0) ** 2)) - 1.0


def pseudo_period_corrected(chain: PendulumChain, theta0: float,
                            order: int = DEFAULT_SERIES_ORDER) -> PeriodModel:
    correction = correction_series(theta0, order)
    t0 = pseudo_period_ideal(chain)
    logger.debug(f"N={chain.n} theta0={theta0:.6f}: T0={t0:.6f} s, dT/T0={correction:.3e}")
    return PeriodModel(
        n=chain.n,
        omega_bar=2.0 * math.pi / t0,
        t0=t0,
        correction=correction,
        t_real=t0 * (1.0 + correction),
    )


def circular_error_bound(theta0: float, order: int = DEFAULT_SERIES_ORDER) -> float:
    """e_hat = 1 / (1 + dT/T0); independent of N"""
    return 1.0 / (1.0 + correction_series(theta0, order))


def model_row(n: int, theta0: float) -> Tuple[int, float, float, float, float]:
    """(N, T0, dT, T0 - dT, T0 + dT) for an equal unit chain"""
    model = pseudo_period_corrected(uniform_chain(n), theta0)
    delta = model.delta_t
    return n, model.t0, delta, model.t0 - delta, model.t0 + delta
