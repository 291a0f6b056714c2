"""Exact nonlinear equations of motion of the pendulum chain.

The Euler-Lagrange equations are assembled as A(theta) theta_dd = b(theta, omega) with

    A_ij = l_j cos(theta_i - theta_j) * sum_{k >= max(i,j)} m_k
    b_i  = -g sin(theta_i) * sum_{k >= i} m_k
           - sum_j l_j omega_j^2 sin(theta_i - theta_j) * sum_{k >= max(i,j)} m_k

and solved by LU decomposition with partial pivoting. The coupling index
max(i, j) is the one that reproduces the double-pendulum coefficient
m2 l2 cos(theta1 - theta2).
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.linalg.lapack import dgecon

from pendlab.chain_model import ChainState, PendulumChain
from pendlab.errors import SolverError

logger = logging.getLogger(__name__)

# condition-number guard on A
CONDITION_WARN = 1e12
CONDITION_FAIL = 1e14


def pi_index(i: int, j: int) -> int:
    """Index selecting the tail-mass sum that weights the (i, j) coupling"""
    return max(i, j)


@dataclass(frozen=True, eq=False)
class EomSystem:
    """Assembled A (N x N) and b (N) of A theta_dd = b.

    `coupling` holds cos(theta_i - theta_j) * sum_{k>=max(i,j)} m_k, which is
    exactly symmetric; A is coupling scaled column-wise by the rod lengths.
    """

    a_matrix: np.ndarray
    b_vector: np.ndarray
    coupling: np.ndarray


def coupling_masses(chain: PendulumChain) -> np.ndarray:
    """mu_ij = sum_{k >= max(i,j)} m_k for every pair (0-based indices)"""
    tails = chain.tail_masses()
    idx = np.arange(chain.n)
    return tails[np.maximum.outer(idx, idx)]


def _build(lengths: np.ndarray, gravity: float, tails: np.ndarray, mu: np.ndarray,
           thetas: np.ndarray, omegas: np.ndarray) -> EomSystem:
    diff = np.subtract.outer(thetas, thetas)
    # cos of |diff| keeps the coupling bit-symmetric
    coupling = mu * np.cos(np.abs(diff))
    a_matrix = coupling * lengths[np.newaxis, :]
    centripetal = (mu * np.sin(diff)) @ (lengths * omegas ** 2)
    b_vector = -gravity * np.sin(thetas) * tails - centripetal
    return EomSystem(a_matrix, b_vector, coupling)


def assemble(chain: PendulumChain, state: ChainState) -> EomSystem:
    state.ensure_matches(chain)
    return _build(chain.lengths, chain.gravity, chain.tail_masses(), coupling_masses(chain),
                  state.thetas, state.omegas)


def solve_system(system: EomSystem) -> np.ndarray:
    """LU solve of A x = b with a LAPACK 1-norm condition estimate"""
    a = system.a_matrix
    anorm = np.linalg.norm(a, 1)
    try:
        lu, piv = lu_factor(a, check_finite=False)
    except (ValueError, np.linalg.LinAlgError) as e:
        raise SolverError(f"LU factorization failed: {e}", float('inf')) from e

    rcond, info = dgecon(lu, anorm, norm='1')
    condition = float('inf') if rcond == 0 or info != 0 else 1.0 / rcond
    if not np.isfinite(condition) or condition > CONDITION_FAIL:
        raise SolverError("equations-of-motion matrix is singular or ill-conditioned", condition)
    if condition > CONDITION_WARN:
        logger.warning(f"⚠️  EOM matrix condition estimate {condition:.3e} exceeds {CONDITION_WARN:.0e}")

    return lu_solve((lu, piv), system.b_vector, check_finite=False)


def accelerations(chain: PendulumChain, state: ChainState) -> np.ndarray:
    """Angular accelerations theta_dd [rad s^-2]"""
    return solve_system(assemble(chain, state))


def state_derivative(chain: PendulumChain, state: ChainState) -> np.ndarray:
    """Packed first-order derivative [omega; theta_dd] of length 2N"""
    return np.concatenate((state.omegas, accelerations(chain, state)))


def packed_derivative(chain: PendulumChain):
    """Derivative callable on packed vectors, for the integrator.

    Skips ChainState construction on the hot path; the chain constants are
    computed once.
    """
    n = chain.n
    lengths = chain.lengths
    gravity = chain.gravity
    tails = chain.tail_masses()
    mu = coupling_masses(chain)

    def derivative(y: np.ndarray) -> np.ndarray:
        omegas = y[n:]
        theta_dd = solve_system(_build(lengths, gravity, tails, mu, y[:n], omegas))
        return np.concatenate((omegas, theta_dd))

    return derivative
