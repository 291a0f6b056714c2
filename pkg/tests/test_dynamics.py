import logging
import math

import numpy as np
import pytest

from pendlab.chain_model import ChainState, PendulumChain, uniform_chain, uniform_state
from pendlab.dynamics import (
    EomSystem,
    accelerations,
    assemble,
    packed_derivative,
    pi_index,
    solve_system,
    state_derivative,
)
from pendlab.errors import ContractViolation, SolverError
from pendlab.linear_analysis import linearized_accelerations
from tests.oracles import double_pendulum_accelerations


def test_single_link_reduces_to_simple_pendulum():
    system = assemble(uniform_chain(1), ChainState([0.3], [0.0]))
    np.testing.assert_allclose(system.a_matrix, [[1.0]])
    np.testing.assert_allclose(system.b_vector, [-9.8 * math.sin(0.3)])


def test_double_chain_at_rest_matrix():
    system = assemble(uniform_chain(2), uniform_state(2, 0.0))
    np.testing.assert_allclose(system.a_matrix, [[2.0, 1.0], [1.0, 1.0]])


def test_double_chain_with_horizontal_top_link():
    system = assemble(uniform_chain(2), ChainState([math.pi / 2, 0.0], [0.0, 0.0]))
    np.testing.assert_allclose(system.a_matrix, [[2.0, 0.0], [0.0, 1.0]], atol=1e-15)
    np.testing.assert_allclose(system.b_vector, [-19.6, 0.0], atol=1e-12)


def test_matrix_at_zero_angles_uses_tail_masses(random_chain):
    chain = random_chain(5)
    a = assemble(chain, uniform_state(5, 0.0)).a_matrix
    for i in range(5):
        for j in range(5):
            expected = chain.lengths[j] * chain.masses[max(i, j):].sum()
            assert a[i, j] == pytest.approx(expected, rel=1e-14)


def test_scaled_matrix_is_symmetric(rng, random_chain):
    chain = random_chain(6)
    state = ChainState(rng.uniform(-math.pi, math.pi, 6), rng.uniform(-2, 2, 6))
    system = assemble(chain, state)
    assert np.array_equal(system.coupling, system.coupling.T)
    scaled = system.a_matrix / chain.lengths[np.newaxis, :]
    np.testing.assert_allclose(scaled, scaled.T, rtol=1e-14)


def test_pi_index_is_max():
    assert pi_index(2, 5) == pi_index(5, 2) == 5
    assert pi_index(3, 3) == 3


def test_simple_pendulum_acceleration():
    theta_dd = accelerations(uniform_chain(1), ChainState([0.1], [0.0]))
    assert theta_dd[0] == pytest.approx(-0.978367, rel=1e-6)


@pytest.mark.parametrize('n', [1, 3, 7])
def test_equilibrium_is_fixed_point(n):
    chain = uniform_chain(n)
    np.testing.assert_array_equal(accelerations(chain, uniform_state(n, 0.0)), np.zeros(n))
    np.testing.assert_array_equal(state_derivative(chain, uniform_state(n, 0.0)), np.zeros(2 * n))


def test_double_pendulum_oracle(rng):
    for _ in range(100):
        l1, l2, m1, m2 = rng.uniform(0.5, 2.0, 4)
        th = rng.uniform(-math.pi, math.pi, 2)
        w = rng.uniform(-3.0, 3.0, 2)
        chain = PendulumChain([l1, l2], [m1, m2], 9.8)
        actual = accelerations(chain, ChainState(th, w))
        expected = double_pendulum_accelerations(l1, l2, m1, m2, 9.8, th[0], th[1], w[0], w[1])
        np.testing.assert_allclose(actual, expected, rtol=1e-10, atol=1e-10 * np.max(np.abs(expected)))


def test_double_pendulum_oracle_at_45_degrees():
    actual = accelerations(uniform_chain(2), uniform_state(2, math.pi / 4))
    expected = double_pendulum_accelerations(1, 1, 1, 1, 9.8, math.pi / 4, math.pi / 4, 0.0, 0.0)
    np.testing.assert_allclose(actual, expected, rtol=1e-12, atol=1e-12)


def test_solution_residual_is_small(rng, random_chain):
    for _ in range(20):
        chain = random_chain(8)
        state = ChainState(rng.uniform(-math.pi, math.pi, 8), rng.uniform(-3, 3, 8))
        system = assemble(chain, state)
        x = solve_system(system)
        residual = np.max(np.abs(system.a_matrix @ x - system.b_vector))
        assert residual <= 1e-10 * np.max(np.abs(system.b_vector))


def test_state_derivative_packs_velocity_and_acceleration():
    derivative = state_derivative(uniform_chain(1), ChainState([0.1], [0.5]))
    np.testing.assert_allclose(derivative, [0.5, -0.978367], rtol=1e-6)


@pytest.mark.parametrize('n', [1, 5, 100])
def test_state_derivative_shape(n):
    assert state_derivative(uniform_chain(n), uniform_state(n, 0.1, 0.2)).shape == (2 * n,)


def test_packed_derivative_matches_state_derivative(rng, random_chain):
    chain = random_chain(4)
    state = ChainState(rng.uniform(-1, 1, 4), rng.uniform(-1, 1, 4))
    np.testing.assert_array_equal(packed_derivative(chain)(state.packed()), state_derivative(chain, state))


def test_small_angles_agree_with_linearized_single_link():
    chain = uniform_chain(1)
    for theta in (1e-4, -5e-5, 3e-5):
        state = ChainState([theta], [0.0])
        np.testing.assert_allclose(accelerations(chain, state), linearized_accelerations(chain, state), rtol=1e-6)


def test_dimension_mismatch_is_rejected():
    with pytest.raises(ContractViolation):
        assemble(uniform_chain(3), uniform_state(2, 0.1))


@pytest.mark.filterwarnings('ignore')
def test_singular_matrix_raises_with_condition():
    system = EomSystem(np.array([[1.0, 1.0], [1.0, 1.0]]), np.array([1.0, 2.0]), np.eye(2))
    with pytest.raises(SolverError) as excinfo:
        solve_system(system)
    assert excinfo.value.condition > 1e14


def test_ill_conditioned_matrix_warns(caplog):
    system = EomSystem(np.diag([1.0, 1e-13]), np.array([1.0, 1.0]), np.eye(2))
    with caplog.at_level(logging.WARNING, logger='pendlab.dynamics'):
        solve_system(system)
    assert 'condition estimate' in caplog.text
