import math

import numpy as np
import pytest

from pendlab.chain_model import ChainState, uniform_chain, uniform_state
from pendlab.dynamics import accelerations
from pendlab.errors import ContractViolation, DomainError
from pendlab.linear_analysis import (
    circular_error_bound,
    correction_series,
    exact_correction,
    linear_system,
    linearized_accelerations,
    model_row,
    normal_frequencies,
    pseudo_period_corrected,
    pseudo_period_ideal,
    simple_pendulum_period,
)
from tests.oracles import agm_elliptic_ratio


def test_linearized_accelerations_known_values():
    np.testing.assert_array_equal(linearized_accelerations(uniform_chain(4), uniform_state(4, 0.0)), np.zeros(4))
    np.testing.assert_allclose(linearized_accelerations(uniform_chain(1), ChainState([0.02], [0.0])), [-0.196])
    np.testing.assert_allclose(
        linearized_accelerations(uniform_chain(2), uniform_state(2, 0.01)), [-0.049, -0.098]
    )


def test_linearized_accelerations_dimension_mismatch():
    with pytest.raises(ContractViolation):
        linearized_accelerations(uniform_chain(2), uniform_state(3, 0.01))


def test_linear_system_diagonals():
    system = linear_system(uniform_chain(3))
    np.testing.assert_allclose(system.m_diagonal, [3.0, 2.0, 1.0])
    np.testing.assert_allclose(system.l_diagonal, [9.8, 9.8, 9.8])
    np.testing.assert_allclose(system.m_matrix, np.diag([3.0, 2.0, 1.0]))
    np.testing.assert_allclose(system.l_matrix, 9.8 * np.eye(3))


def test_normal_frequencies_known_values():
    np.testing.assert_allclose(normal_frequencies(uniform_chain(1)), [3.1305], atol=1e-4)
    np.testing.assert_allclose(normal_frequencies(uniform_chain(2)), [2.21359, 2.21359], atol=1e-5)


@pytest.mark.parametrize('n, expected', [(1, 2.0071), (5, 4.487), (10, 6.347), (20, 8.976), (100, 20.071)])
def test_ideal_pseudo_period_table(n, expected):
    assert pseudo_period_ideal(uniform_chain(n)) == pytest.approx(expected, abs=1e-3)


@pytest.mark.parametrize('n', [2, 4, 9, 16, 100])
def test_ideal_period_scales_with_sqrt_n(n):
    chain = uniform_chain(n, length=0.7)
    expected = math.sqrt(n) * simple_pendulum_period(0.7, 9.8)
    assert pseudo_period_ideal(chain) == pytest.approx(expected, rel=1e-12)


def test_correction_vanishes_at_zero_amplitude():
    assert correction_series(0.0) == 0.0
    assert correction_series(0.0, order=3) == 0.0
    assert exact_correction(0.0) == pytest.approx(0.0, abs=1e-15)


def test_correction_small_amplitude_leading_terms():
    taylor = 0.1 ** 2 / 16 + 11 * 0.1 ** 4 / 3072
    assert correction_series(0.1, order=2) == pytest.approx(taylor, abs=1e-8)


def test_correction_at_45_degrees():
    assert correction_series(math.pi / 4, order=20) == pytest.approx(0.03997, abs=1e-5)


def test_correction_series_converges_monotonically():
    values = [correction_series(1.0, order) for order in range(1, 30)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    terms = np.diff(values[:12])
    assert np.all(terms > 0)
    assert all(b < a for a, b in zip(terms, terms[1:]))
    assert values[-1] == pytest.approx(exact_correction(1.0), rel=1e-9)


@pytest.mark.parametrize('theta0', [0.1, 0.5, math.pi / 4, 1.0])
def test_correction_matches_elliptic_oracle(theta0):
    assert 1.0 + correction_series(theta0, order=60) == pytest.approx(agm_elliptic_ratio(theta0), abs=1e-9)
    assert 1.0 + exact_correction(theta0) == pytest.approx(agm_elliptic_ratio(theta0), abs=1e-12)


def test_leading_coefficients_recovered_by_fit():
    thetas = np.linspace(0.01, 0.1, 25)
    x = thetas ** 2
    ratio = np.array([correction_series(t, order=60) for t in thetas]) / x
    coeffs = np.polynomial.polynomial.polyfit(x, ratio, 3)
    assert coeffs[0] == pytest.approx(1 / 16, rel=1e-6)
    assert coeffs[1] == pytest.approx(11 / 3072, rel=1e-6)


@pytest.mark.parametrize('theta0', [math.pi, 3.5, -0.1])
def test_amplitude_outside_domain_rejected(theta0):
    with pytest.raises(DomainError):
        correction_series(theta0)
    with pytest.raises(DomainError):
        exact_correction(theta0)


def test_series_order_must_be_positive():
    with pytest.raises(DomainError):
        correction_series(0.5, order=0)


def test_corrected_period_known_values():
    assert pseudo_period_corrected(uniform_chain(1), math.pi / 4).t_real == pytest.approx(2.0873, abs=1e-3)
    five = pseudo_period_corrected(uniform_chain(5), math.pi / 4).t_real
    assert five == pytest.approx(pseudo_period_ideal(uniform_chain(5)) * (1 + exact_correction(math.pi / 4)), rel=1e-9)
    assert five == pytest.approx(4.667, abs=1e-3)

    model = pseudo_period_corrected(uniform_chain(3), 0.0)
    assert model.t_real == model.t0
    assert model.delta_t == 0.0
    assert model.omega_bar == pytest.approx(2 * math.pi / model.t0)


def test_circular_error_bound():
    assert circular_error_bound(0.0) == 1.0
    assert circular_error_bound(math.pi / 4) == pytest.approx(0.96157, abs=1e-4)
    bounds = [circular_error_bound(t) for t in np.linspace(0.0, 3.0, 20)]
    assert all(b < a for a, b in zip(bounds, bounds[1:]))
    assert all(0.0 < b <= 1.0 for b in bounds)


def test_model_row():
    n, t0, delta, low, high = model_row(5, math.pi / 4)
    assert n == 5
    assert t0 == pytest.approx(4.487, abs=1e-3)
    assert delta == pytest.approx(t0 * correction_series(math.pi / 4))
    assert low == pytest.approx(t0 - delta)
    assert high == pytest.approx(t0 + delta)
    assert model_row(20, 0.0)[2] == 0.0


def test_linearized_single_link_deviation_scales_quadratically():
    chain = uniform_chain(1)

    def deviation(amplitude):
        state = ChainState([amplitude], [0.0])
        exact = accelerations(chain, state)[0]
        return abs(linearized_accelerations(chain, state)[0] - exact) / abs(exact)

    assert deviation(1e-3) <= 1e-3
    ratio = deviation(1e-2) / deviation(1e-3)
    assert ratio == pytest.approx(100.0, rel=0.05)


def test_series_tail_is_negligible_at_45_degrees():
    assert abs(correction_series(math.pi / 4, 60) - correction_series(math.pi / 4, 30)) < 1e-12
    assert circular_error_bound(0.5) > circular_error_bound(1.0)
