import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ghzqfi import oracle
from ghzqfi.core import SystemParams
from ghzqfi.ecc import qfi_from_state, solve_recurrence
from ghzqfi.fisher import (
    PovmAngle, SpectralDecomposition, fisher_povm, fisher_povm_as_printed, fisher_povm_terms,
    povm_fisher_sum, qfi_spectral, rank2_density, rank2_density_derivative,
)


def rank2_q(R, d_R, d_theta):
    return d_R**2 / (1 - R * R) + R * R * d_theta**2


def test_pure_ghz():
    one = np.ones(1)
    decomp = SpectralDecomposition(one, 0 * one, 0 * one, 0 * one, 6.0 * one, one)
    assert qfi_spectral(decomp) == 36.0
    assert decomp.trace() == 1.0


@given(st.floats(0, 0.999), st.floats(-3, 3), st.floats(-10, 10))
def test_rank2_spectral_formula(R, d_R, d_theta):
    q = qfi_spectral(SpectralDecomposition.rank2(R, d_R, d_theta))
    assert math.isclose(q, rank2_q(R, d_R, d_theta), rel_tol=1e-12, abs_tol=1e-14)


def test_negative_eigenvalue_rejected():
    one = np.ones(1)
    with pytest.raises(ValueError):
        qfi_spectral(SpectralDecomposition(1.1 * one, -0.1 * one, 0 * one, 0 * one, one, one))


def test_measurement_never_beats_qfi():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        R = rng.uniform(0, 0.999)
        theta, alpha = rng.uniform(-np.pi, np.pi, 2)
        d_R, d_theta = rng.normal(size=2) * [1, 10]
        i = fisher_povm_terms(R, d_R, theta, d_theta, alpha)
        assert i <= rank2_q(R, d_R, d_theta) * (1 + 1e-12)


def test_near_optimal_angle_exists():
    rng = np.random.default_rng(12)
    alphas = np.linspace(-np.pi, np.pi, 1000, endpoint=False)
    checked = 0
    while checked < 50:
        R = rng.uniform(0.5, 0.999)
        theta = rng.uniform(-np.pi, np.pi)
        d_theta = rng.uniform(1, 10)
        d_R = rng.normal() * 1e-3
        q = rank2_q(R, d_R, d_theta)
        if d_R**2 / (1 - R * R) > 1e-3 * q:
            continue
        best = max(fisher_povm_terms(R, d_R, theta, d_theta, a) for a in alphas)
        assert best >= q * (1 - 1e-3)
        checked += 1


@given(st.floats(0, 0.99), st.floats(-2, 2), st.floats(-3, 3), st.floats(-5, 5), st.floats(-4, 4))
def test_periodic_in_alpha(R, d_R, theta, d_theta, alpha):
    a = fisher_povm_terms(R, d_R, theta, d_theta, alpha)
    b = fisher_povm_terms(R, d_R, theta, d_theta, alpha + 2 * math.pi)
    assert math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-12)


def test_quadrature_angle_gives_phase_term():
    R, d_R, theta, d_theta = 0.9, 0.3, 0.4, 5.0
    i = fisher_povm_terms(R, d_R, theta, d_theta, theta - math.pi / 2)
    assert math.isclose(i, (R * d_theta) ** 2, rel_tol=1e-12)


def test_in_phase_angle_blind_for_pure_state():
    assert fisher_povm_terms(1.0, 0.0, 0.7, 5.0, 0.7) == 0.0


@pytest.mark.parametrize("m", [1, 3, 4])
def test_closed_form_matches_outcome_sum(m):
    R, d_R, theta, d_theta, alpha = 0.8, -0.4, 0.9, 3.0, 0.2
    rho = rank2_density(R, theta, m)
    d_rho = rank2_density_derivative(R, d_R, theta, d_theta, m)
    explicit = povm_fisher_sum(rho, d_rho, alpha)
    assert math.isclose(fisher_povm_terms(R, d_R, theta, d_theta, alpha), explicit, rel_tol=1e-12)


def test_printed_denominator_disagrees_with_outcome_sum():
    R, d_R, theta, d_theta, alpha = 0.8, -0.4, 0.9, 3.0, 0.2
    rho = rank2_density(R, theta, 2)
    explicit = povm_fisher_sum(rho, rank2_density_derivative(R, d_R, theta, d_theta, 2), alpha)
    printed = fisher_povm_as_printed(R, d_R, theta, d_theta, alpha)
    assert abs(printed - explicit) > 1e-2 * explicit


def test_case1_state_against_oracle_outcome_sum():
    params = SystemParams(n=2, omega=20.0, gamma=1.0, tau=1e-3, rounds=10)
    state = solve_recurrence(params)
    for alpha in (0.3, 1.1, -2.0):
        closed = fisher_povm(state, PovmAngle(alpha))
        # oracle includes the ancilla, which sits in |0> and only splits outcomes
        explicit = oracle.fisher_numeric(params, "parity-ideal", alpha)
        assert math.isclose(closed, explicit, rel_tol=1e-6)
    assert fisher_povm(state, state.theta - math.pi / 2) <= qfi_from_state(state).qfi


def test_povm_angle_validation():
    assert float(PovmAngle(0.5)) == 0.5
    with pytest.raises(ValueError):
        PovmAngle(math.nan)
