import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ghzqfi import oracle
from ghzqfi.core import SystemParams
from ghzqfi.fisher import qfi_spectral
from ghzqfi.noec import hamming_spectrum, qfi_noec_exact, qfi_noec_taylor


def params(n, omega, gamma, t):
    return SystemParams(n=n, omega=omega, gamma=gamma, tau=t)


@given(st.integers(1, 40), st.floats(-30, 30), st.floats(0, 5), st.floats(1e-3, 3))
def test_trace_and_positivity(n, omega, gamma, t):
    spec = hamming_spectrum(params(n, omega, gamma, t))
    assert abs(spec.trace() - 1) < 1e-10
    assert np.all(np.abs(spec.r_class) <= spec.s * (1 + 1e-12))
    lp, lm = spec.eigenvalues()
    assert np.all(lm >= -1e-12 * lp)
    # j <-> ~j symmetry
    assert np.allclose(spec.s, spec.s[::-1], rtol=1e-12)
    assert np.allclose(spec.r_class, spec.r_class[::-1], rtol=1e-10, atol=1e-300)


def test_single_qubit_without_noise_is_pure():
    spec = hamming_spectrum(params(1, 0.7, 0.0, 2.0))
    assert np.allclose(spec.s, 1) and np.allclose(spec.r_class, 1)
    assert math.isclose(abs(spec.theta[0]), 1.4, rel_tol=1e-14)


def test_zero_signal_has_no_phase():
    spec = hamming_spectrum(params(3, 0.0, 0.4, 1.0))
    assert np.all(spec.theta == 0)


def test_two_qubit_spectrum_against_dense_diagonalization():
    p = params(2, 1.0, 0.1, 1.0)
    spec = hamming_spectrum(p)
    rho = oracle.final_state(p, "no-ec").density_matrix()
    dense = np.sort(np.linalg.eigvalsh(rho))
    lp, lm = spec.eigenvalues()
    # pairs {j, ~j}: weight 0 holds one, weight 1 holds {01, 10}
    mine = np.sort([lp[0], lm[0], lp[1], lm[1]])
    assert np.allclose(mine, dense, rtol=0, atol=1e-10)


@pytest.mark.parametrize("n", [1, 2, 7, 25])
@pytest.mark.parametrize("t", [0.1, 1.0, 13.0])
def test_heisenberg_limit_without_noise(n, t):
    q = qfi_noec_exact(params(n, 2.3, 0.0, t))
    assert math.isclose(q.qfi, n * n * t * t, rel_tol=1e-12)
    assert math.isclose(q.normalized, 1.0, rel_tol=1e-12)


@given(st.integers(1, 20), st.floats(0.01, 30), st.floats(0, 3), st.floats(1e-2, 3))
def test_omega_symmetry(n, omega, gamma, t):
    a = qfi_noec_exact(params(n, omega, gamma, t)).qfi
    b = qfi_noec_exact(params(n, -omega, gamma, t)).qfi
    assert math.isclose(a, b, rel_tol=1e-10)


def test_single_qubit_against_oracle():
    p = params(1, 1.0, 0.05, 1.0)
    assert math.isclose(qfi_noec_exact(p).qfi, oracle.qfi_numeric(p, "no-ec").qfi, rel_tol=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_oracle_grid(n):
    for wt in np.linspace(0.2, 3.0, 5):
        for gt in np.geomspace(1e-3, 1.0, 5):
            p = params(n, wt, gt, 1.0)
            exact = qfi_noec_exact(p).qfi
            num = oracle.qfi_numeric(p, "no-ec").qfi
            assert abs(exact - num) <= 1e-7 * num, (n, wt, gt)


def test_spectrum_matches_generic_spectral_formula():
    spec = hamming_spectrum(params(2, 1.0, 0.1, 1.0))
    q = qfi_noec_exact(params(2, 1.0, 0.1, 1.0)).qfi
    assert math.isclose(qfi_spectral(spec.decomposition()), q, rel_tol=1e-12)


@pytest.mark.parametrize("n", [5, 10, 25])
def test_optimal_time_scale(n):
    # omega >> gamma; closer to gamma the optimum drifts past 2/(n gamma)
    gamma, omega = 1.0, 100.0
    ts = np.geomspace(0.1 / n, 10.0 / n, 1000)
    qs = [qfi_noec_exact(params(n, omega, gamma, t)).qfi for t in ts]
    best = ts[int(np.argmax(qs))]
    assert 0.5 / (n * gamma) <= best <= 2.0 / (n * gamma)


def test_long_times_destroy_information():
    assert qfi_noec_exact(params(25, 1.0, 1.0, 5.0)).normalized < 1e-3


def test_taylor_formula():
    assert qfi_noec_taylor(params(4, 1.0, 0.0, 2.0)).qfi == 64.0
    q = qfi_noec_taylor(params(1, 5.0, 0.01, 1.0))
    assert math.isclose(q.qfi, 1 - (2 - 4 / 3) * 0.01, rel_tol=1e-15)


@pytest.mark.parametrize("n", [1, 5, 25])
def test_taylor_remainder_is_second_order_at_short_times(n):
    # slope measured where omega t is small enough for the linear term to be exact
    gts = np.geomspace(1e-4, 1e-2, 9)
    t = 1.0
    rem = []
    for gt in gts:
        p = params(n, 1e-3, gt, t)
        rem.append(abs(qfi_noec_exact(p).qfi - qfi_noec_taylor(p).qfi) / (n * t) ** 2)
    slope = np.polyfit(np.log(gts), np.log(rem), 1)[0]
    assert slope >= 1.9
