import math
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ghzqfi import oracle
from ghzqfi.core import ParameterError, SystemParams
from ghzqfi.ecc import bitflip_state, qfi_exact, solve_recurrence
from ghzqfi.kernels import signal_kernel
from ghzqfi.noec import qfi_noec_exact
from ghzqfi.oracle import AmplitudeState, build_generators, evolve


def check_conservation(state: AmplitudeState):
    dim = 2**state.m
    rev = dim - 1 - np.arange(dim)
    assert abs(state.a.sum() - 1) < 1e-10
    assert np.all(np.abs(state.b - np.conj(state.b[rev])) < 1e-12)
    assert np.all(np.abs(state.b) <= np.sqrt(np.clip(state.a * state.a[rev], 0, None)) + 1e-10)


def test_single_qubit_generators():
    g = build_generators(1, 2.0, 0.3)
    assert np.array_equal(g.A, [[-0.3, 0.3], [0.3, -0.3]])
    assert np.allclose(g.B, [[-2j - 0.3, 0.3], [0.3, 2j - 0.3]])


def test_ancilla_generators_are_classical():
    g = build_generators(2, 1.0, 0.2, xi=0.05, with_ancilla=True)
    assert g.A.shape == (8, 8)
    assert np.allclose(g.A.sum(axis=1), 0) and np.allclose(g.A, g.A.T)
    assert np.allclose(g.B - np.diag(np.diag(g.B)), g.A - np.diag(np.diag(g.A)))


def test_dimension_guard():
    with pytest.raises(ParameterError):
        build_generators(12, 1.0, 1.0, with_ancilla=True)
    with pytest.raises(ParameterError):
        build_generators(0, 1.0, 1.0)


def test_zero_time_is_identity():
    s = AmplitudeState.ghz(3)
    out = evolve(s, build_generators(3, 1.0, 0.5), 0.0)
    assert np.array_equal(out.a, s.a) and np.array_equal(out.b, s.b)


def test_noiseless_single_qubit_rotates_phase():
    s = AmplitudeState.ghz(1)
    out = evolve(s, build_generators(1, 2.0, 0.0), 0.3)
    assert np.allclose(out.a, s.a)
    assert np.allclose(out.b, [0.5 * np.exp(-0.6j), 0.5 * np.exp(0.6j)])


def test_two_qubits_match_kernel_tensor_product():
    omega, gamma, tau = 0.3, 0.05, 1.0
    k = signal_kernel(omega, gamma, tau)
    single = math.exp(-gamma * tau) * np.array([[k.x_minus, k.y], [k.y, k.x_plus]])
    s = AmplitudeState.ghz(2)
    out = evolve(s, build_generators(2, omega, gamma), tau)
    assert np.allclose(out.b, np.kron(single, single) @ s.b, rtol=0, atol=1e-10)


def test_parity_check_examples():
    ghz = AmplitudeState.ghz(3)
    out = oracle.apply_parity_check(ghz, 0.0)
    assert np.array_equal(out.a, ghz.a) and np.array_equal(out.b, ghz.b)
    a = np.zeros(8)
    a[0b100] = 1.0  # first sensing qubit flipped, ancilla 0
    out = oracle.apply_parity_check(AmplitudeState(a, np.zeros(8, complex), 3), 0.0)
    assert out.a[0] == 1.0 and out.a.sum() == 1.0
    with pytest.raises(ParameterError):
        oracle.apply_parity_check(AmplitudeState.ghz(1).__class__(np.ones(2) / 2, np.zeros(2, complex), 0), 0.0)


def test_one_round_parity_check_matches_recurrence():
    params = SystemParams(n=2, omega=1.0, gamma=1.0, p=0.06, tau=0.01, rounds=1)
    gen = build_generators(2, params.omega, params.gamma, 0.0, with_ancilla=True)
    s = oracle.apply_parity_check(evolve(AmplitudeState.ghz(3), gen, params.tau), params.p)
    z = 2 * np.sum(s.b[1::2])
    state = solve_recurrence(params)
    assert abs(z - state.R * np.exp(1j * state.theta)) < 1e-10


def test_bitflip_code_examples():
    a = np.zeros(8)
    a[[0b001, 0b010, 0b100]] = 1 / 6
    a[[0b011, 0b101, 0b110]] = 1 / 6
    out = oracle.apply_bitflip_code(AmplitudeState(a, np.zeros(8, complex), 3))
    assert math.isclose(out.a[0], 0.5) and math.isclose(out.a[7], 0.5)
    with pytest.raises(ParameterError):
        oracle.bitflip_matrix(4)


def test_bitflip_rounds_match_transfer_matrix():
    params = SystemParams(n=3, omega=2.0, gamma=0.5, tau=0.02, rounds=4)
    gen = build_generators(3, params.omega, params.gamma)
    s = AmplitudeState.ghz(3)
    for _ in range(params.rounds):
        s = oracle.apply_bitflip_code(evolve(s, gen, params.tau))
    state = bitflip_state(params)
    assert abs(2 * s.b[-1] - state.R * np.exp(1j * state.theta)) < 1e-9


@pytest.mark.parametrize("xi, p", [(0.0, 0.0), (0.2, 0.0), (0.0, 0.06), (0.2, 0.06)])
def test_conservation_after_every_step(xi, p):
    gen = build_generators(2, 3.0, 0.7, xi, with_ancilla=True)
    s = AmplitudeState.ghz(3)
    for _ in range(5):
        s = evolve(s, gen, 0.05)
        check_conservation(s)
        s = oracle.apply_parity_check(s, p)
        check_conservation(s)


def test_conservation_bitflip_and_free():
    gen = build_generators(3, 3.0, 0.7)
    s = AmplitudeState.ghz(3)
    for _ in range(5):
        s = evolve(s, gen, 0.05)
        check_conservation(s)
        s = oracle.apply_bitflip_code(s)
        check_conservation(s)


def _permute(vec, perm, m):
    out = np.empty_like(vec)
    for j in range(2**m):
        bits = [(j >> (m - 1 - k)) & 1 for k in range(m)]
        new = reduce(lambda acc, b: 2 * acc + b, [bits[perm[k]] for k in range(m)], 0)
        out[new] = vec[j]
    return out


@given(st.permutations([0, 1, 2]), st.integers(0, 2**32 - 1))
def test_permutation_invariance(perm, seed):
    rng = np.random.default_rng(seed)
    a = rng.random(8)
    a /= a.sum()
    b = rng.normal(size=8) + 1j * rng.normal(size=8)
    gen = build_generators(3, 1.3, 0.4)
    direct = evolve(AmplitudeState(_permute(a, perm, 3), _permute(b, perm, 3), 3), gen, 0.7)
    after = evolve(AmplitudeState(a, b, 3), gen, 0.7)
    assert np.allclose(direct.a, _permute(after.a, perm, 3), atol=1e-12)
    assert np.allclose(direct.b, _permute(after.b, perm, 3), atol=1e-12)


@given(st.floats(0, 1), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_semigroup(t1, t2, seed):
    rng = np.random.default_rng(seed)
    gen = build_generators(2, 2.0, 0.6, 0.3, with_ancilla=True)
    a = rng.random(8)
    b = rng.normal(size=8) + 1j * rng.normal(size=8)
    s = AmplitudeState(a / a.sum(), b, 3)
    once = evolve(s, gen, t1 + t2)
    twice = evolve(evolve(s, gen, t1), gen, t2)
    assert np.allclose(once.a, twice.a, rtol=0, atol=1e-10)
    assert np.allclose(once.b, twice.b, rtol=0, atol=1e-10)


@pytest.mark.parametrize("scenario", ["no-ec", "parity-ideal", "parity-general", "bitflip"])
def test_noiseless_qfi_is_heisenberg(scenario):
    params = SystemParams(n=3, omega=1.5, gamma=0.0, xi=0.1, p=0.02, tau=0.2, rounds=3)
    if scenario in ("no-ec", "parity-ideal", "bitflip"):
        params = params.with_(xi=0.0, p=0.0)
    q = oracle.qfi_numeric(params, scenario)
    if scenario == "parity-general":
        # imperfect syndromes still degrade a noiseless signal
        assert q.normalized < 1
    else:
        assert math.isclose(q.normalized, 1.0, rel_tol=1e-6)


def test_oracle_agrees_with_closed_forms():
    p = SystemParams(n=2, omega=1.0, gamma=0.1, tau=1.0)
    assert math.isclose(oracle.qfi_numeric(p, "no-ec").qfi, qfi_noec_exact(p).qfi, rel_tol=1e-7)
    p = SystemParams(n=2, omega=2.0, gamma=0.3, tau=0.05, rounds=4)
    assert math.isclose(oracle.qfi_numeric(p, "parity-ideal").qfi, qfi_exact(p).qfi, rel_tol=1e-7)


def test_degenerate_spectrum_is_flagged():
    # coherence long gone: each pair's eigenvalues coincide
    p = SystemParams(n=2, omega=20.0, gamma=1.0, tau=20.0)
    with pytest.warns(oracle.DegenerateSpectrumWarning):
        q = oracle.qfi_numeric(p, "no-ec")
    assert "degenerate-spectrum" in q.flags
