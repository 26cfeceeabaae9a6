"""Brute-force reference simulator.

Evolves the diagonal (``a``) and anti-diagonal (``b``) amplitude vectors of
the full ``2**m``-dimensional density matrix with dense generators, dense
matrix exponentials and explicit correction matrices.  Nothing here calls the
closed-form kernels; the QFI comes from finite differences in omega.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.linalg import expm

from .core import Method, ParameterError, QfiResult, Scenario, SystemParams, validate
from .fisher import SpectralDecomposition, povm_fisher_sum, qfi_spectral

MAX_DIM = 2**12


class DegenerateSpectrumWarning(UserWarning):
    pass


@dataclass(frozen=True)
class AmplitudeState:
    a: np.ndarray  # alpha_{j,j}
    b: np.ndarray  # alpha_{j,~j}
    m: int

    @classmethod
    def ghz(cls, m: int) -> "AmplitudeState":
        dim = 2**m
        a = np.zeros(dim)
        b = np.zeros(dim, dtype=complex)
        a[0] = a[-1] = b[0] = b[-1] = 0.5
        return cls(a, b, m)

    def density_matrix(self) -> np.ndarray:
        dim = 2**self.m
        rho = np.diag(self.a.astype(complex))
        idx = np.arange(dim)
        rho[idx, dim - 1 - idx] += self.b
        return rho


@dataclass(frozen=True)
class GeneratorPair:
    A: np.ndarray
    B: np.ndarray


def _kron_sum(blocks: list[np.ndarray]) -> np.ndarray:
    """``sum_k I x .. x blocks[k] x .. x I``."""
    m = len(blocks)
    eye = np.eye(2)
    total = 0
    for k, blk in enumerate(blocks):
        total = total + reduce(np.kron, [eye] * k + [blk] + [eye] * (m - k - 1))
    return total


def build_generators(n: int, omega: float, gamma: float, xi: float = 0.0,
                     with_ancilla: bool = False) -> GeneratorPair:
    m = n + 1 if with_ancilla else n
    if n < 1 or 2**m > MAX_DIM:
        raise ParameterError(f"oracle dimension 2**{m} outside 1..{MAX_DIM}")
    dephase = np.array([[-gamma, gamma], [gamma, -gamma]])
    signal = np.array([[-1j * omega - gamma, gamma], [gamma, 1j * omega - gamma]])
    a_blocks = [dephase] * n
    b_blocks = [signal] * n
    if with_ancilla:
        anc = np.array([[-xi, xi], [xi, -xi]])
        a_blocks.append(anc)
        b_blocks.append(anc.astype(complex))
    return GeneratorPair(_kron_sum(a_blocks).real, _kron_sum(b_blocks))


def propagators(gen: GeneratorPair, tau: float) -> tuple[np.ndarray, np.ndarray]:
    return expm(gen.A * tau), expm(gen.B * tau)


def evolve(state: AmplitudeState, gen: GeneratorPair, tau: float) -> AmplitudeState:
    ea, eb = propagators(gen, tau)
    return AmplitudeState(ea @ state.a, eb @ state.b, state.m)


def parity_check_matrix(n: int, p: float) -> np.ndarray:
    """Correction map with the ancilla as the last (least significant) qubit."""
    to0 = np.array([[1 - p, 1 - p], [p, p]])
    to1 = np.array([[p, p], [1 - p, 1 - p]])
    anc0 = np.diag([1.0, 0.0])
    anc1 = np.diag([0.0, 1.0])
    return np.kron(reduce(np.kron, [to0] * n), anc0) + np.kron(reduce(np.kron, [to1] * n), anc1)


def _weights(m: int) -> np.ndarray:
    return np.array([bin(j).count("1") for j in range(2**m)])


def bitflip_matrix(n: int) -> np.ndarray:
    if n % 2 == 0:
        raise ParameterError("bit-flip code needs odd n")
    h = _weights(n)
    dim = 2**n
    e = np.zeros((dim, dim))
    e[0, h < n / 2] = 1.0
    e[dim - 1, h > n / 2] = 1.0
    return e


def apply_parity_check(state: AmplitudeState, p: float) -> AmplitudeState:
    n = state.m - 1
    if n < 1:
        raise ParameterError("parity check needs an ancilla qubit")
    e = parity_check_matrix(n, p)
    return AmplitudeState(e @ state.a, e @ state.b, state.m)


def apply_bitflip_code(state: AmplitudeState) -> AmplitudeState:
    e = bitflip_matrix(state.m)
    return AmplitudeState(e @ state.a, e @ state.b, state.m)


def final_state(params: SystemParams, scenario: Scenario | str) -> AmplitudeState:
    """Amplitudes after the full protocol, using one-round maps and matrix powers."""
    validate(params)
    scenario = Scenario(scenario)
    n = params.n
    if scenario is Scenario.NO_EC:
        gen = build_generators(n, params.omega, params.gamma)
        return evolve(AmplitudeState.ghz(n), gen, params.total_time)
    if scenario is Scenario.BITFLIP:
        gen = build_generators(n, params.omega, params.gamma)
        e = bitflip_matrix(n)
        m = n
    else:
        gen = build_generators(n, params.omega, params.gamma, params.xi, with_ancilla=True)
        e = parity_check_matrix(n, params.p)
        m = n + 1
    ea, eb = propagators(gen, params.tau)
    ta = np.linalg.matrix_power(e @ ea, params.rounds)
    tb = np.linalg.matrix_power(e @ eb, params.rounds)
    s0 = AmplitudeState.ghz(m)
    return AmplitudeState(ta @ s0.a, tb @ s0.b, m)


def _pairs(m: int) -> tuple[np.ndarray, np.ndarray]:
    j = np.arange(2 ** (m - 1))
    return j, 2**m - 1 - j


def pair_spectrum(state: AmplitudeState) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Eigenvalues and coherence phase of each ``{j, ~j}`` block."""
    j, jb = _pairs(state.m)
    mean = 0.5 * (state.a[j] + state.a[jb])
    half_diff = 0.5 * (state.a[j] - state.a[jb])
    rad = np.sqrt(half_diff**2 + np.abs(state.b[j]) ** 2)
    return mean + rad, mean - rad, state.b[jb]


def qfi_numeric(params: SystemParams, scenario: Scenario | str) -> QfiResult:
    """Central finite-difference QFI from the brute-force state."""
    validate(params)
    scenario = Scenario(scenario)
    omega = params.omega
    delta = max(1e-6, 1e-6 * abs(omega))
    lo = pair_spectrum(final_state(params.with_(omega=omega - delta), scenario))
    hi = pair_spectrum(final_state(params.with_(omega=omega + delta), scenario))
    mid_state = final_state(params, scenario)
    lp, lm, _ = pair_spectrum(mid_state)

    j, jb = _pairs(mid_state.m)
    flags = []
    if np.max(np.abs(mid_state.a[j] - mid_state.a[jb])) > 1e-10:
        flags.append("asymmetric-populations")
    d_lp = (hi[0] - lo[0]) / (2 * delta)
    d_lm = (hi[1] - lo[1]) / (2 * delta)
    with np.errstate(invalid="ignore", divide="ignore"):
        d_theta = np.angle(hi[2] / lo[2]) / (2 * delta)
    d_theta = np.where(np.isfinite(d_theta), d_theta, 0.0)

    # eigenvalues at roundoff level carry no usable derivative
    floor = 1e-13 * (lp + lm)
    tiny = lm <= floor
    lm = np.where(tiny, 0.0, lm)
    d_lm = np.where(tiny, 0.0, d_lm)
    gaps = lp - lm
    if np.any((gaps > 0) & (gaps < 10 * delta) & (lp > floor)):
        flags.append("degenerate-spectrum")
        warnings.warn("eigenvalue gap below 10*delta; oracle QFI may be inaccurate",
                      DegenerateSpectrumWarning, stacklevel=2)
    decomp = SpectralDecomposition(lp, lm, d_lp, d_lm, d_theta, np.ones_like(lp))
    q = qfi_spectral(decomp)
    return QfiResult.build(q, params.n, params.total_time, scenario, Method.ORACLE, flags)


def fisher_numeric(params: SystemParams, scenario: Scenario | str, alpha: float) -> float:
    """Fisher information of the product alpha-basis measurement on the brute-force state."""
    validate(params)
    delta = max(1e-6, 1e-6 * abs(params.omega))
    lo = final_state(params.with_(omega=params.omega - delta), scenario).density_matrix()
    hi = final_state(params.with_(omega=params.omega + delta), scenario).density_matrix()
    rho = final_state(params, scenario).density_matrix()
    return povm_fisher_sum(rho, (hi - lo) / (2 * delta), alpha)
