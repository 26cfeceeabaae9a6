"""Spectral QFI for GHZ-pair states and Fisher information of a product POVM."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

NEG_TOL = 1e-12
DENOM_TOL = 1e-14


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigen-pairs ``lambda_+-`` of blocks ``(e^{-i theta/2}|j> +- e^{i theta/2}|~j>)/sqrt 2``.

    For such a pair ``|<psi_-+|d psi_+->|**2 = d_theta**2 / 4``, which is all
    the eigenvector information the QFI needs.
    """

    lam_plus: np.ndarray
    lam_minus: np.ndarray
    d_lam_plus: np.ndarray
    d_lam_minus: np.ndarray
    d_theta: np.ndarray
    multiplicity: np.ndarray

    @classmethod
    def rank2(cls, R: float, d_R: float, d_theta: float) -> "SpectralDecomposition":
        one = np.ones(1)
        return cls((1 + R) / 2 * one, (1 - R) / 2 * one, d_R / 2 * one, -d_R / 2 * one,
                   d_theta * one, one)

    def trace(self) -> float:
        return float(np.sum(self.multiplicity * (self.lam_plus + self.lam_minus)))


@dataclass(frozen=True)
class PovmAngle:
    """Phase of the product basis ``(|0> +- e^{i alpha}|1>)/sqrt 2``."""

    alpha: float

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")

    def __float__(self) -> float:
        return float(self.alpha)


def qfi_spectral(decomp: SpectralDecomposition) -> float:
    lp, lm = decomp.lam_plus, decomp.lam_minus
    if np.any(lp < -NEG_TOL) or np.any(lm < -NEG_TOL):
        raise ValueError("negative eigenvalue in spectral decomposition")
    total = 0.0
    for k in range(len(lp)):
        term = 0.0
        for lam, dlam in ((lp[k], decomp.d_lam_plus[k]), (lm[k], decomp.d_lam_minus[k])):
            if lam > 0:
                term += dlam**2 / lam
        s = lp[k] + lm[k]
        if s >= DENOM_TOL:
            # 2 (l+ - l-)^2/(l+ + l-) * (thetadot^2/4 + thetadot^2/4)
            term += (lp[k] - lm[k]) ** 2 / s * decomp.d_theta[k] ** 2
        total += decomp.multiplicity[k] * term
    return float(total)


def fisher_povm_terms(R: float, d_R: float, theta: float, d_theta: float, alpha: float) -> float:
    """Fisher information of the product measurement in ``{|alpha_+>, |alpha_->}``.

    Outcome probabilities depend on the state only through
    ``x = R cos(theta - alpha)``, giving ``xdot**2 / (1 - x**2)``.
    """
    c, s = math.cos(theta - alpha), math.sin(theta - alpha)
    x = R * c
    dx = d_R * c - R * d_theta * s
    den = 1.0 - x * x
    if den <= 0.0:
        return 0.0 if dx == 0.0 else math.inf
    return dx * dx / den


def fisher_povm(state, alpha: float | PovmAngle, n: int | None = None) -> float:
    """Fisher information of measuring every qubit of ``state`` in the alpha basis.

    ``n`` is accepted for symmetry with the explicit sum; the closed form does
    not depend on it.
    """
    return fisher_povm_terms(state.R, state.d_R, state.theta, state.d_theta, float(alpha))


def fisher_povm_as_printed(R: float, d_R: float, theta: float, d_theta: float, alpha: float) -> float:
    """The closed form with denominator ``1 - R**2 cos(theta - alpha)`` (unsquared cosine).

    Kept for comparison only; it disagrees with the explicit outcome sum
    whenever ``cos(theta - alpha)`` is not 0 or 1.
    """
    c, s = math.cos(theta - alpha), math.sin(theta - alpha)
    return (d_R * c - R * d_theta * s) ** 2 / (1.0 - R * R * c)


def _measurement_basis(alpha: float, m: int) -> np.ndarray:
    # only the summed phase matters for GHZ-pair states; split it evenly
    phase = np.exp(1j * alpha / m)
    single = np.array([[1.0, 1.0], [phase, -phase]]) / math.sqrt(2)
    return reduce(np.kron, [single] * m)


def povm_fisher_sum(rho: np.ndarray, d_rho: np.ndarray, alpha: float) -> float:
    """``sum_k Tr(E_k drho)**2 / Tr(E_k rho)`` over all ``2**m`` product outcomes.

    ``alpha`` is the total phase of the product basis, i.e. the phase that
    ``|1..1>`` acquires relative to ``|0..0>``.
    """
    m = int(round(math.log2(rho.shape[0])))
    v = _measurement_basis(alpha, m)
    probs = np.einsum("ik,ij,jk->k", v.conj(), rho, v).real
    dprobs = np.einsum("ik,ij,jk->k", v.conj(), d_rho, v).real
    keep = probs > 1e-300
    return float(np.sum(dprobs[keep] ** 2 / probs[keep]))


def rank2_density(R: float, theta: float, m: int) -> np.ndarray:
    """``(1+R)/2 |psi_+><psi_+| + (1-R)/2 |psi_-><psi_-|`` on ``m`` qubits."""
    dim = 2**m
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = rho[-1, -1] = 0.5
    rho[0, -1] = 0.5 * R * np.exp(-1j * theta)
    rho[-1, 0] = 0.5 * R * np.exp(1j * theta)
    return rho


def rank2_density_derivative(R: float, d_R: float, theta: float, d_theta: float, m: int) -> np.ndarray:
    dim = 2**m
    d_rho = np.zeros((dim, dim), dtype=complex)
    d_rho[0, -1] = 0.5 * (d_R - 1j * R * d_theta) * np.exp(-1j * theta)
    d_rho[-1, 0] = np.conj(d_rho[0, -1])
    return d_rho
