"""Noisy GHZ state without error correction.

The state after time ``t`` is block diagonal in the pairs ``{j, ~j}``.  Every
quantity depends on ``j`` only through its Hamming weight ``h``, so the
``2**n`` pairs collapse to ``n + 1`` weight classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Method, QfiResult, Scenario, SystemParams, validate
from .dual import Dual
from .fisher import SpectralDecomposition
from .kernels import signal_kernel

# pairs whose 1 - (r/s)**2 falls below this are treated as pure
PURE_TOL = 1e-14


@dataclass(frozen=True)
class HammingSpectrum:
    """Eigendata per Hamming class ``h = 0..n``.

    ``s`` and ``r_class`` already include the ``exp(-n gamma t)`` prefactor,
    so the pair eigenvalues are ``(s +- r_class) / 2``.  Each weight class
    holds ``multiplicity`` kets; a pair ``{j, ~j}`` is seen once from each
    side, hence the overall factor 1/2 in sums over classes.
    """

    n: int
    t: float
    prefactor: float
    multiplicity: np.ndarray
    s: np.ndarray
    r_class: np.ndarray
    theta: np.ndarray
    d_r_class: np.ndarray
    d_theta: np.ndarray
    log_weight: np.ndarray  # log of multiplicity * s / 2, the class probability
    purity_gap: np.ndarray  # 1 - (r/s)**2, computed without cancellation

    def eigenvalues(self) -> tuple[np.ndarray, np.ndarray]:
        return (self.s + self.r_class) / 2, (self.s - self.r_class) / 2

    def trace(self) -> float:
        return float(np.sum(np.exp(self.log_weight)))

    def decomposition(self) -> SpectralDecomposition:
        """Pair eigendata with multiplicity ``binom(n, h) / 2`` per class."""
        lp, lm = self.eigenvalues()
        return SpectralDecomposition(lp, lm, self.d_r_class / 2, -self.d_r_class / 2,
                                     self.d_theta, self.multiplicity / 2)


def _log_term(k1: int, log_a: Dual | None, k2: int, log_b: Dual | None) -> Dual | None:
    """``log(a**k1 * b**k2)``; None when a zero base carries a positive power."""
    out = Dual(0j, 0j)
    for k, lg in ((k1, log_a), (k2, log_b)):
        if k == 0:
            continue
        if lg is None:
            return None
        out = out + k * lg
    return out


def _log_add(l1: Dual | None, l2: Dual | None) -> Dual | None:
    if l1 is None:
        return l2
    if l2 is None:
        return l1
    if l1.a.real < l2.a.real:
        l1, l2 = l2, l1
    return l1 + (1 + (l2 - l1).exp()).log()


def hamming_spectrum(params: SystemParams, t: float | None = None) -> HammingSpectrum:
    """Weight-class spectrum of the GHZ state after free evolution for ``t``."""
    validate(params)
    n, omega, gamma = params.n, params.omega, params.gamma
    t = params.total_time if t is None else float(t)

    # kernel entries with one factor exp(-gamma t) absorbed per qubit
    decay = math.exp(-gamma * t)
    xm, xp, y = (decay * d for d in signal_kernel(omega, gamma, t).duals())
    log_xm, log_xp = xm.log(), xp.log()
    log_y = y.log() if y.a != 0 else None
    log_c = math.log1p(math.exp(-2 * gamma * t)) - math.log(2)  # cosh * exp(-gamma t)
    log_s = math.log(-math.expm1(-2 * gamma * t) / 2) if gamma * t > 0 else -math.inf

    h = np.arange(n + 1)
    log_mult = np.array([math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1) for k in h])
    s_log = np.empty(n + 1)
    r_log = np.empty(n + 1)
    theta = np.zeros(n + 1)
    d_log_r = np.zeros(n + 1)
    d_theta = np.zeros(n + 1)
    for k in h:
        s_log[k] = np.logaddexp(_mul(n - k, log_c) + _mul(k, log_s), _mul(k, log_c) + _mul(n - k, log_s))
        lr = _log_add(_log_term(k, log_xp, n - k, log_y), _log_term(n - k, log_xm, k, log_y))
        if lr is None:
            r_log[k] = -math.inf
            continue
        r_log[k] = lr.a.real
        theta[k] = lr.a.imag
        d_log_r[k] = lr.b.real
        d_theta[k] = lr.b.imag

    s = np.exp(s_log)
    r = np.exp(r_log)
    with np.errstate(invalid="ignore"):
        gap = -np.expm1(2 * (r_log - s_log))
    gap = np.where(np.isfinite(gap), gap, 1.0)
    return HammingSpectrum(
        n=n,
        t=t,
        prefactor=math.exp(-n * gamma * t),
        multiplicity=np.exp(log_mult),
        s=s,
        r_class=r,
        theta=theta,
        d_r_class=r * d_log_r,
        d_theta=d_theta,
        log_weight=log_mult + s_log - math.log(2),
        purity_gap=gap,
    )


def _mul(k: int, x: float) -> float:
    # k * log(0) with k == 0 means an empty product
    return 0.0 if k == 0 else k * x


def spectrum_qfi(spec: HammingSpectrum) -> float:
    total = 0.0
    for k in range(spec.n + 1):
        w = math.exp(spec.log_weight[k])
        if w == 0.0 or spec.s[k] == 0.0:  # underflowed class, weight ~1e-308 or less
            continue
        rho = spec.r_class[k] / spec.s[k]
        gap = spec.purity_gap[k]
        term = rho**2 * spec.d_theta[k] ** 2
        if gap >= PURE_TOL:
            term += (spec.d_r_class[k] / spec.s[k]) ** 2 / gap
        total += w * term
    return total


def qfi_noec_exact(params: SystemParams, t: float | None = None) -> QfiResult:
    spec = hamming_spectrum(params, t)
    return QfiResult.build(spectrum_qfi(spec), params.n, spec.t, Scenario.NO_EC, Method.EXACT)


def qfi_noec_taylor(params: SystemParams, t: float | None = None) -> QfiResult:
    """Short-time expansion ``n^2 t^2 (1 - (2 - 4/(3n)) gamma t)``."""
    validate(params)
    n = params.n
    t = params.total_time if t is None else float(t)
    q = n * n * t * t * (1 - (2 - 4 / (3 * n)) * params.gamma * t)
    return QfiResult.build(q, n, t, Scenario.NO_EC, Method.SERIES)
