"""Single-qubit evolution kernels over one interval ``tau``.

With ``Delta = sqrt(omega**2 - gamma**2)`` the anti-diagonal kernel of a
sensing qubit is ``[[x_-, y], [y, x_+]]`` (times ``exp(-gamma tau)``), and the
diagonal kernel is ``[[cosh, sinh], [sinh, cosh]]``.  Both depend on Delta
only through ``Delta**2``, so everything is evaluated as an entire function
of ``z = Delta**2 tau**2`` and the trig/hyperbolic branches meet smoothly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .dual import Dual, DualComplexPolar

# |z| below this uses the power series; keeps d(sinc)/dz free of cancellation
SERIES_CUTOFF = 1e-2
_SERIES_TERMS = 10


@dataclass(frozen=True)
class TrigDelta:
    cos_term: float
    sinc_term: float
    d_cos_term: float
    d_sinc_term: float


@dataclass(frozen=True)
class SignalKernel:
    x_minus: complex
    x_plus: complex
    y: float
    d_x_minus: complex
    d_x_plus: complex
    d_y: float

    def duals(self) -> tuple[Dual, Dual, Dual]:
        """``(x_minus, x_plus, y)`` as omega-duals."""
        return (
            Dual(self.x_minus, self.d_x_minus),
            Dual(self.x_plus, self.d_x_plus),
            Dual(self.y, self.d_y),
        )


@dataclass(frozen=True)
class DiagonalKernel:
    c: float
    s: float
    decay: float


def _cos_sinc_series(z: float) -> tuple[float, float, float, float]:
    # C = sum (-z)^k/(2k)!, S = sum (-z)^k/(2k+1)!, plus dC/dz, dS/dz
    c = s = dc = ds = 0.0
    term_c = 1.0  # (-z)^k / (2k)!
    term_s = 1.0  # (-z)^k / (2k+1)!
    for k in range(_SERIES_TERMS):
        c += term_c
        s += term_s
        # d/dz (-z)^(k+1)/m! = -(k+1) (-z)^k / m!
        dc -= (k + 1) * term_c / ((2 * k + 1) * (2 * k + 2))
        ds -= (k + 1) * term_s / ((2 * k + 2) * (2 * k + 3))
        term_c *= -z / ((2 * k + 1) * (2 * k + 2))
        term_s *= -z / ((2 * k + 2) * (2 * k + 3))
    return c, s, dc, ds


def _cos_sinc(z: float) -> tuple[float, float, float, float]:
    """``cos(sqrt z)``, ``sin(sqrt z)/sqrt z`` and their z-derivatives."""
    if abs(z) < SERIES_CUTOFF:
        return _cos_sinc_series(z)
    if z > 0:
        w = math.sqrt(z)
        c, s = math.cos(w), math.sin(w) / w
    else:
        w = math.sqrt(-z)
        c, s = math.cosh(w), math.sinh(w) / w
    return c, s, -0.5 * s, (c - s) / (2.0 * z)


def _divided_cos_sinc(z: float, z0: float) -> tuple[float, float]:
    """Divided differences ``(C(z) - C(z0)) / (z - z0)`` and the same for ``S``."""
    h = z - z0
    if max(abs(z), abs(z0)) < 1.0:
        # (z**k - z0**k)/(z - z0) = sum_j z**j z0**(k-1-j), built up recursively
        dc = ds = 0.0
        hk, z0k = 1.0, 1.0
        fact_c, fact_s = 2.0, 6.0  # (2k)!, (2k+1)! at k = 1
        sign = -1.0
        for k in range(1, 14):
            dc += sign * hk / fact_c
            ds += sign * hk / fact_s
            z0k *= z0
            hk = z * hk + z0k
            fact_c *= (2 * k + 1) * (2 * k + 2)
            fact_s *= (2 * k + 2) * (2 * k + 3)
            sign = -sign
        return dc, ds
    c, s, _, _ = _cos_sinc(z)
    c0, s0, _, _ = _cos_sinc(z0)
    if h >= 0.5 * abs(z0) or z > 0:
        return (c - c0) / h, (s - s0) / h
    # both arguments negative and close: hyperbolic half-angle forms
    v, v0 = math.sqrt(-z), math.sqrt(-z0)
    dv = -h / (v + v0)
    sh_half = math.sinh(0.5 * dv)
    d_cosh = 2.0 * math.sinh(0.5 * (v + v0)) * sh_half
    d_sinh = 2.0 * math.cosh(0.5 * (v + v0)) * sh_half
    d_s = (v0 * d_sinh - dv * math.sinh(v0)) / (v * v0)
    return d_cosh / h, d_s / h


def trig_delta(omega: float, gamma: float, tau: float) -> TrigDelta:
    """``cos(Delta tau)`` and ``sin(Delta tau)/Delta`` with omega-derivatives."""
    z = (omega * omega - gamma * gamma) * tau * tau
    dz = 2.0 * omega * tau * tau
    c, s, dc, ds = _cos_sinc(z)
    return TrigDelta(c, tau * s, dc * dz, tau * ds * dz)


def _trig_duals(omega: float, gamma: float, tau: float) -> tuple[Dual, Dual]:
    td = trig_delta(omega, gamma, tau)
    return Dual(td.cos_term, td.d_cos_term), Dual(td.sinc_term, td.d_sinc_term)


def signal_kernel(omega: float, gamma: float, tau: float) -> SignalKernel:
    """Entries of the anti-diagonal single-qubit kernel, without ``exp(-gamma tau)``."""
    c, t = _trig_duals(omega, gamma, tau)
    w = Dual(omega, 1.0)
    x_minus = c - 1j * (w * t)
    x_plus = c + 1j * (w * t)
    y = gamma * t
    return SignalKernel(
        complex(x_minus.a), complex(x_plus.a), float(y.a),
        complex(x_minus.b), complex(x_plus.b), float(y.b),
    )


def round_factor(omega: float, gamma: float, tau: float) -> DualComplexPolar:
    """``r exp(i phi) = exp(-gamma tau) (x_+ + y)`` in log-polar form.

    With ``T`` the sinc term, ``r**2 = exp(-2 gamma tau) (1 + u)`` where
    ``u = 2 gamma C T + 2 gamma**2 T**2`` (from ``cos**2 + sin**2 = 1``).  At
    omega = 0 the same expression equals ``exp(2 gamma tau) - 1`` exactly, so
    ``ln r**2`` is formed from the difference of ``u`` between ``Delta**2``
    and ``-gamma**2`` via divided differences, which keeps ``1 - r**2`` at
    full relative accuracy even when it is far below ``gamma tau``.
    """
    c, t = _trig_duals(omega, gamma, tau)
    u = 2.0 * gamma * (c * t) + 2.0 * gamma * gamma * (t * t)
    a, b2 = gamma * tau, (omega * tau) ** 2
    z0 = -a * a
    _, zs, _, _ = _cos_sinc(z0 + b2)
    c0, s0, _, _ = _cos_sinc(z0)
    dc, ds = _divided_cos_sinc(z0 + b2, z0)
    du = b2 * (2.0 * a * (dc * zs + c0 * ds) + 2.0 * a * a * ds * (zs + s0))
    w = c + (gamma + 1j * Dual(omega, 1.0)) * t
    x = du * math.exp(-2.0 * a)
    if x > -0.5:
        log_r2 = math.log1p(x)
    else:
        # r well below 1: |w|**2 = (C + gamma T)**2 + omega**2 T**2 has no cancellation
        log_r2 = 2.0 * math.log(abs(w.a)) - 2.0 * a
    log_r2 = min(log_r2, 0.0)  # r <= 1; only roundoff can push it above
    d_log_r2 = u.b / (1.0 + u.a)

    phase = cmath.phase(w.a)
    d_phase = (w.b / w.a).imag
    return DualComplexPolar(0.5 * log_r2, phase, 0.5 * d_log_r2, d_phase)


def diagonal_kernel(rate: float, tau: float) -> DiagonalKernel:
    return DiagonalKernel(math.cosh(rate * tau), math.sinh(rate * tau), rate * tau)
