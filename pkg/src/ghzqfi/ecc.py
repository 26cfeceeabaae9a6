"""GHZ sensing with repeated discrete error correction.

After every round of the parity-check code the anti-diagonal amplitudes lie
in a two-dimensional subspace (ancilla reads 0 or 1), so ``rounds`` rounds
reduce to a power of a 2x2 transfer matrix.  The state that results is a
rank-2 GHZ-like mixture characterised by ``R exp(+-i theta)``.  Everything
is carried in log-polar form with omega-derivatives so that powers such as
``r ** (n * rounds)`` with ``n * rounds ~ 1e9`` stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.optimize import minimize_scalar

from .core import Method, ParameterError, QfiResult, Scenario, SystemParams, validate
from .dual import Dual, DualComplexPolar, DualMatrix
from .kernels import round_factor, signal_kernel

PURE_TOL = 1e-14
# eigenvalue separation (relative) below which the eigenform is abandoned
EIGEN_SEPARATION_TOL = 1e-6
# 1 - R**2 below this is recomputed in extended precision; from ln R alone
# its relative error is ~1e-16 / (1 - R**2)
DEFECT_RECHECK = 1e-7
_DEFECT_DPS = 40


@dataclass(frozen=True)
class GhzMixedState:
    """``rho = sum_h w_h [(1+R)/2 |psi_+><psi_+| + (1-R)/2 |psi_-><psi_-|]``."""

    n: int
    t: float
    polar: DualComplexPolar  # R exp(i theta)
    weights: np.ndarray  # (1-p)**(n-h) * p**h for h = 0..n
    scenario: Scenario = Scenario.PARITY_GENERAL
    defect: float | None = None  # 1 - R**2 when known more accurately than from R

    @property
    def R(self) -> float:
        return self.polar.modulus

    @property
    def d_R(self) -> float:
        return self.polar.d_modulus

    @property
    def theta(self) -> float:
        return self.polar.phase

    @property
    def d_theta(self) -> float:
        return self.polar.d_phase

    @property
    def mixedness(self) -> float:
        """``1 - R**2`` without cancellation."""
        if self.defect is not None:
            return self.defect
        return -math.expm1(2.0 * self.polar.log_modulus)


@dataclass(frozen=True)
class RecurrenceData:
    q_plus: Dual
    q_minus: Dual
    mu_plus: Dual
    mu_minus: Dual
    upsilon_plus: Dual
    upsilon_minus: Dual
    a_plus: Dual  # q_+ ** n
    a_minus: Dual
    log_a_plus: Dual
    root: Dual  # (mu_+ - mu_-) / 2, formed without cancellation
    c: float  # ancilla kernel entries including exp(-xi tau)
    s: float
    steps: int  # number of transfer-matrix applications after the first round

    def transfer_matrix(self) -> DualMatrix:
        c, s = self.c, self.s
        return DualMatrix.from_duals(
            [[c * self.a_minus, s * self.a_plus], [s * self.a_minus, c * self.a_plus]]
        )


def classify(params: SystemParams) -> Scenario:
    if params.xi == 0 and params.p == 0:
        return Scenario.PARITY_IDEAL
    if params.p == 0:
        return Scenario.PARITY_NOISY_ANCILLA
    if params.xi == 0:
        return Scenario.PARITY_IMPERFECT
    return Scenario.PARITY_GENERAL


def class_weights(n: int, p: float) -> np.ndarray:
    h = np.arange(n + 1)
    if p == 0:
        return (h == 0).astype(float)
    return (1 - p) ** (n - h) * p**h


def _shifted_q(rf: DualComplexPolar, p: float) -> DualComplexPolar:
    """``q_+ exp(-i phi) = (1-p) + p exp(-2 i phi)`` in log-polar form."""
    phi, d_phi = rf.phase, rf.d_phase
    k = 4.0 * p * (1.0 - p)
    sin2 = math.sin(phi) ** 2
    log_mod2 = math.log1p(-k * sin2)
    d_log_mod2 = -k * math.sin(2 * phi) * d_phi / (1.0 - k * sin2)
    e = complex(math.cos(2 * phi), -math.sin(2 * phi))
    v = (1 - p) + p * e
    dv = -2j * p * e * d_phi
    return DualComplexPolar(0.5 * log_mod2, math.atan2(v.imag, v.real), 0.5 * d_log_mod2, (dv / v).imag)


def _phase_dual(phase: float, d_phase: float) -> Dual:
    z = complex(math.cos(phase), math.sin(phase))
    return Dual(z, 1j * d_phase * z)


def recurrence_data(params: SystemParams) -> RecurrenceData:
    """Per-round transfer data in the (ancilla 0, ancilla 1) subspace.

    ``c`` and ``s`` here carry the ancilla decay ``exp(-xi tau)``.
    """
    validate(params)
    n, p, xi, tau = params.n, params.p, params.xi, params.tau
    rf = round_factor(params.omega, params.gamma, tau)
    c = 0.5 * (1.0 + math.exp(-2 * xi * tau))
    s = -0.5 * math.expm1(-2 * xi * tau)

    e1 = _phase_dual(rf.phase, rf.d_phase)
    q_plus = (1 - p) * e1 + p * e1.conj()
    q_minus = q_plus.conj()
    shifted = _shifted_q(rf, p)
    # q_+**n with the modulus taken from the cancellation-free log
    a_polar = DualComplexPolar(n * shifted.log_modulus, n * (shifted.phase + rf.phase),
                               n * shifted.d_log_modulus, n * (shifted.d_phase + rf.d_phase))
    a_plus = a_polar.to_dual()
    a_minus = a_plus.conj()

    half_tr = c * (a_minus + a_plus) * 0.5
    # tr**2/4 - det rewritten with c**2 - exp(-2 xi tau) = s**2
    half_gap = c * (a_minus - a_plus) * 0.5
    disc = half_gap * half_gap + (s * s) * (a_minus * a_plus)
    # exact degeneracy: sqrt has no derivative, but the eigenform is not used then
    root = disc.sqrt() if disc.a != 0 else Dual(0j, 0j)
    en = _phase_dual(n * rf.phase, n * rf.d_phase)
    return RecurrenceData(
        q_plus=q_plus,
        q_minus=q_minus,
        mu_plus=half_tr + root,
        mu_minus=half_tr - root,
        upsilon_plus=c * en + s * en.conj(),
        upsilon_minus=c * en.conj() + s * en,
        a_plus=a_plus,
        a_minus=a_minus,
        log_a_plus=Dual(complex(a_polar.log_modulus, a_polar.phase),
                        complex(a_polar.d_log_modulus, a_polar.d_phase)),
        root=root,
        c=c,
        s=s,
        steps=params.rounds - 1,
    )


def _log_eigenvalue(rec: RecurrenceData, offset: Dual) -> Dual:
    """``log mu`` for ``mu = c a_+ + offset``, referenced to the nearer of ``c a_+-``.

    Multiplied by up to ``rounds`` later, so it must be accurate in absolute
    terms even when ``|mu|`` is within roundoff of 1.
    """
    log_c = math.log1p(-rec.s)
    # mu - c a_- = offset + c (a_+ - a_-); the rough value only picks the branch
    rough = offset.a + rec.c * (rec.a_plus.a - rec.a_minus.a)
    if abs(offset.a) <= abs(rough):
        return rec.log_a_plus + log_c + (offset / (rec.c * rec.a_plus)).log1p()
    other = (rec.s * rec.s) * (rec.a_minus * rec.a_plus) / offset
    return rec.log_a_plus.conj() + log_c + (other / (rec.c * rec.a_minus)).log1p()


def _log_power_apply(rec: RecurrenceData) -> Dual:
    """``log`` of the second component of ``K**steps @ upsilon``."""
    k = rec.steps
    ups = [rec.upsilon_minus, rec.upsilon_plus]
    if k == 0:
        return ups[1].log()
    mp, mm = rec.mu_plus, rec.mu_minus
    scale = max(abs(mp.a), abs(mm.a))
    if 2 * abs(rec.root.a) > EIGEN_SEPARATION_TOL * scale:
        # offsets mu - c a_+ for mu = mu_+-; their product is -s**2 a_+ a_-,
        # so the small one is recovered from the large one
        half_gap = rec.c * (rec.a_minus - rec.a_plus) * 0.5
        prod = -(rec.s * rec.s) * (rec.a_minus * rec.a_plus)
        off_p, off_m = half_gap + rec.root, half_gap - rec.root
        if abs(off_p.a) >= abs(off_m.a):
            off_m = prod / off_p
        else:
            off_p = prod / off_m
        # d is the dominant eigenvalue, o the other
        if abs(mp.a) >= abs(mm.a):
            off_d, off_o, sep = off_p, off_m, 2 * rec.root
        else:
            off_d, off_o, sep = off_m, off_p, -2 * rec.root
        log_d, log_o = _log_eigenvalue(rec, off_d), _log_eigenvalue(rec, off_o)
        ratio = (k * (log_o - log_d)).exp()
        cross = (rec.s * rec.a_minus) * ups[0]
        # second component of d**k P_d ups + o**k P_o ups
        w = (cross - off_o * ups[1]) + ratio * (off_d * ups[1] - cross)
        return k * log_d + w.log() - sep.log()
    vals, log_scale = rec.transfer_matrix().power(k).apply(ups)
    return vals[1].log() + log_scale


def _mp_kernel(params: SystemParams):
    """Extended-precision ``exp(-gamma tau) * (C, S)`` and the decay factor."""
    w, g, tau = (mpmath.mpf(x) for x in (params.omega, params.gamma, params.tau))
    z = (w * w - g * g) * tau * tau
    if z == 0:
        c, sinc = mpmath.mpf(1), tau
    else:
        root = mpmath.sqrt(mpmath.mpc(z))
        c, sinc = mpmath.re(mpmath.cos(root)), tau * mpmath.re(mpmath.sin(root) / root)
    return c, sinc, mpmath.exp(-g * tau), w, g


def _power_apply_mp(k: list, vec: list, power: int) -> list:
    a, b = vec
    m = [row[:] for row in k]
    while power:
        if power & 1:
            a, b = m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b
        power >>= 1
        if power:
            m = [[m[0][0] * m[0][0] + m[0][1] * m[1][0], m[0][0] * m[0][1] + m[0][1] * m[1][1]],
                 [m[1][0] * m[0][0] + m[1][1] * m[1][0], m[1][0] * m[0][1] + m[1][1] * m[1][1]]]
    return [a, b]


def _parity_defect(params: SystemParams) -> float:
    """``1 - R**2`` for the parity-check state, in extended precision."""
    with mpmath.workdps(_DEFECT_DPS):
        c0, sinc, decay, w, g = _mp_kernel(params)
        amp = decay * (c0 + (g + 1j * w) * sinc)
        r, phi = abs(amp), mpmath.arg(amp)
        n, p = params.n, mpmath.mpf(params.p)
        e = mpmath.exp(-2 * mpmath.mpf(params.xi) * mpmath.mpf(params.tau))
        c, s = (1 + e) / 2, (1 - e) / 2
        q = (1 - p) * mpmath.expj(phi) + p * mpmath.expj(-phi)
        a_p, a_m = q**n, mpmath.conj(q) ** n
        en = mpmath.expj(n * phi)
        v = _power_apply_mp([[c * a_m, s * a_p], [s * a_m, c * a_p]],
                            [c / en + s * en, c * en + s / en], params.rounds - 1)
        return float(1 - r ** (2 * n * params.rounds) * abs(v[1]) ** 2)


def solve_recurrence(params: SystemParams) -> GhzMixedState:
    """State after ``rounds`` rounds of parity-check correction."""
    validate(params)
    n, rounds = params.n, params.rounds
    rf = round_factor(params.omega, params.gamma, params.tau)
    total = n * rounds
    if params.xi == 0:
        polar = rf**total
        if params.p > 0:
            polar = polar * _shifted_q(rf, params.p) ** (n * (rounds - 1))
    else:
        log_w = _log_power_apply(recurrence_data(params))
        # the r**(n rounds) prefactor is a real modulus; phases live in q and upsilon
        lw_a, lw_b = complex(log_w.a), complex(log_w.b)
        nominal = total * rf.phase
        phase = nominal + math.remainder(lw_a.imag - nominal, 2 * math.pi)
        # R <= 1; the matrix-power path can overshoot by ~rounds * eps
        polar = DualComplexPolar(
            min(total * rf.log_modulus + lw_a.real, 0.0), phase,
            total * rf.d_log_modulus + lw_b.real, lw_b.imag,
        )
        if -math.expm1(2.0 * polar.log_modulus) < DEFECT_RECHECK:
            return GhzMixedState(n, params.total_time, polar, class_weights(n, params.p),
                                 classify(params), defect=max(_parity_defect(params), 0.0))
    return GhzMixedState(n, params.total_time, polar, class_weights(n, params.p), classify(params))


def qfi_from_state(state: GhzMixedState, method: Method = Method.EXACT) -> QfiResult:
    """``Rdot**2 / (1 - R**2) + R**2 thetadot**2``."""
    r2 = math.exp(2.0 * state.polar.log_modulus)
    gap = state.mixedness
    q = r2 * state.d_theta**2
    flags = ()
    if gap < PURE_TOL:
        flags = ("pure-state",)
    else:
        q += r2 * state.polar.d_log_modulus**2 / gap
    return QfiResult.build(q, state.n, state.t, state.scenario, method, flags)


def qfi_exact(params: SystemParams) -> QfiResult:
    return qfi_from_state(solve_recurrence(params))


def _f_series(params: SystemParams) -> float:
    gt = params.gamma * params.tau
    return 1 - 2 * gt + 7 * gt * gt / 3 + 4 * gt * params.tau / (3 * params.n * params.total_time)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ParameterError(msg)


def qfi_case1_series(params: SystemParams) -> QfiResult:
    validate(params)
    _require(params.xi == 0 and params.p == 0, "case-1 series needs xi = 0 and p = 0")
    n, t = params.n, params.total_time
    rf = round_factor(params.omega, params.gamma, params.tau)
    decay = math.exp(2 * n * params.rounds * rf.log_modulus)
    return QfiResult.build(n * n * t * t * decay * _f_series(params), n, t,
                           Scenario.PARITY_IDEAL, Method.SERIES)


_G1 = (2 / 3, 2 / 15, 16 / 315, -26 / 2835, 104 / 155925, -172 / 6081075)
_G2 = (0.0, 0.0, 2 / 9, -2 / 45, 2 / 525, -8 / 42525)
_G3 = (-4 / 3, -8 / 15, -32 / 105, 208 / 2835, -208 / 31185, 688 / 2027025)


def _even_series(coeffs, u: float) -> float:
    u2 = u * u
    return sum(c * u2**k for k, c in enumerate(coeffs))


def g_brackets(u: float) -> tuple[float, float, float]:
    """The three bracketed functions of ``u = n omega t`` that make up ``g``."""
    if abs(u) < 0.1:
        return _even_series(_G1, u), _even_series(_G2, u), _even_series(_G3, u)
    s2, c2 = math.sin(2 * u), math.cos(2 * u)
    b1 = (u * (1 + 3 * c2) + (u * u - 2) * s2) / u**3 + 2
    b2 = 2 * (u * math.cos(u) - math.sin(u)) ** 2 / (u * u)
    b3 = ((4 * u - 2 * u**3) * c2 - (2 - 5 * u * u) * s2) / u**3 - 4
    return b1, b2, b3


def g_coefficient(params: SystemParams) -> float:
    """First-order sensitivity of the proportionality factor to ancilla dephasing."""
    t, tau = params.total_time, params.tau
    b1, b2, b3 = g_brackets(params.n * params.omega * t)
    return b1 * t + b2 * tau + b3 * params.gamma * t * tau


def g_bounds(params: SystemParams) -> tuple[float, float]:
    t, tau = params.total_time, params.tau
    return (2 / 3 - 7 * params.gamma * tau) * t, 2.5 * (t + tau)


def qfi_case2_series(params: SystemParams) -> tuple[QfiResult, tuple[float, float]]:
    validate(params)
    _require(params.p == 0, "case-2 series needs p = 0")
    n, t = params.n, params.total_time
    rf = round_factor(params.omega, params.gamma, params.tau)
    decay = math.exp(2 * n * params.rounds * rf.log_modulus)
    q = n * n * t * t * decay * (_f_series(params) - g_coefficient(params) * params.xi)
    return QfiResult.build(q, n, t, Scenario.PARITY_NOISY_ANCILLA, Method.SERIES), g_bounds(params)


def qfi_case3_series(params: SystemParams) -> QfiResult:
    validate(params)
    _require(params.xi == 0, "case-3 series needs xi = 0")
    n, t, p = params.n, params.total_time, params.p
    rf = round_factor(params.omega, params.gamma, params.tau)
    log_q = _shifted_q(rf, p).log_modulus
    decay = math.exp(2 * n * params.rounds * (rf.log_modulus + log_q))
    h = (1 - 2 * p) ** 2 * _f_series(params) + 4 * p * ((1 - p) / n + 1 - 2 * p) * params.tau / t
    return QfiResult.build(n * n * t * t * decay * h, n, t, Scenario.PARITY_IMPERFECT, Method.SERIES)


def bitflip_transfer(params: SystemParams) -> DualMatrix:
    """Exact per-round map on the two logical corner amplitudes (0..0|, 1..1|)."""
    validate(params)
    n = params.n
    _require(n % 2 == 1, "bit-flip code needs odd n")
    decay = math.exp(-params.gamma * params.tau)
    xm, xp, y = (decay * d for d in signal_kernel(params.omega, params.gamma, params.tau).duals())
    half = n // 2
    eta_m = sum((math.comb(n, m) * xm ** (n - m) * y**m for m in range(half + 1)), Dual(0j))
    eta_p = sum((math.comb(n, m) * xp ** (n - m) * y**m for m in range(half + 1)), Dual(0j))
    zeta_m = sum((math.comb(n, m) * xm**m * y ** (n - m) for m in range(half + 1)), Dual(0j))
    zeta_p = sum((math.comb(n, m) * xp**m * y ** (n - m) for m in range(half + 1)), Dual(0j))
    return DualMatrix.from_duals([[eta_m, zeta_p], [zeta_m, eta_p]])


def bitflip_state(params: SystemParams) -> GhzMixedState:
    vals, log_scale = bitflip_transfer(params).power(params.rounds).apply([Dual(0.5), Dual(0.5)])
    log_z = (2 * vals[1]).log()
    a, b = complex(log_z.a), complex(log_z.b)
    polar = DualComplexPolar(a.real + log_scale, a.imag, b.real, b.imag)
    weights = class_weights(params.n, 0.0)
    return GhzMixedState(params.n, params.total_time, polar, weights, Scenario.BITFLIP)


def qfi_bitflip(params: SystemParams) -> QfiResult:
    return qfi_from_state(bitflip_state(params))


def t_opt(params: SystemParams) -> float:
    """Approximate total time maximising the ideal-correction QFI."""
    validate(params)
    if params.gamma == 0 or params.omega == 0:
        raise ParameterError("optimal sensing time is unbounded for gamma = 0 or omega = 0")
    return 3.0 / (2.0 * params.n * params.gamma * params.omega**2 * params.tau**2)


def case1_qfi_at(params: SystemParams, rounds: float) -> float:
    """Exact ideal-correction QFI for a real-valued number of rounds."""
    rf = round_factor(params.omega, params.gamma, params.tau)
    polar = rf ** (params.n * rounds)
    state = GhzMixedState(params.n, rounds * params.tau, polar, class_weights(params.n, 0.0))
    return qfi_from_state(state).qfi


def argmax_rounds_case1(params: SystemParams, upper: float | None = None) -> int:
    """Integer number of rounds maximising the exact ideal-correction QFI."""
    validate(params)
    if upper is None:
        upper = 100 * t_opt(params) / params.tau
    res = minimize_scalar(lambda lr: -case1_qfi_at(params, math.exp(lr)),
                          bounds=(0.0, math.log(upper)), method="bounded",
                          options={"xatol": 1e-10})
    best = math.exp(res.x)
    lo = max(1, math.floor(best))
    return max((lo, lo + 1), key=lambda k: case1_qfi_at(params, k))


def extract_g(params: SystemParams, xi_t: float | None = None) -> float:
    """First-order ancilla sensitivity read off the exact solver.

    ``g_hat = (f - Q_2 / (n t r**(n rounds))**2) / xi`` with ``f`` from the
    noiseless-ancilla state.  The response to ``xi`` stays linear only while
    ``xi t`` is well below the mixedness ``1 - R**2`` of that state, so the
    default probe is ``xi t = min(1e-6, 1e-2 (1 - R**2))``.
    """
    base = params.with_(xi=0.0, p=0.0)
    validate(base)
    n, t = base.n, base.total_time
    state = solve_recurrence(base)
    if xi_t is None:
        xi_t = min(1e-6, 1e-2 * state.mixedness)
    if xi_t <= 0:
        raise ParameterError("ancilla sensitivity undefined for a pure noiseless-ancilla state")
    rf = round_factor(base.omega, base.gamma, base.tau)
    norm = n * n * t * t * math.exp(2 * n * base.rounds * rf.log_modulus)
    xi = xi_t / t
    f = qfi_from_state(state).qfi / norm
    q2 = qfi_exact(base.with_(xi=xi)).qfi / norm
    return (f - q2) / xi
