"""First-order forward-mode duals in the signal frequency omega.

Every closed-form quantity in this package is carried together with its
derivative with respect to omega.  ``Dual`` handles scalars (real or
complex), ``DualMatrix`` handles the 2x2 transfer matrices, and
``DualComplexPolar`` stores a complex number by its logarithm so that huge
powers such as ``r ** (n * rounds)`` never under- or overflow.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

Number = Union[int, float, complex]


class Dual:
    """Value ``a`` with derivative ``b`` (both may be complex)."""

    __slots__ = ("a", "b")

    def __init__(self, a: Number, b: Number = 0.0):
        self.a = a
        self.b = b

    @staticmethod
    def lift(x: "Dual | Number") -> "Dual":
        return x if isinstance(x, Dual) else Dual(x, 0.0)

    def __add__(self, other):
        o = Dual.lift(other)
        return Dual(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = Dual.lift(other)
        return Dual(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return Dual.lift(other) - self

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __mul__(self, other):
        o = Dual.lift(other)
        return Dual(self.a * o.a, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Dual.lift(other)
        return Dual(self.a / o.a, (self.b * o.a - self.a * o.b) / (o.a * o.a))

    def __rtruediv__(self, other):
        return Dual.lift(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise TypeError("Dual supports non-negative integer powers only")
        k = int(k)
        if k == 0:
            return Dual(1.0, 0.0)
        # k * a**(k-1) * b stays finite when a == 0
        return Dual(self.a**k, k * self.a ** (k - 1) * self.b)

    def conj(self) -> "Dual":
        return Dual(complex(self.a).conjugate(), complex(self.b).conjugate())

    def exp(self) -> "Dual":
        e = cmath.exp(self.a) if isinstance(self.a, complex) else math.exp(self.a)
        return Dual(e, e * self.b)

    def log(self) -> "Dual":
        return Dual(cmath.log(self.a), self.b / self.a)

    def log1p(self) -> "Dual":
        """``log(1 + self)``, accurate when ``self`` is small."""
        z = complex(self.a)
        log_mod = 0.5 * math.log1p(2.0 * z.real + abs(z) ** 2)
        value = complex(log_mod, math.atan2(z.imag, 1.0 + z.real))
        return Dual(value, self.b / (1.0 + z))

    def sqrt(self) -> "Dual":
        s = cmath.sqrt(self.a)
        return Dual(s, self.b / (2 * s))

    def __repr__(self) -> str:
        return f"Dual({self.a!r}, {self.b!r})"


@dataclass(frozen=True)
class DualComplexPolar:
    """A complex number ``modulus * exp(i phase)`` and its omega-derivatives.

    The modulus is held as its logarithm; ``modulus`` and ``d_modulus`` are
    derived.  The phase is not wrapped, so products of many round factors
    keep the accumulated phase.
    """

    log_modulus: float
    phase: float
    d_log_modulus: float
    d_phase: float

    @property
    def modulus(self) -> float:
        return math.exp(self.log_modulus)

    @property
    def d_modulus(self) -> float:
        return self.modulus * self.d_log_modulus

    @property
    def wrapped_phase(self) -> float:
        """Phase reduced to (-pi, pi]."""
        w = math.remainder(self.phase, 2 * math.pi)
        return math.pi if w == -math.pi else w

    @classmethod
    def from_log(cls, log_z: Dual) -> "DualComplexPolar":
        """Build from a dual of ``log z`` (real part log-modulus, imag part phase)."""
        la, lb = complex(log_z.a), complex(log_z.b)
        return cls(la.real, la.imag, lb.real, lb.imag)

    @classmethod
    def from_dual(cls, z: Dual) -> "DualComplexPolar":
        return cls.from_log(z.log())

    def __mul__(self, other: "DualComplexPolar") -> "DualComplexPolar":
        return DualComplexPolar(
            self.log_modulus + other.log_modulus,
            self.phase + other.phase,
            self.d_log_modulus + other.d_log_modulus,
            self.d_phase + other.d_phase,
        )

    def __pow__(self, k: float) -> "DualComplexPolar":
        # real exponents allowed: used for continuous-time optimisation
        return DualComplexPolar(
            k * self.log_modulus, k * self.phase, k * self.d_log_modulus, k * self.d_phase
        )

    def conj(self) -> "DualComplexPolar":
        return DualComplexPolar(self.log_modulus, -self.phase, self.d_log_modulus, -self.d_phase)

    def to_dual(self) -> Dual:
        z = cmath.exp(complex(self.log_modulus, self.phase))
        return Dual(z, z * complex(self.d_log_modulus, self.d_phase))


class DualMatrix:
    """Small dense matrix with its omega-derivative, plus a real log scale.

    The represented matrix is ``exp(log_scale) * val``.  The scale is a
    numeric constant (no derivative), so rescaling never disturbs the
    derivative bookkeeping.
    """

    __slots__ = ("val", "der", "log_scale")

    def __init__(self, val, der, log_scale: float = 0.0):
        self.val = np.asarray(val, dtype=complex)
        self.der = np.asarray(der, dtype=complex)
        self.log_scale = float(log_scale)

    @classmethod
    def from_duals(cls, rows) -> "DualMatrix":
        val = [[Dual.lift(x).a for x in row] for row in rows]
        der = [[Dual.lift(x).b for x in row] for row in rows]
        return cls(val, der)

    @classmethod
    def identity(cls, dim: int) -> "DualMatrix":
        return cls(np.eye(dim), np.zeros((dim, dim)))

    def __matmul__(self, other: "DualMatrix") -> "DualMatrix":
        return DualMatrix(
            self.val @ other.val,
            self.der @ other.val + self.val @ other.der,
            self.log_scale + other.log_scale,
        ).normalized()

    def normalized(self) -> "DualMatrix":
        m = float(np.max(np.abs(self.val)))
        if m == 0.0 or not math.isfinite(m):
            return self
        return DualMatrix(self.val / m, self.der / m, self.log_scale + math.log(m))

    def apply(self, vec) -> tuple[list[Dual], float]:
        """Multiply a vector of duals; returns the entries and the log scale."""
        v = np.array([Dual.lift(x).a for x in vec], dtype=complex)
        dv = np.array([Dual.lift(x).b for x in vec], dtype=complex)
        out = self.val @ v
        dout = self.der @ v + self.val @ dv
        return [Dual(complex(a), complex(b)) for a, b in zip(out, dout)], self.log_scale

    def power(self, k: int) -> "DualMatrix":
        """Binary exponentiation with rescaling after every product."""
        if k < 0:
            raise ValueError("negative matrix power")
        result = DualMatrix.identity(self.val.shape[0])
        base = self.normalized()
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result
