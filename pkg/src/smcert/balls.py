"""Certified real and complex ball arithmetic on top of gmpy2 (MPFR/MPC).

A ball is a midpoint at a fixed working precision plus a nonnegative radius.
Every operation returns a ball that contains the exact mathematical result
for every point of the operand balls: midpoints are computed with
round-to-nearest at the ball's precision, radii combine the operand radii
with a half-ulp bound for the midpoint rounding and are always rounded
upward at a small fixed precision.

Certified predicates (``certainly_lt``, ``is_nonzero``, ...) return True
only when the claim holds for every point of the balls involved; False
means "false or undecidable at this radius".

gmpy2 pitfall encoded here: Python-level ``abs(x)``/``-x`` and bare
``mpc(a, b)`` round to the *thread* context (53 bits), so every operation
below goes through an explicit context or exact ``mpq`` arithmetic.
"""

from __future__ import annotations

import functools
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr, mpq

RADIUS_PREC = 32
DEFAULT_PREC = 256


class PrecisionError(ArithmeticError):
    """A certified decision could not be reached at the working precision."""


@functools.lru_cache(maxsize=None)
def _ctx(prec: int, rounding) -> "gmpy2.context":
    return gmpy2.context(precision=prec, round=rounding)


def _near(prec: int):
    return _ctx(prec, gmpy2.RoundToNearest)


def _up(prec: int):
    return _ctx(prec, gmpy2.RoundUp)


def _down(prec: int):
    return _ctx(prec, gmpy2.RoundDown)


# All radius arithmetic happens here: low precision, rounded toward +inf,
# with a round-down twin for certified lower bounds.
_RU = _ctx(RADIUS_PREC, gmpy2.RoundUp)
_RD = _ctx(RADIUS_PREC, gmpy2.RoundDown)

_ZERO = mpfr(0)
_HALF = mpfr("0.5")


@functools.lru_cache(maxsize=None)
def _eps(prec: int) -> mpfr:
    # 2^-prec; a power of two is exact at any precision
    return mpfr(1) / (1 << prec)


def _rup(x) -> mpfr:
    """Upper bound of a value at RADIUS_PREC (input >= 0 expected)."""
    return _RU.add(_ZERO, x)


def _rdown(x) -> mpfr:
    return _RD.add(_ZERO, x)


def _abs_up(x: mpfr) -> mpfr:
    return _RU.abs(x)


def _cabs_up(z: mpc) -> mpfr:
    """Upper bound of |z| at RADIUS_PREC (|re| + |im| >= |z|)."""
    return _RU.add(_RU.abs(z.real), _RU.abs(z.imag))


def _cabs_down(z: mpc) -> mpfr:
    """Lower bound of |z| at RADIUS_PREC."""
    m2 = _RD.add(_RD.mul(z.real, z.real), _RD.mul(z.imag, z.imag))
    return _RD.sqrt(m2)


def _mid_err(mid, prec: int) -> mpfr:
    """Bound on the rounding error of a correctly rounded midpoint op."""
    mag = _cabs_up(mid) if isinstance(mid, mpc) else _abs_up(mid)
    return _RU.mul(mag, _eps(prec))


def _to_mpq(value):
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, (int, mpq)):
        return mpq(value)
    if isinstance(value, mpfr):
        return mpq(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def _mpq_floor(x) -> int:
    q = _to_mpq(x)
    return int(q.numerator) // int(q.denominator)


def _mpq_ceil(x) -> int:
    q = _to_mpq(x)
    return -((-int(q.numerator)) // int(q.denominator))


class RealBall:
    """Closed interval [mid - rad, mid + rad] with certified containment."""

    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid: mpfr, rad: mpfr, prec: int):
        self.mid = mid
        self.rad = rad
        self.prec = prec

    # ----- constructors -------------------------------------------------

    @staticmethod
    def exact(value, prec: int = DEFAULT_PREC) -> "RealBall":
        """Ball around an exact integer or rational; the radius is the
        conversion error only."""
        q = _to_mpq(value)
        mid = gmpy2.mpfr(q, precision=prec)
        err = abs(q - mpq(mid))  # exact rational arithmetic
        return RealBall(mid, _rup(err), prec)

    @staticmethod
    def from_midrad(mid, rad, prec: int) -> "RealBall":
        return RealBall(gmpy2.mpfr(mid, precision=prec), _rup(rad), prec)

    @staticmethod
    def from_endpoints(lo: mpfr, hi: mpfr, prec: int) -> "RealBall":
        if not lo <= hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        cn = _near(prec)
        mid = cn.mul(cn.add(lo, hi), _HALF)
        rad = max(_RU.sub(hi, mid), _RU.sub(mid, lo), _ZERO)
        return RealBall(mid, rad, prec)

    @staticmethod
    def pi(prec: int) -> "RealBall":
        mid = _near(prec).const_pi()
        return RealBall(mid, _mid_err(mid, prec), prec)

    # ----- interval views -----------------------------------------------

    def lower(self) -> mpfr:
        return _down(self.prec).sub(self.mid, self.rad)

    def upper(self) -> mpfr:
        return _up(self.prec).add(self.mid, self.rad)

    @property
    def radius(self) -> mpfr:
        return self.rad

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        return f"RealBall({self.mid!s} +/- {self.rad!s})"

    # ----- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "RealBall":
        if isinstance(other, RealBall):
            return other
        return RealBall.exact(other, self.prec)

    def __add__(self, other) -> "RealBall":
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        mid = _near(prec).add(self.mid, other.mid)
        rad = _RU.add(_RU.add(self.rad, other.rad), _mid_err(mid, prec))
        return RealBall(mid, rad, prec)

    __radd__ = __add__

    def __neg__(self) -> "RealBall":
        return RealBall(_near(self.prec).sub(_ZERO, self.mid), self.rad, self.prec)

    def __sub__(self, other) -> "RealBall":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RealBall":
        return (-self) + self._coerce(other)

    def __mul__(self, other) -> "RealBall":
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        mid = _near(prec).mul(self.mid, other.mid)
        cross = _RU.add(
            _RU.add(
                _RU.mul(_abs_up(self.mid), other.rad),
                _RU.mul(_abs_up(other.mid), self.rad),
            ),
            _RU.mul(self.rad, other.rad),
        )
        rad = _RU.add(cross, _mid_err(mid, prec))
        return RealBall(mid, rad, prec)

    __rmul__ = __mul__

    def inverse(self) -> "RealBall":
        lo, hi = self.lower(), self.upper()
        if lo <= 0 <= hi:
            raise PrecisionError("interval contains zero, cannot invert")
        prec = self.prec
        ilo = _down(prec).div(mpfr(1), hi)
        ihi = _up(prec).div(mpfr(1), lo)
        return RealBall.from_endpoints(ilo, ihi, prec)

    def __truediv__(self, other) -> "RealBall":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "RealBall":
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "RealBall":
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return (self ** (-n)).inverse()
        result = RealBall.exact(1, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __abs__(self) -> "RealBall":
        # | |x| - |mid| | <= |x - mid|
        return RealBall(_near(self.prec).abs(self.mid), self.rad, self.prec)

    # ----- monotone elementary functions (endpoint evaluation) ----------

    def sqrt(self) -> "RealBall":
        lo, hi = self.lower(), self.upper()
        if hi < 0:
            raise ValueError("sqrt of a negative interval")
        lo = max(lo, _ZERO)
        prec = self.prec
        return RealBall.from_endpoints(
            _down(prec).sqrt(lo), _up(prec).sqrt(hi), prec
        )

    def exp(self) -> "RealBall":
        prec = self.prec
        return RealBall.from_endpoints(
            _down(prec).exp(self.lower()), _up(prec).exp(self.upper()), prec
        )

    def log(self) -> "RealBall":
        lo, hi = self.lower(), self.upper()
        if lo <= 0:
            raise PrecisionError("log of an interval touching (-inf, 0]")
        prec = self.prec
        return RealBall.from_endpoints(
            _down(prec).log(lo), _up(prec).log(hi), prec
        )

    def log_plus(self) -> "RealBall":
        """log(max(1, x)), the local height contribution."""
        lo, hi = self.lower(), self.upper()
        one = mpfr(1)
        lo, hi = max(lo, one), max(hi, one)
        prec = self.prec
        return RealBall.from_endpoints(
            _down(prec).log(lo), _up(prec).log(hi), prec
        )

    # ----- certified predicates ------------------------------------------

    def contains_zero(self) -> bool:
        return self.lower() <= 0 <= self.upper()

    def contains(self, value) -> bool:
        q = _to_mpq(value)
        return mpq(self.lower()) <= q <= mpq(self.upper())

    def is_positive(self) -> bool:
        return self.lower() > 0

    def is_negative(self) -> bool:
        return self.upper() < 0

    def is_nonzero(self) -> bool:
        return self.lower() > 0 or self.upper() < 0

    def certainly_lt(self, other) -> bool:
        other = self._coerce(other)
        return self.upper() < other.lower()

    def certainly_gt(self, other) -> bool:
        other = self._coerce(other)
        return self.lower() > other.upper()

    def certainly_ge(self, other) -> bool:
        other = self._coerce(other)
        return self.lower() >= other.upper()

    def overlaps(self, other: "RealBall") -> bool:
        return not (self.certainly_lt(other) or self.certainly_gt(other))

    def unique_integer(self):
        """The single integer contained in the interval, or None."""
        k1 = _mpq_ceil(self.lower())
        k2 = _mpq_floor(self.upper())
        if k1 == k2:
            return k1
        return None

    def floor_upper(self) -> int:
        return _mpq_floor(self.upper())

    def union(self, other: "RealBall") -> "RealBall":
        prec = max(self.prec, other.prec)
        return RealBall.from_endpoints(
            min(self.lower(), other.lower()),
            max(self.upper(), other.upper()),
            prec,
        )


class ComplexBall:
    """Disc |z - mid| <= rad in the complex plane."""

    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid: mpc, rad: mpfr, prec: int):
        self.mid = mid
        self.rad = rad
        self.prec = prec

    # ----- constructors -------------------------------------------------

    @staticmethod
    def exact(re, im=0, prec: int = DEFAULT_PREC) -> "ComplexBall":
        return ComplexBall.from_parts(
            RealBall.exact(re, prec), RealBall.exact(im, prec)
        )

    @staticmethod
    def from_parts(re: RealBall, im: RealBall) -> "ComplexBall":
        prec = max(re.prec, im.prec)
        mid = mpc(re.mid, im.mid, precision=prec)
        rad = _RU.add(re.rad, im.rad)
        return ComplexBall(mid, rad, prec)

    @staticmethod
    def from_real(ball: RealBall) -> "ComplexBall":
        return ComplexBall(
            mpc(ball.mid, 0, precision=ball.prec), ball.rad, ball.prec
        )

    # ----- views ---------------------------------------------------------

    def real(self) -> RealBall:
        return RealBall(self.mid.real, self.rad, self.prec)

    def imag(self) -> RealBall:
        return RealBall(self.mid.imag, self.rad, self.prec)

    def __repr__(self) -> str:
        return f"ComplexBall({self.mid!s} +/- {self.rad!s})"

    def __complex__(self) -> complex:
        return complex(self.mid)

    # ----- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "ComplexBall":
        if isinstance(other, ComplexBall):
            return other
        if isinstance(other, RealBall):
            return ComplexBall.from_real(other)
        return ComplexBall.exact(other, 0, self.prec)

    def __add__(self, other) -> "ComplexBall":
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        mid = _near(prec).add(self.mid, other.mid)
        rad = _RU.add(_RU.add(self.rad, other.rad), _mid_err(mid, prec))
        return ComplexBall(mid, rad, prec)

    __radd__ = __add__

    def __neg__(self) -> "ComplexBall":
        return ComplexBall(
            _near(self.prec).sub(mpc(0), self.mid), self.rad, self.prec
        )

    def __sub__(self, other) -> "ComplexBall":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "ComplexBall":
        return (-self) + self._coerce(other)

    def conjugate(self) -> "ComplexBall":
        prec = self.prec
        mid = mpc(
            self.mid.real, _near(prec).sub(_ZERO, self.mid.imag), precision=prec
        )
        return ComplexBall(mid, self.rad, prec)

    def __mul__(self, other) -> "ComplexBall":
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        mid = _near(prec).mul(self.mid, other.mid)
        cross = _RU.add(
            _RU.add(
                _RU.mul(_cabs_up(self.mid), other.rad),
                _RU.mul(_cabs_up(other.mid), self.rad),
            ),
            _RU.mul(self.rad, other.rad),
        )
        rad = _RU.add(cross, _mid_err(mid, prec))
        return ComplexBall(mid, rad, prec)

    __rmul__ = __mul__

    def inverse(self) -> "ComplexBall":
        # |1/z - 1/c| <= r / (|c| (|c| - r)) whenever r < |c|
        mlo = _cabs_down(self.mid)
        gap = _RD.sub(mlo, self.rad)
        if gap <= 0:
            raise PrecisionError("complex ball contains zero, cannot invert")
        prec = self.prec
        mid = _near(prec).div(mpc(1), self.mid)
        rad = _RU.add(
            _RU.div(self.rad, _RD.mul(mlo, gap)), _mid_err(mid, prec)
        )
        return ComplexBall(mid, rad, prec)

    def __truediv__(self, other) -> "ComplexBall":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "ComplexBall":
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "ComplexBall":
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return (self ** (-n)).inverse()
        result = ComplexBall.exact(1, 0, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __abs__(self) -> RealBall:
        prec = self.prec
        dn, up = _down(prec), _up(prec)
        re, im = self.mid.real, self.mid.imag
        lo = dn.sqrt(dn.add(dn.mul(re, re), dn.mul(im, im)))
        hi = up.sqrt(up.add(up.mul(re, re), up.mul(im, im)))
        lo = dn.sub(lo, self.rad)
        hi = up.add(hi, self.rad)
        return RealBall.from_endpoints(max(lo, _ZERO), hi, prec)

    def exp(self) -> "ComplexBall":
        # |e^z - e^c| <= e^{Re c} (e^r - 1) for |z - c| <= r
        prec = self.prec
        mid = _near(prec).exp(self.mid)
        scale = _RU.exp(_rup(self.mid.real))
        rad = _RU.add(
            _RU.mul(scale, _RU.expm1(self.rad)), _mid_err(mid, prec)
        )
        return ComplexBall(mid, rad, prec)

    # ----- certified predicates ------------------------------------------

    def contains_zero(self) -> bool:
        return _cabs_down(self.mid) <= self.rad

    def is_nonzero(self) -> bool:
        return _cabs_down(self.mid) > self.rad

    def may_contain_exact(self, re, im=0) -> bool:
        """Outward test for an exact rational point: False certifies the
        point lies outside the ball."""
        dre = mpq(self.mid.real) - _to_mpq(re)
        dim = mpq(self.mid.imag) - _to_mpq(im)
        dist2 = dre * dre + dim * dim
        rad_hi = mpq(_rup(self.rad))
        return dist2 <= rad_hi * rad_hi

    def is_disjoint(self, other: "ComplexBall") -> bool:
        prec = max(self.prec, other.prec)
        diff = _near(prec).sub(self.mid, other.mid)
        dist_lo = _RD.sub(_cabs_down(diff), _mid_err(diff, prec))
        return dist_lo > _RU.add(self.rad, other.rad)

    def overlaps(self, other: "ComplexBall") -> bool:
        return not self.is_disjoint(other)
