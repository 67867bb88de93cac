"""Exact scalars over the Gaussian rationals and q-number utilities.

The deformation parameter is fixed by its square root ``p`` so that every
half-integer power of ``q = p**2`` is an integer power of ``p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Union


class AmbiguousMatch(ValueError):
    """An eigenvalue matched both the classical and nonclassical forms."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


@dataclass(frozen=True, order=False)
class HalfInt:
    """A half-integer stored as twice its value."""

    twice: int

    @classmethod
    def of(cls, value) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        f = _as_fraction(value)
        if (2 * f).denominator != 1:
            raise ValueError(f"{value!r} is not a half-integer")
        return cls(int(2 * f))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def is_integral(self) -> bool:
        return self.twice % 2 == 0

    def __add__(self, other):
        return HalfInt(self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __rsub__(self, other):
        return HalfInt(HalfInt.of(other).twice - self.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def _cmp_key(self, other):
        return self.twice, HalfInt.of(other).twice

    def __lt__(self, other):
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other):
        a, b = self._cmp_key(other)
        return a <= b

    def __gt__(self, other):
        a, b = self._cmp_key(other)
        return a > b

    def __ge__(self, other):
        a, b = self._cmp_key(other)
        return a >= b

    def __eq__(self, other):
        if isinstance(other, HalfInt):
            return self.twice == other.twice
        try:
            return self.twice == HalfInt.of(other).twice
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(("HalfInt", self.twice))

    def __int__(self):
        if not self.is_integral:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def __str__(self):
        return str(self.twice // 2) if self.is_integral else f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt({self})"


def half_range(lo: HalfInt, hi: HalfInt):
    """Half-integers ``lo, lo+1, ..., hi`` (empty when ``lo > hi``)."""
    return [HalfInt(t) for t in range(lo.twice, hi.twice + 1, 2)]


class Scalar:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _as_fraction(re)
        self.im = _as_fraction(im)

    @classmethod
    def of(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        return cls(x, 0)

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        norm = o.re * o.re + o.im * o.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Scalar")
        return Scalar(
            (self.re * o.re + self.im * o.im) / norm,
            (self.im * o.re - self.re * o.im) / norm,
        )

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def to_json(self) -> dict:
        return {"re": _frac_str(self.re), "im": _frac_str(self.im)}

    @classmethod
    def from_json(cls, obj: dict) -> "Scalar":
        return cls(Fraction(obj["re"]), Fraction(obj["im"]))


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction, Rational)):
        return Scalar(x)
    return None


I = Scalar(0, 1)
ZERO = Scalar(0)
ONE = Scalar(1)

Number = Union[Scalar, Fraction, int]


@dataclass(frozen=True)
class DeformationParameter:
    """The square root ``p`` of the deformation parameter ``q``.

    ``p`` must be a positive rational different from 1; then ``q`` is never a
    root of unity.
    """

    p: Fraction

    def __post_init__(self):
        p = _as_fraction(self.p)
        if p <= 0 or p == 1:
            raise ValueError(f"p must be positive and != 1, got {p}")
        object.__setattr__(self, "p", p)

    @classmethod
    def parse(cls, text) -> "DeformationParameter":
        return cls(_as_fraction(text))

    @property
    def q(self) -> Fraction:
        return self.p * self.p

    def qpow(self, exponent) -> Fraction:
        """``q**exponent`` for half-integer ``exponent``."""
        return _ppow(self.p, HalfInt.of(exponent).twice)

    def q_number(self, m) -> Fraction:
        return q_number(m, self).re

    def q_plus_number(self, m) -> Fraction:
        return q_plus_number(m, self).re

    def __str__(self):
        return f"{self.p.numerator}/{self.p.denominator}"


@lru_cache(maxsize=None)
def _ppow(p: Fraction, e: int) -> Fraction:
    return p**e


@lru_cache(maxsize=None)
def _bracket(twice: int, p: Fraction, plus: bool) -> Fraction:
    qm = _ppow(p, twice)
    qi = 1 / qm
    denom = p * p - 1 / (p * p)
    return ((qm + qi) if plus else (qm - qi)) / denom


def q_number(m, param: DeformationParameter) -> Scalar:
    """``[m]_q = (q^m - q^-m) / (q - q^-1)``."""
    return Scalar(_bracket(HalfInt.of(m).twice, param.p, False))


def q_plus_number(m, param: DeformationParameter) -> Scalar:
    """``[m]_+ = (q^m + q^-m) / (q - q^-1)``."""
    return Scalar(_bracket(HalfInt.of(m).twice, param.p, True))


@dataclass(frozen=True)
class Classical:
    """Eigenvalue ``i[m]_q``."""

    m: HalfInt

    kind = "classical"

    def value(self, param: DeformationParameter) -> Scalar:
        return I * q_number(self.m, param)

    def to_json(self) -> dict:
        return {"type": "classical", "m": str(self.m)}

    def sort_key(self):
        return (0, self.m.twice, 0)


@dataclass(frozen=True)
class Nonclassical:
    """Eigenvalue ``sign * [m]_+`` with ``m > 0`` non-integral."""

    m: HalfInt
    sign: int

    kind = "nonclassical"

    def value(self, param: DeformationParameter) -> Scalar:
        return self.sign * q_plus_number(self.m, param)

    def to_json(self) -> dict:
        return {"type": "nonclassical", "m": str(self.m), "sign": self.sign}

    def sort_key(self):
        return (1, self.sign, self.m.twice)


EigenLabel = Union[Classical, Nonclassical]


def classify_eigenvalue(lam, bound, param: DeformationParameter):
    """Label ``lam`` as ``Classical(m)`` or ``Nonclassical(m, sign)``.

    Half-integers with ``|m| <= bound`` are scanned; returns ``None`` when no
    form matches.
    """
    lam = Scalar.of(lam)
    bound = HalfInt.of(bound)
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    found = []
    if lam.re == 0:
        for t in range(-bound.twice, bound.twice + 1):
            if _bracket(t, param.p, False) == lam.im:
                found.append(Classical(HalfInt(t)))
                break
    if lam.im == 0 and lam.re != 0:
        for t in range(1, bound.twice + 1, 2):
            value = _bracket(t, param.p, True)
            if value == lam.re or value == -lam.re:
                found.append(Nonclassical(HalfInt(t), 1 if value == lam.re else -1))
                break
    if len(found) > 1:
        raise AmbiguousMatch(f"{lam} matches {found}")
    return found[0] if found else None
