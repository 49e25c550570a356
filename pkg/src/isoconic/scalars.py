"""Scalar-field plumbing.

Two scalar fields are supported. Exact mode uses Python ``int`` and
``fractions.Fraction``; float mode uses binary64 ``float``. A value (or a
coordinate vector) is in float mode as soon as any entry is a float.
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

from .errors import NotExactlyRepresentable

Scalar = Union[int, Fraction, float]

#: Default incidence tolerance for float-mode predicates (unit-normalized units).
DEFAULT_TOL = 1e-8


def coerce(value) -> Scalar:
    """Map any real number to one of the supported scalar types."""
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, (int, Fraction, float)):
        return value
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, numbers.Real):
        return float(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"unsupported scalar {value!r}")


def is_exact(values: Union[Scalar, Iterable[Scalar]]) -> bool:
    if isinstance(values, (int, Fraction, float)):
        return not isinstance(values, float)
    return not any(isinstance(v, float) for v in values)


def to_float(value: Scalar) -> float:
    return float(value)


def sqrt(value: Scalar) -> Scalar:
    """Square root in the field of ``value``.

    Exact inputs must be perfect squares of rationals; anything else raises
    :class:`NotExactlyRepresentable`.
    """
    if isinstance(value, float):
        return math.sqrt(value)
    value = Fraction(value)
    if value < 0:
        raise NotExactlyRepresentable(f"square root of negative rational {value}")
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise NotExactlyRepresentable(f"{value} is not a rational square")
    return Fraction(rn, rd)


def primitive(vec: Sequence[Scalar]) -> tuple:
    """Canonical scaling of a homogeneous vector, preserving its sign.

    Exact vectors become coprime integer vectors; float vectors are scaled to
    unit Euclidean norm. The zero vector is returned unchanged.
    """
    if not is_exact(vec):
        vec = [float(v) for v in vec]
        n = math.sqrt(sum(v * v for v in vec))
        if n == 0.0 or not math.isfinite(n):
            if n == 0.0:
                return tuple(vec)
            # overflow in the norm: rescale by the largest entry first
            m = max(abs(v) for v in vec)
            vec = [v / m for v in vec]
            n = math.sqrt(sum(v * v for v in vec))
        return tuple(v / n for v in vec)
    if all(isinstance(v, int) for v in vec):
        ints = list(vec)
    else:
        fr = [Fraction(v) for v in vec]
        lcm = reduce(lambda a, b: a * b // math.gcd(a, b), (f.denominator for f in fr), 1)
        ints = [int(f * lcm) for f in fr]
    g = reduce(math.gcd, ints, 0)
    if g == 0:
        return tuple(ints)
    return tuple(i // g for i in ints)


def float_direction(vec: Sequence[Scalar]) -> tuple:
    """Unit float vector in the direction of ``vec`` (safe for huge integers)."""
    if is_exact(vec):
        fr = [Fraction(v) for v in vec]
        m = max(abs(f) for f in fr)
        if m == 0:
            return tuple(0.0 for _ in fr)
        vec = [float(f / m) for f in fr]
    return primitive([float(v) for v in vec])


def vec_norm(vec: Sequence[Scalar]) -> float:
    return math.sqrt(sum(float(v) ** 2 for v in vec))


def is_zero_vector(vec: Sequence[Scalar]) -> bool:
    return all(v == 0 for v in vec)


def residual(value: Scalar, scale: float = 1.0) -> float:
    """Absolute residual as a float; exact zeros stay exactly 0.0."""
    if not isinstance(value, float) and value == 0:
        return 0.0
    return abs(float(value)) / scale if scale else abs(float(value))


def is_zero(value: Scalar, tol: float = DEFAULT_TOL, scale: float = 1.0) -> bool:
    """Zero test: exact equality for rationals, ``|value| <= tol*scale`` for floats."""
    if not isinstance(value, float):
        return value == 0
    return abs(value) <= tol * scale
