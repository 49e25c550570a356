"""Binary forms on the projective line.

A form of formal degree ``n`` is stored as an ascending coefficient list
``[c0, ..., cn]`` meaning ``sum(c_i * s**i * u**(n-i))``; dehomogenized it is a
polynomial in ``t = s/u``. Roots are homogeneous pairs ``(s, u)`` so a root
at infinity is simply ``(1, 0)``.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import NotExactlyRepresentable
from .scalars import Scalar, is_exact
from .scalars import sqrt as field_sqrt

Root = Tuple[Scalar, Scalar]


def _div(a, b):
    if isinstance(a, float) or isinstance(b, float):
        return a / b
    return Fraction(a) / b


def evaluate(coeffs: Sequence, root: Root):
    """Value of the form at the homogeneous point ``root`` (complex allowed)."""
    s, u = root
    n = len(coeffs) - 1
    return sum(c * s**i * u ** (n - i) for i, c in enumerate(coeffs))


def deflate(coeffs: Sequence[Scalar], root: Root) -> Tuple[List[Scalar], Scalar]:
    """Divide the form by the linear form vanishing at ``root``.

    Returns ``(quotient, remainder)``; the remainder is zero exactly when
    ``root`` is a root (up to rounding in float mode).
    """
    s0, u0 = root
    n = len(coeffs) - 1
    exact = is_exact(list(coeffs) + [s0, u0])
    use_t = (u0 != 0) if exact else abs(u0) >= abs(s0)
    if use_t:
        r = _div(s0, u0)
        q = [0] * n
        acc = coeffs[n]
        for i in range(n, 0, -1):
            q[i - 1] = acc
            acc = coeffs[i - 1] + r * acc
        return q, acc
    # divide in w = u/s, coefficients reversed
    w0 = _div(u0, s0)
    rev = list(reversed(coeffs))
    h = [0] * n
    acc = rev[n]
    for i in range(n, 0, -1):
        h[i - 1] = acc
        acc = rev[i - 1] + w0 * acc
    return list(reversed(h)), acc


def exact_remainder(num: Sequence[Scalar], den: Sequence[Scalar]) -> List[Scalar]:
    """Remainder of exact homogeneous division ``num mod den``.

    The division runs in whichever affine chart gives ``den`` a nonzero
    pivot, so the remainder vanishes iff ``den`` divides ``num``.
    """
    den = list(den)
    num = list(num)
    if den[-1] == 0:
        num.reverse()
        den.reverse()
    while den and den[-1] == 0:
        den.pop()
    if not den:
        raise ZeroDivisionError("zero divisor form")
    r = [Fraction(c) for c in num]
    dl = len(den) - 1
    lead = Fraction(den[-1])
    for k in range(len(r) - 1, dl - 1, -1):
        f = r[k] / lead
        if f:
            for j in range(dl + 1):
                r[k - dl + j] -= f * den[j]
    return r[:dl]


def quadratic_roots(coeffs: Sequence[Scalar]) -> List[Root]:
    """Both homogeneous roots of ``c0 u^2 + c1 s u + c2 s^2`` (complex in float mode).

    Exact mode returns exact rational roots and raises
    :class:`NotExactlyRepresentable` if the roots are irrational or non-real.
    """
    c, b, a = coeffs
    exact = is_exact(coeffs)
    if a == 0 and b == 0:
        return [(1, 0), (1, 0)]
    if c == 0 and b == 0:
        return [(0, 1), (0, 1)]
    disc = b * b - 4 * a * c
    if exact:
        if disc < 0:
            raise NotExactlyRepresentable("complex-conjugate roots")
        r = field_sqrt(disc)
    else:
        r = cmath.sqrt(disc) if disc < 0 else math.sqrt(disc)
    sign = 1 if (b.real if isinstance(b, complex) else b) >= 0 else -1
    q = -(b + sign * r) / 2
    if exact:
        q = Fraction(q)
    return [(q, a), (c, q)]


def root_separation(r1, r2) -> float:
    """Sine-of-angle distance between two homogeneous (possibly complex) roots."""
    s1, u1 = complex(r1[0]), complex(r1[1])
    s2, u2 = complex(r2[0]), complex(r2[1])
    n1 = math.sqrt(abs(s1) ** 2 + abs(u1) ** 2)
    n2 = math.sqrt(abs(s2) ** 2 + abs(u2) ** 2)
    if n1 == 0 or n2 == 0:
        return 0.0
    return abs(s1 * u2 - s2 * u1) / (n1 * n2)


def double_root(coeffs: Sequence[Scalar]) -> Root:
    """Best estimate of the root of a quadratic known to be a square."""
    c, b, a = coeffs
    cand1 = (-b, 2 * a)
    cand2 = (2 * c, -b)
    n1 = abs(float(cand1[0])) + abs(float(cand1[1]))
    n2 = abs(float(cand2[0])) + abs(float(cand2[1]))
    return cand1 if n1 >= n2 else cand2


def order_at_zero(coeffs: Sequence[Scalar], tol: float) -> int:
    """Number of leading vanishing coefficients (root multiplicity at ``t = 0``).

    Float coefficients count as zero when ``|c| <= tol * max|c|``.
    """
    if is_exact(coeffs):
        k = 0
        for c in coeffs:
            if c != 0:
                break
            k += 1
        return k
    scale = max(abs(c) for c in coeffs)
    if scale == 0:
        return len(coeffs)
    k = 0
    for c in coeffs:
        if abs(c) > tol * scale:
            break
        k += 1
    return k


def normalized(coeffs: Sequence[Scalar]) -> List[float]:
    if is_exact(coeffs):
        m = max(abs(Fraction(c)) for c in coeffs)
        if m == 0:
            return [0.0] * len(coeffs)
        return [float(Fraction(c) / m) for c in coeffs]
    m = max(abs(c) for c in coeffs)
    if m == 0:
        return [0.0] * len(coeffs)
    return [c / m for c in coeffs]
