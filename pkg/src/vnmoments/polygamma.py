"""Digamma and trigamma: exact values at positive integers, floats elsewhere.

The exact path returns :class:`~vnmoments.exactnum.SymExpr` values built from
harmonic numbers::

    psi0(l) = -gamma + H_{l-1}
    psi1(l) = pi^2/6 - H^{(2)}_{l-1}

The float path (:func:`digamma_real`, :func:`trigamma_real`) is independent of
the exact one and exists for quadrature cross-checks.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .exactnum import GAMMA, PI2, SymExpr

ZETA2 = PI2 / 6


_H = [Fraction(0)]
_H2 = [Fraction(0)]
_H_LOCK = threading.Lock()


def _extend(l: int) -> None:
    with _H_LOCK:
        for k in range(len(_H), l + 1):
            _H.append(_H[-1] + Fraction(1, k))
            _H2.append(_H2[-1] + Fraction(1, k * k))


def harmonic(l: int) -> Fraction:
    """H_l = sum_{k=1}^{l} 1/k, with H_0 = 0."""
    if l < 0:
        raise DomainError("harmonic number of negative order")
    if l >= len(_H):
        _extend(l)
    return _H[l]


def harmonic2(l: int) -> Fraction:
    """Second-order harmonic number sum_{k=1}^{l} 1/k^2."""
    if l < 0:
        raise DomainError("harmonic number of negative order")
    if l >= len(_H2):
        _extend(l)
    return _H2[l]


@lru_cache(maxsize=None)
def psi0_int(l: int) -> SymExpr:
    if l < 1:
        raise DomainError(f"psi0_int requires a positive integer, got {l}")
    return harmonic(l - 1) - GAMMA


@lru_cache(maxsize=None)
def psi1_int(l: int) -> SymExpr:
    if l < 1:
        raise DomainError(f"psi1_int requires a positive integer, got {l}")
    return ZETA2 - harmonic2(l - 1)


class PolygammaTable:
    """Precomputed psi0/psi1 and harmonic numbers for 1 <= l <= l_max."""

    def __init__(self, l_max: int):
        if l_max < 1:
            raise DomainError("l_max must be positive")
        self.l_max = l_max
        h, h2 = [Fraction(0)], [Fraction(0)]
        for k in range(1, l_max):
            h.append(h[-1] + Fraction(1, k))
            h2.append(h2[-1] + Fraction(1, k * k))
        self._h = tuple(h)
        self._h2 = tuple(h2)
        self._psi0 = tuple(x - GAMMA for x in h)
        self._psi1 = tuple(ZETA2 - x for x in h2)

    def _check(self, l: int) -> int:
        if not 1 <= l <= self.l_max:
            raise DomainError(f"l={l} outside table range 1..{self.l_max}")
        return l - 1

    def psi0(self, l: int) -> SymExpr:
        return self._psi0[self._check(l)]

    def psi1(self, l: int) -> SymExpr:
        return self._psi1[self._check(l)]

    def harmonic(self, l: int) -> Fraction:
        """H_l for 0 <= l < l_max."""
        return self._h[self._check(l + 1)]

    def harmonic2(self, l: int) -> Fraction:
        return self._h2[self._check(l + 1)]

    def verify(self) -> bool:
        """Cache entries agree with direct recomputation."""
        return all(
            self.psi0(l) == psi0_int(l) and self.psi1(l) == psi1_int(l)
            for l in range(1, self.l_max + 1)
        )


def psi_shift_check(l: int, n: int) -> bool:
    """Exact check of the shift identities for psi0 and psi1 from l to l+n."""
    if l < 1 or n < 1:
        raise DomainError("psi_shift_check requires l, n >= 1")
    s1 = sum((Fraction(1, l + k) for k in range(n)), Fraction(0))
    s2 = sum((Fraction(1, (l + k) ** 2) for k in range(n)), Fraction(0))
    return psi0_int(l + n) == psi0_int(l) + s1 and psi1_int(l + n) == psi1_int(l) - s2


# Float path ---------------------------------------------------------------

# B_2 .. B_16
_BERNOULLI = (
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
)
_DIGAMMA_COEF = tuple(float(b / (2 * k)) for k, b in enumerate(_BERNOULLI, start=1))
_TRIGAMMA_COEF = tuple(float(b) for b in _BERNOULLI)
_SWITCH = 10.0


def digamma_real(x: float) -> float:
    """psi0(x) for x > 0: upward recurrence to x >= 10, then the asymptotic series."""
    if not x > 0:
        raise DomainError(f"digamma_real requires x > 0, got {x}")
    acc = 0.0
    while x < _SWITCH:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    p = inv2
    for c in _DIGAMMA_COEF:
        series += c * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - series


def trigamma_real(x: float) -> float:
    """psi1(x) for x > 0, same scheme as :func:`digamma_real`."""
    if not x > 0:
        raise DomainError(f"trigamma_real requires x > 0, got {x}")
    acc = 0.0
    while x < _SWITCH:
        acc += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    p = inv2 * inv
    for c in _TRIGAMMA_COEF:
        series += c * p
        p *= inv2
    return acc + inv + 0.5 * inv2 + series
