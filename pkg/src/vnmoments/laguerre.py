"""Laguerre polynomials, the Laguerre-ensemble kernel and its log-moment integrals.

Exact objects (polynomial coefficients, Schrodinger-type integrals, the
monomial-expansion oracle) use :class:`fractions.Fraction` and
:class:`~vnmoments.exactnum.SymExpr`.  Floating-point evaluation is used only
for the kernel, the one-point density and the quadrature cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

from .dims import Dims, as_dims
from .errors import DegenerateParameterError, DomainError
from .exactnum import ONE, ZERO, SymExpr
from .polygamma import psi0_int, psi1_int
from .quadrature import QuadratureResult, integrate_doubling

Poly = Tuple[Fraction, ...]  # coefficients of x^0 .. x^k


def binom(a: int, j: int) -> int:
    """Binomial coefficient for any integer ``a``.

    Zero for ``j < 0`` and for ``0 <= a < j``; for negative ``a`` the
    falling-factorial form a(a-1)...(a-j+1)/j! is used.
    """
    if j < 0:
        return 0
    if a >= 0:
        return math.comb(a, j)
    num = 1
    for i in range(j):
        num *= a - i
    return num // math.factorial(j)


def inv_factorial(k: int) -> Fraction:
    """1/k!, taken as 0 for negative k (the reciprocal gamma at a pole)."""
    if k < 0:
        return Fraction(0)
    return Fraction(1, math.factorial(k))


# exact polynomials ---------------------------------------------------------


def poly_add(a: Sequence[Fraction], b: Sequence[Fraction]) -> Poly:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] += v
    return tuple(out)


def poly_scale(a: Sequence[Fraction], c) -> Poly:
    return tuple(Fraction(c) * v for v in a)


def poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return tuple(out)


@dataclass(frozen=True)
class LaguerrePoly:
    """Exact generalized Laguerre polynomial L_k^(alpha).

    Negative degree gives the zero polynomial (empty coefficient tuple).
    """

    degree: int
    alpha: int
    coeffs: Poly

    @classmethod
    def build(cls, k: int, alpha: int) -> "LaguerrePoly":
        return _laguerre_poly(k, alpha)

    def __call__(self, x):
        acc = 0.0 * np.asarray(x, dtype=float)
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def times(self, other: "LaguerrePoly") -> Poly:
        return poly_mul(self.coeffs, other.coeffs)


@lru_cache(maxsize=None)
def _laguerre_poly(k: int, alpha: int) -> LaguerrePoly:
    if k < 0:
        return LaguerrePoly(k, alpha, ())
    coeffs = tuple(
        Fraction((-1) ** i * binom(alpha + k, k - i), math.factorial(i)) for i in range(k + 1)
    )
    return LaguerrePoly(k, alpha, coeffs)


def laguerre_table(kmax: int, alpha: float, x) -> np.ndarray:
    """Rows L_0 .. L_kmax of L_k^(alpha)(x) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    out = np.empty((max(kmax, 0) + 1,) + x.shape)
    if kmax < 0:
        return out[:0]
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 1.0 + alpha - x
    for j in range(1, kmax):
        out[j + 1] = ((2 * j + 1 + alpha - x) * out[j] - (j + alpha) * out[j - 1]) / (j + 1)
    return out


def laguerre_eval(k: int, alpha: float, x):
    """L_k^(alpha)(x) by the stable three-term recurrence; 0 for k < 0."""
    if k < 0:
        return 0.0 * np.asarray(x, dtype=float) if np.ndim(x) else 0.0
    val = laguerre_table(k, alpha, x)[k]
    return float(val) if np.ndim(val) == 0 else val


# kernel --------------------------------------------------------------------


@dataclass(frozen=True)
class KernelSpec:
    """Correlation kernel of the m x n complex Laguerre ensemble."""

    dims: Dims

    @classmethod
    def of(cls, m, n=None) -> "KernelSpec":
        return cls(as_dims(m, n))

    @property
    def alpha(self) -> int:
        return self.dims.alpha

    @property
    def norm_const(self) -> int:
        """c = prod_{i=1}^m Gamma(n-i+1) Gamma(i)."""
        m, n = self.dims.m, self.dims.n
        c = 1
        for i in range(1, m + 1):
            c *= math.factorial(n - i) * math.factorial(i - 1)
        return c

    def basis_weights(self) -> np.ndarray:
        """k!/(n-m+k)! for k = 0..m-1."""
        a = self.alpha
        return np.array(
            [math.exp(math.lgamma(k + 1) - math.lgamma(a + k + 1)) for k in range(self.dims.m)]
        )


def _half_log_weight(alpha: int, x: np.ndarray) -> np.ndarray:
    """0.5*(alpha*ln x - x), with the x = 0 limit handled."""
    with np.errstate(divide="ignore", invalid="ignore"):
        lx = np.where(x > 0, np.log(np.where(x > 0, x, 1.0)), -np.inf)
        if alpha == 0:
            return -0.5 * x
        return 0.5 * (alpha * lx - x)


def orthonormal_functions(spec: KernelSpec, x) -> np.ndarray:
    """phi_k(x) = sqrt(x^a e^{-x} k!/(a+k)!) L_k^(a)(x), so K(x,y) = sum phi_k(x) phi_k(y)."""
    x = np.asarray(x, dtype=float)
    table = laguerre_table(spec.dims.m - 1, spec.alpha, x)
    hw = np.exp(_half_log_weight(spec.alpha, x))
    scale = np.sqrt(spec.basis_weights()).reshape((-1,) + (1,) * x.ndim)
    return scale * table * hw


def kernel_value(spec: KernelSpec, x, y):
    """K(x, y) with the square-root weight accumulated in log space."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a = spec.alpha
    m = spec.dims.m
    tx = laguerre_table(m - 1, a, x)
    ty = laguerre_table(m - 1, a, y)
    w = spec.basis_weights().reshape((-1,) + (1,) * np.broadcast(x, y).ndim)
    s = np.sum(w * (tx * ty), axis=0)
    val = np.exp(_half_log_weight(a, x) + _half_log_weight(a, y)) * s
    return float(val) if np.ndim(val) == 0 else val


def one_point_density(spec: KernelSpec, x):
    """X_1(x) through the two-term Laguerre representation with parameter n-m+1."""
    x = np.asarray(x, dtype=float)
    m, n = spec.dims.m, spec.dims.n
    a1 = spec.alpha + 1
    table = laguerre_table(m, a1, x)
    l_m1 = table[m - 1]
    l_m2 = table[m - 2] if m >= 2 else 0.0
    l_m = table[m]
    pref = math.exp(math.lgamma(m + 1) - math.lgamma(n))
    val = pref * np.exp(2 * _half_log_weight(spec.alpha, x)) * (l_m1 * l_m1 - l_m2 * l_m)
    return float(val) if np.ndim(val) == 0 else val


# Schrodinger integral and its q-derivatives ---------------------------------


def schrodinger_integral(q: int, alpha: int, beta: int, s: int, t: int) -> Fraction:
    """Exact int_0^inf x^q e^{-x} L_s^(alpha) L_t^(beta) dx for integer q >= 0."""
    if q < 0 or s < 0 or t < 0:
        raise DomainError("schrodinger_integral requires q, s, t >= 0")
    total = 0
    for k in range(min(s, t) + 1):
        total += Fraction(
            binom(q - alpha, s - k) * binom(q - beta, t - k) * math.factorial(q + k),
            math.factorial(k),
        )
    return Fraction((-1) ** (s + t)) * total


def _log_derivative_terms(q, alpha, beta, s, t, second: bool) -> SymExpr:
    if q < 0 or s < 0 or t < 0:
        raise DomainError("Schrodinger log-integrals require q, s, t >= 0")
    total = ZERO
    for k in range(min(s, t) + 1):
        plus = (q + 1 + k, q - alpha + 1, q - beta + 1)
        minus = (q - alpha - s + 1 + k, q - beta - t + 1 + k)
        if min(plus + minus) <= 0:
            raise DegenerateParameterError(
                f"term k={k} has a polygamma at a non-positive argument "
                f"(q={q}, alpha={alpha}, beta={beta}, s={s}, t={t}); "
                "use the regularized evaluators",
                k=k,
            )
        c = Fraction(binom(q - alpha, s - k) * binom(q - beta, t - k) * math.factorial(q + k),
                     math.factorial(k))
        if not c:
            continue
        d1 = sum((psi0_int(a) for a in plus), ZERO) - sum((psi0_int(a) for a in minus), ZERO)
        if second:
            d2 = sum((psi1_int(a) for a in plus), ZERO) - sum((psi1_int(a) for a in minus), ZERO)
            total = total + (d1 * d1 + d2) * c
        else:
            total = total + d1 * c
    return total * (-1) ** (s + t)


def schrodinger_B(q: int, alpha: int, beta: int, s: int, t: int) -> SymExpr:
    """int x^q e^{-x} ln(x) L_s^(alpha) L_t^(beta) dx from the term-wise digamma formula.

    Raises :class:`DegenerateParameterError` when a term needs a polygamma at a
    non-positive integer.
    """
    return _log_derivative_terms(q, alpha, beta, s, t, second=False)


def schrodinger_A(q: int, alpha: int, beta: int, s: int, t: int) -> SymExpr:
    """Same as :func:`schrodinger_B` with a ln^2(x) weight."""
    return _log_derivative_terms(q, alpha, beta, s, t, second=True)


def _series_mul(a, b):
    return (
        a[0] * b[0],
        a[0] * b[1] + a[1] * b[0],
        a[0] * b[2] + a[1] * b[1] + a[2] * b[0],
    )


def _binom_series(x: int, j: int):
    """Taylor coefficients (order <= 2 in eps) of binom(x + eps, j)."""
    if j < 0:
        return (Fraction(0),) * 3
    ser = (Fraction(1), Fraction(0), Fraction(0))
    for i in range(j):
        ser = _series_mul(ser, (Fraction(x - i), Fraction(1), Fraction(0)))
    f = math.factorial(j)
    return tuple(c / f for c in ser)


def _gamma_series(a: int):
    g = math.factorial(a - 1)
    p0 = psi0_int(a)
    return (ONE * g, p0 * g, (psi1_int(a) + p0 * p0) * Fraction(g, 2))


def schrodinger_regularized(q: int, alpha: int, beta: int, s: int, t: int):
    """(integral, log-moment, log^2-moment) valid for every integer parameter set.

    Each finite-sum term is expanded to second order in q -> q + eps; binomials
    are polynomials in eps and the gamma factor has a positive argument, so
    the removable singularities of the term-wise formula never appear.
    """
    if q < 0 or s < 0 or t < 0:
        raise DomainError("requires q, s, t >= 0")
    c0, c1, c2 = ZERO, ZERO, ZERO
    for k in range(min(s, t) + 1):
        ser = _series_mul(_binom_series(q - alpha, s - k), _binom_series(q - beta, t - k))
        if not any(ser):
            continue
        ser = _series_mul(_gamma_series(q + 1 + k), ser)
        inv = Fraction(1, math.factorial(k))
        c0, c1, c2 = c0 + ser[0] * inv, c1 + ser[1] * inv, c2 + ser[2] * inv
    sign = (-1) ** (s + t)
    return c0 * sign, c1 * sign, c2 * (2 * sign)


def calB(spec: KernelSpec, s: int, t: int) -> SymExpr:
    """B_{s,t}^{(n-m,n-m)}(n-m+1) from its closed forms (symmetric in s, t)."""
    if s < t:
        s, t = t, s
    if t < 0:
        raise DomainError(f"unsupported index pattern ({s}, {t})")
    k, j = t, s - t
    a = spec.alpha
    base = Fraction(math.factorial(a + k), math.factorial(k))
    if j == 0:
        return (psi0_int(a + 1 + k) * (a + 1 + 2 * k) + (2 * k + 1)) * base
    if j == 1:
        # odd index sum: the (-1)^(s+t) prefactor makes this term negative
        return (psi0_int(a + 1 + k) * (a + 1 + k) + (a + Fraction(3 * k, 2) + 2)) * (-base)
    return SymExpr.const(base / j * (Fraction(a + 1 + k, j - 1) - Fraction(k, j + 1)))


def _normalize_which(spec: KernelSpec, which) -> str:
    m = spec.dims.m
    if which in ("diag", "offdiag"):
        return which
    if tuple(which) == (m - 1, m - 1):
        return "diag"
    if tuple(which) == (m - 2, m):
        return "offdiag"
    raise DomainError(f"unsupported index pair {which!r}; expected (m-1, m-1) or (m-2, m)")


def calA_regularized(spec: KernelSpec, which) -> SymExpr:
    """A_{s,t}^{(n-m+1,n-m+1)}(n-m+2) for (s,t) = (m-1,m-1) or (m-2,m).

    Terms whose binomial vanishes against a divergent polygamma are replaced
    by their finite limits.
    """
    m, n = spec.dims.m, spec.dims.n
    which = _normalize_which(spec, which)
    fac = math.factorial
    if which == "diag":
        p2, p1 = psi0_int(n + 2), psi0_int(n + 1)
        out = (p2 * p2 + psi1_int(n + 2)) * (fac(n + 1) * inv_factorial(m - 1))
        out += ((p1 + 2) ** 2 + psi1_int(n + 1) - 2) * (fac(n) * inv_factorial(m - 2))
        for k in range(m - 2):
            out += Fraction(2 * fac(n - m + 2 + k), fac(k) * (m - 2 - k) ** 2 * (m - 1 - k) ** 2)
        return out
    out = (psi0_int(n + 1) + 1) * (fac(n) * inv_factorial(m - 2))
    out -= (psi0_int(n) + 1) * (fac(n - 1) * inv_factorial(m - 3) / 3)
    for k in range(m - 3):
        out += Fraction(
            2 * fac(n - m + 2 + k),
            fac(k) * (m - 3 - k) * (m - 2 - k) * (m - 1 - k) * (m - k),
        )
    return out


# exact oracle ---------------------------------------------------------------


def symbolic_integral_oracle(poly: Sequence, a_offset: int, log_power: int) -> SymExpr:
    """int_0^inf x^a e^{-x} ln^p(x) poly(x) dx by monomial expansion, exactly."""
    if a_offset < 0:
        raise DomainError("a_offset must be >= 0")
    if log_power not in (0, 1, 2):
        raise DomainError("log_power must be 0, 1 or 2")
    total = ZERO
    for p, c in enumerate(poly):
        c = Fraction(c)
        if not c:
            continue
        a = p + a_offset + 1
        g = c * math.factorial(a - 1)
        if log_power == 0:
            total += g
        elif log_power == 1:
            total += psi0_int(a) * g
        else:
            p0 = psi0_int(a)
            total += (psi1_int(a) + p0 * p0) * g
    return total


def oracle_IA(d) -> SymExpr:
    """I_A from the diagonal kernel sum expanded into monomials."""
    d = as_dims(d)
    a = d.alpha
    poly: Poly = ()
    for k in range(d.m):
        lk = LaguerrePoly.build(k, a)
        w = Fraction(math.factorial(k), math.factorial(a + k))
        poly = poly_add(poly, poly_scale(lk.times(lk), w))
    return symbolic_integral_oracle(poly, a + 2, 2)


def oracle_calB(d, s: int, t: int) -> SymExpr:
    d = as_dims(d)
    a = d.alpha
    poly = LaguerrePoly.build(s, a).times(LaguerrePoly.build(t, a))
    return symbolic_integral_oracle(poly, a + 1, 1)


def oracle_IB(d) -> SymExpr:
    """I_B from K^2 expanded into separable products, each factor integrated exactly."""
    d = as_dims(d)
    a = d.alpha
    w = [Fraction(math.factorial(k), math.factorial(a + k)) for k in range(d.m)]
    total = ZERO
    for k in range(d.m):
        for l in range(d.m):
            b = oracle_calB(d, k, l)
            total += b * b * (w[k] * w[l])
    return total


# quadrature -------------------------------------------------------------------


# geometric refinement of the first panel; x ln x is not smooth at 0
GRADE_LEVELS = 40


def integration_range(spec: KernelSpec) -> float:
    return 4.0 * spec.dims.n + 40.0 * spec.dims.m + 50.0


def _tail_bound(spec: KernelSpec, power: int) -> float:
    """Order-of-magnitude bound m * R^d e^{-R} for the mass beyond R (d = total degree + log slack)."""
    R = integration_range(spec)
    deg = spec.alpha + 2 * (spec.dims.m - 1) + power + 2
    return math.exp(math.log(spec.dims.m) + deg * math.log(R) - R)


def quadrature_IA(spec: KernelSpec, rtol: float = 1e-9, strict: bool = True) -> QuadratureResult:
    """Float estimate of int x^2 ln^2 x K(x,x) dx on [0, R]."""
    if spec.dims.n > 8:
        raise DomainError("quadrature cross-checks are limited to n <= 8")
    R = integration_range(spec)

    def rule(x, w):
        phi = orthonormal_functions(spec, x)
        lx = np.log(x)
        return np.sum(w * x * x * lx * lx * np.sum(phi * phi, axis=0))

    return integrate_doubling(
        rule, 0.0, R, rtol=rtol, tail_bound=_tail_bound(spec, 2), strict=strict, grade=GRADE_LEVELS
    )


def quadrature_IB(spec: KernelSpec, rtol: float = 1e-9, strict: bool = True) -> QuadratureResult:
    """Tensor-product estimate of int int x y ln x ln y K(x,y)^2 dx dy on [0, R]^2.

    The double sum over node pairs is evaluated through the rank-m structure
    of K: sum_ij g_i g_j K(x_i,x_j)^2 = ||Phi diag(g) Phi^T||_F^2.
    """
    if spec.dims.n > 8:
        raise DomainError("quadrature cross-checks are limited to n <= 8")
    R = integration_range(spec)

    def rule(x, w):
        phi = orthonormal_functions(spec, x)
        g = w * x * np.log(x)
        gram = (phi * g) @ phi.T
        return np.sum(gram * gram)

    return integrate_doubling(
        rule, 0.0, R, rtol=rtol, tail_bound=_tail_bound(spec, 2), strict=strict, grade=GRADE_LEVELS
    )


def tensor_rule_IB_direct(spec: KernelSpec, panels: int, order: int = 10) -> float:
    """Same tensor-product rule as :func:`quadrature_IB`, summed over the full node grid."""
    from .quadrature import panel_nodes

    x, w = panel_nodes(0.0, integration_range(spec), panels, order, grade=GRADE_LEVELS)
    g = w * x * np.log(x)
    K = kernel_value(spec, x[:, None], x[None, :])
    return float(g @ (K * K) @ g)
