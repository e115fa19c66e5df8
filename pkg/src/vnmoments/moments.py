"""Closed-form entropy moments over the fixed-trace and Laguerre ensembles.

All evaluators return exact :class:`~vnmoments.exactnum.SymExpr` values.  The
general finite-sum forms :func:`IA_closed` / :func:`IB_closed` are the primary
evaluators; the consolidated forms and the special-case table are kept as
independent cross-checks.

Notation: ``T = sum theta_i ln theta_i`` over Wishart eigenvalues, ``S`` the
von Neumann entropy of the normalized spectrum, ``E_g`` the Laguerre-ensemble
average and ``E_f`` the fixed-trace average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .dims import Dims, as_dims
from .errors import DomainError
from .exactnum import ZERO, SymExpr, to_float
from .laguerre import KernelSpec, calA_regularized
from .polygamma import psi0_int as psi0
from .polygamma import psi1_int as psi1

F = Fraction
fac = math.factorial


# Fixed-trace ensemble --------------------------------------------------------


def page_mean(d) -> SymExpr:
    """E_f[S] = psi0(mn+1) - psi0(n) - (m+1)/(2n)."""
    d = as_dims(d)
    m, n = d.m, d.n
    return psi0(m * n + 1) - psi0(n) - F(m + 1, 2 * n)


def vpo_variance(d) -> SymExpr:
    """V_f[S] = -psi1(mn+1) + (m+n)/(mn+1) psi1(n) - (m+1)(m+2n+1)/(4n^2(mn+1))."""
    d = as_dims(d)
    m, n = d.m, d.n
    mn1 = m * n + 1
    return (
        -psi1(mn1)
        + psi1(n) * F(m + n, mn1)
        - F((m + 1) * (m + 2 * n + 1), 4 * n * n * mn1)
    )


# Laguerre ensemble -----------------------------------------------------------


def induced_T_mean(d) -> SymExpr:
    d = as_dims(d)
    m, n = d.m, d.n
    return psi0(n) * (m * n) + F(m * (m + 1), 2)


def induced_T2_target(d) -> SymExpr:
    """The value E_g[T^2] must take for the variance formula to hold."""
    d = as_dims(d)
    m, n = d.m, d.n
    p0 = psi0(n)
    return (
        psi1(n) * (m * n * (m + n))
        + p0 * p0 * (m * n * (m * n + 1))
        + p0 * (m * (m * m * n + m * n + m + 2 * n + 1))
        + F(m * (m + 1) * (m * m + m + 2), 4)
    )


def IA_closed(d) -> SymExpr:
    """int x^2 ln^2 x K(x,x) dx in its general finite-sum form (any 1 <= m <= n)."""
    d = as_dims(d)
    m, n = d.m, d.n
    p0 = psi0(n)
    head = (
        psi1(n) * (3 * n * (m + n))
        + p0 * p0 * (3 * n * (m + n))
        + p0 * (m * m + 9 * m * n + 3 * m + 3 * n + 2)
        + (m * m + 3 * m * n + 6 * m - 3 * n - 1)
    ) * F(m, 3)
    s1 = sum(
        (F(fac(n - k), fac(m - 2 - k) * k * k * (k + 1) ** 2) for k in range(1, m - 1)),
        F(0),
    )
    s2 = sum(
        (
            F(fac(n - 1 - k), fac(m - 3 - k) * k * (k + 1) * (k + 2) * (k + 3))
            for k in range(1, m - 2)
        ),
        F(0),
    )
    return head + F(2 * fac(m), fac(n - 1)) * (s1 - s2)


def IA_from_regularized(d) -> SymExpr:
    """I_A = m!/(n-1)! (A_{m-1,m-1} - A_{m-2,m}) from the regularized Schrodinger terms."""
    d = as_dims(d)
    spec = KernelSpec(d)
    return (calA_regularized(spec, "diag") - calA_regularized(spec, "offdiag")) * F(
        fac(d.m), fac(d.n - 1)
    )


def _ib_double_sum(m: int, n: int) -> Fraction:
    a = n - m
    total = F(0)
    for j in range(2, m):
        for k in range(m - j):
            bracket = F(a + 1 + k, j - 1) - F(k, j + 1)
            total += F(2 * fac(a + k) * fac(k + j), fac(a + k + j) * fac(k) * j * j) * bracket**2
    return total


def IB_closed(d) -> SymExpr:
    """int int x y ln x ln y K(x,y)^2 dx dy in its general finite-sum form."""
    d = as_dims(d)
    m, n = d.m, d.n
    a = n - m
    total = ZERO
    for k in range(m):
        total += (psi0(a + 1 + k) * (a + 1 + 2 * k) + (2 * k + 1)) ** 2
    for k in range(m - 1):
        inner = psi0(a + 1 + k) * (a + 1 + k) + (a + 2 + F(3 * k, 2))
        total += inner * inner * F(2 * (k + 1), a + 1 + k)
    return total + _ib_double_sum(m, n)


def assemble_E_T2(d) -> SymExpr:
    """E_g[T^2] = I_A - I_B + E_g[T]^2."""
    d = as_dims(d)
    t = induced_T_mean(d)
    return IA_closed(d) - IB_closed(d) + t * t


def second_moment_S(d) -> SymExpr:
    """E_f[S^2] from E_g[T^2] through the trace-independence relation."""
    d = as_dims(d)
    mn = d.m * d.n
    p = psi0(mn + 2)
    return (
        assemble_E_T2(d) * F(1, mn * (mn + 1))
        + p * page_mean(d) * 2
        - psi1(mn + 2)
        - p * p
    )


def variance_S_via_relation(d) -> SymExpr:
    mean = page_mean(d)
    return second_moment_S(d) - mean * mean


# Consolidated forms (n > m >= 3) --------------------------------------------


def a1(m: int, n: int) -> Fraction:
    return F(n, 3) * (
        9 * m**3 * n + 9 * m**3 - 17 * m**2 * n**2 - 6 * m**2 * n - m**2
        + 7 * m * n**3 - m * n**2 - 10 * m * n - 2 * m + n**4 - 2 * n**3 - n**2 + 2 * n
    )


def a2(m: int, n: int) -> Fraction:
    return F(1, 3) * (
        m**5 + 7 * m**4 * n + 2 * m**4 - 26 * m**3 * n**2 - 26 * m**3 * n - m**3
        + 26 * m**2 * n**3 + 18 * m**2 * n**2 + 3 * m**2 * n - 2 * m**2 - 7 * m * n**4
        + 10 * m * n**3 + 15 * m * n**2 + 4 * m * n - n**5 - 4 * n**4 - 5 * n**3 - 2 * n**2
    )


def a3(m: int, n: int) -> Fraction:
    return F(1, 18) * (
        -5 * m**5 - 65 * m**4 * n + 14 * m**4 + 139 * m**3 * n**2 + 169 * m**3 * n
        + 41 * m**3 - 63 * m**2 * n**3 - 282 * m**2 * n**2 - 142 * m**2 * n - 2 * m**2
        - 6 * m * n**4 + 87 * m * n**3 - 13 * m * n**2 - 40 * m * n - 12 * m
        + 12 * n**4 + 42 * n**3 + 42 * n**2 + 12 * n
    )


def b1(m: int, n: int) -> Fraction:
    return F(1, 2) * (
        -5 * m**5 + 29 * m**4 * n + 5 * m**4 - 62 * m**3 * n**2 - 40 * m**3 * n + m**3
        + 62 * m**2 * n**3 + 86 * m**2 * n**2 + 17 * m**2 * n - m**2 - 29 * m * n**4
        - 56 * m * n**3 - 25 * m * n**2 + 2 * m * n + 5 * n**5 + 5 * n**4 - n**3 - n**2
    )


def b2(m: int, n: int) -> Fraction:
    return F(1, 2) * (
        5 * m**5 - 29 * m**4 * n - 5 * m**4 + 62 * m**3 * n**2 + 36 * m**3 * n - m**3
        - 62 * m**2 * n**3 - 82 * m**2 * n**2 - 13 * m**2 * n + m**2 + 29 * m * n**4
        + 60 * m * n**3 + 25 * m * n**2 - 2 * m * n - 5 * n**5 - 9 * n**4 - 3 * n**3 + n**2
    )


def b3(m: int, n: int) -> Fraction:
    return F(1, 4) * (
        -29 * m**5 + 83 * m**4 * n + 95 * m**4 - 89 * m**3 * n**2 - 247 * m**3 * n
        - 89 * m**3 + 45 * m**2 * n**3 + 243 * m**2 * n**2 + 187 * m**2 * n + 29 * m**2
        - 10 * m * n**4 - 111 * m * n**3 - 140 * m * n**2 - 33 * m * n + 2 * m
        + 20 * n**4 + 26 * n**3 + 4 * n**2 - 2 * n
    )


def b4(m: int, n: int) -> Fraction:
    return F(1, 3) * (
        -3 * m**4 + 9 * m**3 * n**2 + 9 * m**3 * n - 17 * m**2 * n**3 + 3 * m**2 * n**2
        + 8 * m**2 * n + 3 * m**2 + 7 * m * n**4 - 7 * m * n**3 - 19 * m * n**2 - 5 * m * n
        + n**5 - 2 * n**4 - n**3 + 2 * n**2
    )


def b5(m: int, n: int) -> Fraction:
    return F(1, 3) * (
        m**5 + 7 * m**4 * n + 2 * m**4 - 26 * m**3 * n**2 - 26 * m**3 * n - m**3
        + 26 * m**2 * n**3 + 18 * m**2 * n**2 + 3 * m**2 * n - 2 * m**2 - 7 * m * n**4
        + 10 * m * n**3 + 15 * m * n**2 + 4 * m * n - n**5 - 4 * n**4 - 5 * n**3 - 2 * n**2
    )


def b6(m: int, n: int) -> Fraction:
    return F(1, 18) * (
        -5 * m**5 - 65 * m**4 * n + 5 * m**4 + 139 * m**3 * n**2 + 187 * m**3 * n
        + 41 * m**3 - 63 * m**2 * n**3 - 291 * m**2 * n**2 - 133 * m**2 * n + 7 * m**2
        - 6 * m * n**4 + 87 * m * n**3 - 22 * m * n**2 - 49 * m * n - 12 * m
        + 12 * n**4 + 42 * n**3 + 42 * n**2 + 12 * n
    )


def residual_sum(m: int, n: int) -> SymExpr:
    """sum_{k=1}^{m} psi0(n-m+k)/k; cancels between I_A and I_B."""
    return sum((psi0(n - m + k) * F(1, k) for k in range(1, m + 1)), ZERO)


def _check_consolidated(d: Dims) -> None:
    if d.m < 3 or d.m == d.n:
        raise DomainError(
            f"consolidated forms need n > m >= 3 (got m={d.m}, n={d.n}); "
            "use IA_closed/IB_closed or the special-case table"
        )


def _shared_part(m: int, n: int, psi0n_sq_weight: Fraction) -> SymExpr:
    p02 = psi0(n - m + 2)
    pm_shift = psi0(n) - psi0(m) + psi0(1)
    inner = (
        psi1(n - m + 2)
        - psi0(n) * psi0(n) * psi0n_sq_weight
        - p02 * p02
        + p02 * pm_shift * 2
        + (psi0(m) - psi0(1)) * F(2 * (2 * n - 2 * m + 1), (n - m) * (n - m + 1))
    )
    return residual_sum(m, n) * (2 * m * n * (m + n)) + inner * (m * n * (m + n))


def IA_consolidated(d) -> SymExpr:
    d = as_dims(d)
    _check_consolidated(d)
    m, n = d.m, d.n
    tail = psi0(n) * a1(m, n) + psi0(n - m + 2) * a2(m, n) + a3(m, n)
    return _shared_part(m, n, F(0)) + tail * F(1, (n - m) * (n - m + 1))


def IB_consolidated(d) -> SymExpr:
    d = as_dims(d)
    _check_consolidated(d)
    m, n = d.m, d.n
    shared = _shared_part(m, n, F(1, m + n)) - psi1(n) * (m * n * (m + n))
    tail = psi0(n) * b4(m, n) + psi0(n - m + 2) * b5(m, n) + b6(m, n)
    return shared + tail * F(1, (n - m) * (n - m + 1))


def ib_double_sum_split(d) -> SymExpr:
    """Simplified 1/j plus 1/j^2 parts of the I_B double sum (n > m >= 3)."""
    d = as_dims(d)
    _check_consolidated(d)
    m, n = d.m, d.n
    diff = psi0(n) - psi0(n - m + 2)
    part1 = diff * (
        2 * m**3 - 12 * m**2 * n - m**2 + 12 * m * n**2 + 10 * m * n - m - 2 * n**3 - n**2 + n
    ) + F((m - 2) * (12 * m**2 - 22 * m * n - 9 * m + 4 * n**2 - 1), 2)
    shared = _shared_part(m, n, F(1)) - psi1(n) * (m * n * (m + n))
    tail = psi0(n) * b1(m, n) + psi0(n - m + 2) * b2(m, n) + b3(m, n)
    part2 = shared + tail * F(1, (n - m) * (n - m + 1))
    return part1 + part2


def ib_double_sum(d) -> Fraction:
    """The j >= 2 double sum of I_B, summed literally."""
    d = as_dims(d)
    return _ib_double_sum(d.m, d.n)


# Special cases m = 1, m = 2, m = n ------------------------------------------

TABLE_ROWS = ("m=1", "m=2", "m=n")
TABLE_QUANTITIES = ("I_A", "I_B", "E_T2")


def table_row(row: str, n: int, quantity: str) -> SymExpr:
    """Special-case closed forms of I_A, I_B and E_g[T^2]."""
    if row not in TABLE_ROWS or quantity not in TABLE_QUANTITIES:
        raise DomainError(f"unknown table entry {row!r}/{quantity!r}")
    p0, p1 = psi0(n), psi1(n)
    p0sq = p0 * p0
    if row == "m=1":
        if quantity == "I_B":
            return (p0 * n + 1) ** 2
        return p1 * (n * (n + 1)) + p0sq * (n * (n + 1)) + p0 * (4 * n + 2) + 2
    if row == "m=2":
        if n < 2:
            raise DomainError("m=2 row needs n >= 2")
        if quantity == "I_A":
            return (p1 * (n * (n + 2)) + p0sq * (n * (n + 2)) + p0 * (7 * n + 4) + (n + 5)) * 2
        if quantity == "I_B":
            return p0sq * (2 * n * (n + 1)) + p0 * (2 * (5 * n + 1)) + (2 * n + 7)
        return (p1 * (n * (n + 2)) + p0sq * (n * (2 * n + 1)) + p0 * (8 * n + 3) + 6) * 2
    z2 = psi1(1)
    n3 = n**3
    if quantity == "I_A":
        return (
            p1 * (-18 * n3) + z2 * (36 * n3) + p0sq * (18 * n3)
            + p0 * (6 * n * (5 * n * n + 3 * n + 1))
            + (-43 * n3 + 33 * n * n + 22 * n + 6)
        ) * F(1, 9)
    if quantity == "I_B":
        return (
            p1 * (-72 * n3) + z2 * (72 * n3) + p0sq * (18 * (2 * n - 1) * n * n)
            + p0 * (6 * n * (10 * n * n - 3 * n - 1))
            + (-86 * n3 + 57 * n * n + 35 * n + 12)
        ) * F(1, 18)
    return (
        p1 * (8 * n3) + p0sq * (4 * n * n * (n * n + 1))
        + p0 * (4 * n * (n3 + n * n + 3 * n + 1))
        + n * (n + 1) * (n * n + n + 2)
    ) * F(1, 4)


def table_rows_for(d) -> list:
    """Table rows applicable to ``d`` (possibly several, e.g. m = n = 1)."""
    d = as_dims(d)
    rows = []
    if d.m == 1:
        rows.append("m=1")
    if d.m == 2:
        rows.append("m=2")
    if d.m == d.n:
        rows.append("m=n")
    return rows


# Reports -----------------------------------------------------------------------

QUANTITIES = {
    "mean_S": ("fixed-trace", page_mean),
    "var_S": ("fixed-trace", vpo_variance),
    "second_moment_S": ("fixed-trace", second_moment_S),
    "E_T": ("laguerre", induced_T_mean),
    "E_T2": ("laguerre", assemble_E_T2),
    "I_A": ("laguerre", IA_closed),
    "I_B": ("laguerre", IB_closed),
}


@dataclass(frozen=True)
class MomentReport:
    dims: Dims
    ensemble: str
    quantity: str
    exact: SymExpr
    numeric: float

    def to_dict(self) -> dict:
        return {
            "m": self.dims.m,
            "n": self.dims.n,
            "ensemble": self.ensemble,
            "quantity": self.quantity,
            "exact": str(self.exact),
            "exact_coeffs": self.exact.to_json(),
            "numeric": self.numeric,
        }


def moment_report(d, quantity: str) -> MomentReport:
    d = as_dims(d)
    try:
        ensemble, fn = QUANTITIES[quantity]
    except KeyError:
        raise DomainError(f"unknown quantity {quantity!r}; choose from {sorted(QUANTITIES)}") from None
    exact = fn(d)
    return MomentReport(d, ensemble, quantity, exact, to_float(exact))
