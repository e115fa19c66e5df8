"""Exact instance checks of the finite-sum identities behind the simplification.

Each identity is a pair: a left side summed literally, and a right side
given as a list of ``(coefficient, basis)`` terms.  The right side is
``sum coefficient * basis``.  Keeping the coefficients explicit lets a
mutation test perturb one coefficient at a time and confirm the sweep notices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import DomainError
from .exactnum import ONE, ZERO, SymExpr
from .moments import residual_sum
from .polygamma import psi0_int as psi0
from .polygamma import psi1_int as psi1

F = Fraction
fac = math.factorial
Terms = List[Tuple[Fraction, SymExpr]]

PSI_SUM_IDS = tuple(f"A{i}" for i in range(1, 10))
FACTORIAL_IDS = ("A10", "A11", "A12")
ALL_IDS = PSI_SUM_IDS + FACTORIAL_IDS + ("WY1", "WY2", "MILGRAM", "HYP4F3", "CHU")


@dataclass(frozen=True)
class IdentityCheckResult:
    identity: str
    params: Tuple[int, int]
    lhs: SymExpr
    rhs: SymExpr
    equal: bool

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "params": list(self.params),
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "equal": self.equal,
        }


@dataclass(frozen=True)
class _Identity:
    name: str
    param_names: Tuple[str, str]
    valid: Callable[[int, int], bool]
    lhs: Callable[[int, int], SymExpr]
    rhs_terms: Callable[[int, int], Terms]


# literal sums ----------------------------------------------------------------


def s_sum(m: int, n: int) -> Fraction:
    """s(m, n) = sum_{k=1}^{m} (n-k)!/(m-k)!/k."""
    return sum((F(fac(n - k), fac(m - k) * k) for k in range(1, m + 1)), F(0))


def t_sum(m: int, n: int) -> Fraction:
    """t(m, n) = sum_{k=1}^{m} (n-k)!/(m-k)!/k^2."""
    return sum((F(fac(n - k), fac(m - k) * k * k) for k in range(1, m + 1)), F(0))


def _rising(a: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= a + i
    return out


def hypergeometric_terminating(upper: Sequence[int], lower: Sequence[int]) -> Fraction:
    """pFq(upper; lower; 1) for a series terminated by a non-positive upper parameter.

    The terminating parameter must be reached before any non-positive lower
    parameter vanishes.
    """
    stops = [-a for a in upper if a <= 0]
    if not stops:
        raise DomainError("series does not terminate")
    kmax = min(stops)
    total = F(0)
    for k in range(kmax + 1):
        num = 1
        for a in upper:
            num *= _rising(a, k)
        den = fac(k)
        for b in lower:
            den *= _rising(b, k)
        if den == 0:
            raise DomainError("lower parameter hits zero before termination")
        total += F(num, den)
    return total


def _psi_sum(weight_power: int, squared: bool, trigamma: bool):
    def lhs(n: int, l: int) -> SymExpr:
        total = ZERO
        for k in range(1, n + 1):
            if trigamma:
                v = psi1(k + l)
            else:
                v = psi0(k + l)
                if squared:
                    v = v * v
            total += v * k**weight_power
        return total

    return lhs


def _sq(x: SymExpr) -> SymExpr:
    return x * x


# right sides -------------------------------------------------------------------


def _cubic(n, l):
    return F(2 * n**3 + 3 * n**2 + n + 2 * l**3 - 3 * l**2 + l, 6)


def _rhs_A1(n, l):
    return [(F(n + l), psi0(n + l)), (F(-l), psi0(l)), (F(-n), ONE)]


def _rhs_A2(n, l):
    return [
        (F(n * n + n - l * l + l, 2), psi0(n + l)),
        (F(l * (l - 1), 2), psi0(l)),
        (F(n * (-n + 2 * l - 1), 4), ONE),
    ]


def _rhs_A3(n, l):
    return [
        (_cubic(n, l), psi0(n + l)),
        (F(-l * (2 * l * l - 3 * l + 1), 6), psi0(l)),
        (F(n * (-4 * n * n + 6 * n * l - 3 * n - 12 * l * l + 12 * l + 1), 36), ONE),
    ]


def _rhs_A4(n, l):
    return [
        (F(n + l), _sq(psi0(n + l))),
        (F(-(2 * n + 2 * l - 1)), psi0(n + l)),
        (F(-l), _sq(psi0(l))),
        (F(2 * l - 1), psi0(l)),
        (F(2 * n), ONE),
    ]


def _rhs_A5(n, l):
    return [
        (F(n * n + n - l * l + l, 2), _sq(psi0(n + l))),
        (F(-n * n + 2 * n * l - n + 3 * l * l - 3 * l + 1, 2), psi0(n + l)),
        (F(l * (l - 1), 2), _sq(psi0(l))),
        (F(-(3 * l * l - 3 * l + 1), 2), psi0(l)),
        (F(n * (n - 6 * l + 3), 4), ONE),
    ]


def _rhs_A6(n, l):
    c = 22 * l**3 - 33 * l**2 + 17 * l - 3
    return [
        (_cubic(n, l), _sq(psi0(n + l))),
        (
            F(-(4 * n**3 - 6 * n * n * l + 3 * n * n + 12 * n * l * l - 12 * n * l - n + c), 18),
            psi0(n + l),
        ),
        (F(-l * (2 * l * l - 3 * l + 1), 6), _sq(psi0(l))),
        (F(c, 18), psi0(l)),
        (F(n * (8 * n * n - 30 * n * l + 15 * n + 132 * l * l - 132 * l + 25), 108), ONE),
    ]


def _rhs_A7(n, l):
    return [
        (F(n + l), psi1(n + l)),
        (F(-l), psi1(l)),
        (F(1), psi0(n + l)),
        (F(-1), psi0(l)),
    ]


def _rhs_A8(n, l):
    return [
        (F(n * n + n - l * l + l, 2), psi1(n + l)),
        (F(l * (l - 1), 2), psi1(l)),
        (F(-(2 * l - 1), 2), psi0(n + l)),
        (F(2 * l - 1, 2), psi0(l)),
        (F(n, 2), ONE),
    ]


def _rhs_A9(n, l):
    c = 6 * l * l - 6 * l + 1
    return [
        (_cubic(n, l), psi1(n + l)),
        (F(-l * (2 * l * l - 3 * l + 1), 6), psi1(l)),
        (F(c, 6), psi0(n + l)),
        (F(-c, 6), psi0(l)),
        (F(n * (n - 4 * l + 2), 6), ONE),
    ]


def _rhs_A10(m, n):
    return [(F(fac(n - 1), fac(m - 1)) * F(n, n - m + 1), ONE)]


def _rhs_A11(m, n):
    c = F(fac(n), fac(m))
    return [(c, psi0(n + 1)), (-c, psi0(n - m + 1))]


def _sum12_terms(m, n, scale: Fraction) -> Terms:
    """Right side of the 1/k^2 factorial sum, every coefficient multiplied by ``scale``."""
    half = scale / 2
    return [
        (scale, residual_sum(m, n)),
        (half, psi1(n - m + 1)),
        (-half, psi1(n + 1)),
        (half, _sq(psi0(n - m + 1))),
        (-half, _sq(psi0(n + 1))),
        (scale, psi0(n - m) * (psi0(n + 1) - psi0(m + 1) - psi0(n - m + 1) + psi0(1))),
    ]


def _rhs_A12(m, n):
    return _sum12_terms(m, n, F(fac(n), fac(m)))


def _rhs_WY1(m, n):
    return [(F(fac(n - 1), fac(m)), ONE), (F(n, m), SymExpr.const(s_sum(m - 1, n - 1)))]


def _rhs_WY2(m, n):
    return [
        (F(fac(n - 1) * (n - m), fac(m) * m), psi0(n) - psi0(n - m)),
        (F(n, m), SymExpr.const(t_sum(m - 1, n - 1))),
    ]


def _lhs_milgram(m, n):
    return sum((psi0(n - m + k) * F(1, n - m + k) for k in range(1, m + 1)), ZERO)


def _rhs_milgram(m, n):
    h = F(1, 2)
    return [
        (h, psi1(n + 1)),
        (-h, psi1(n - m + 1)),
        (h, _sq(psi0(n + 1))),
        (-h, _sq(psi0(n - m + 1))),
    ]


def _lhs_4f3(m, n):
    series = hypergeometric_terminating((1, 1, 1, 1 - m), (2, 2, 1 - n))
    return SymExpr.const(F(fac(n - 1), fac(m - 1)) * series)


def _rhs_4f3(m, n):
    # closed form of 4F3 carries n/m; scaled by (n-1)!/(m-1)! like the left side
    return _sum12_terms(m, n, F(n, m) * F(fac(n - 1), fac(m - 1)))


def _lhs_chu(m, n):
    series = hypergeometric_terminating((1, 1, 1 - m), (2, 1 - n))
    return SymExpr.const(F(fac(n - 1), fac(m - 1)) * series)


def _m_le_n(m, n):
    return 1 <= m <= n


def _m_lt_n(m, n):
    return 1 <= m < n


def _pos(n, l):
    return n >= 1 and l >= 1


def _factorial_lhs(power: int):
    def lhs(m, n):
        return SymExpr.const(
            sum((F(fac(n - k), fac(m - k) * k**power) for k in range(1, m + 1)), F(0))
        )

    return lhs


_REGISTRY: Dict[str, _Identity] = {}


def _register(ident: _Identity) -> None:
    _REGISTRY[ident.name] = ident


for _name, _w, _sqd, _tri, _rhs in (
    ("A1", 0, False, False, _rhs_A1),
    ("A2", 1, False, False, _rhs_A2),
    ("A3", 2, False, False, _rhs_A3),
    ("A4", 0, True, False, _rhs_A4),
    ("A5", 1, True, False, _rhs_A5),
    ("A6", 2, True, False, _rhs_A6),
    ("A7", 0, False, True, _rhs_A7),
    ("A8", 1, False, True, _rhs_A8),
    ("A9", 2, False, True, _rhs_A9),
):
    _register(_Identity(_name, ("n", "l"), _pos, _psi_sum(_w, _sqd, _tri), _rhs))

_register(_Identity("A10", ("m", "n"), _m_le_n, _factorial_lhs(0), _rhs_A10))
_register(_Identity("A11", ("m", "n"), _m_le_n, _factorial_lhs(1), _rhs_A11))
_register(_Identity("A12", ("m", "n"), _m_lt_n, _factorial_lhs(2), _rhs_A12))
_register(_Identity("WY1", ("m", "n"), _m_lt_n, lambda m, n: SymExpr.const(s_sum(m, n)), _rhs_WY1))
_register(_Identity("WY2", ("m", "n"), _m_lt_n, lambda m, n: SymExpr.const(t_sum(m, n)), _rhs_WY2))
_register(_Identity("MILGRAM", ("m", "n"), _m_lt_n, _lhs_milgram, _rhs_milgram))
_register(_Identity("HYP4F3", ("m", "n"), _m_lt_n, _lhs_4f3, _rhs_4f3))
_register(_Identity("CHU", ("m", "n"), _m_le_n, _lhs_chu, _rhs_A11))


def identity_ids() -> Tuple[str, ...]:
    return ALL_IDS


def rhs_term_count(identity: str, p: int = 3, q: int = 5) -> int:
    return len(_REGISTRY[identity].rhs_terms(p, q))


def check(identity: str, p: int, q: int, perturb: Optional[int] = None) -> IdentityCheckResult:
    """Evaluate one identity instance exactly.

    ``(p, q)`` is ``(n, l)`` for A1-A9 and ``(m, n)`` otherwise.  ``perturb``
    adds 1 to the coefficient of the right-side term with that index.
    """
    try:
        ident = _REGISTRY[identity]
    except KeyError:
        raise DomainError(f"unknown identity {identity!r}") from None
    if not ident.valid(p, q):
        a, b = ident.param_names
        raise DomainError(f"{identity} is not defined at {a}={p}, {b}={q}")
    terms = ident.rhs_terms(p, q)
    if perturb is not None:
        c, basis = terms[perturb]
        terms = list(terms)
        terms[perturb] = (c + 1, basis)
    rhs = sum((basis * c for c, basis in terms), ZERO)
    lhs = ident.lhs(p, q)
    return IdentityCheckResult(identity, (p, q), lhs, rhs, (lhs - rhs).is_zero())


def check_psi_sum(identity: str, n: int, l: int) -> IdentityCheckResult:
    if identity not in PSI_SUM_IDS:
        raise DomainError(f"{identity} is not a polygamma-sum identity")
    return check(identity, n, l)


def check_factorial_sum(identity: str, m: int, n: int) -> IdentityCheckResult:
    if identity not in FACTORIAL_IDS:
        raise DomainError(f"{identity} is not a factorial-sum identity")
    return check(identity, m, n)


def check_recurrences(m: int, n: int) -> Tuple[IdentityCheckResult, IdentityCheckResult]:
    return check("WY1", m, n), check("WY2", m, n)


def check_milgram(m: int, n: int) -> IdentityCheckResult:
    return check("MILGRAM", m, n)


def check_hyp4F3(m: int, n: int) -> IdentityCheckResult:
    return check("HYP4F3", m, n)


def check_chu(m: int, n: int) -> IdentityCheckResult:
    return check("CHU", m, n)


def sweep_params(identity: str, max_param: int) -> Iterator[Tuple[int, int]]:
    """Valid parameter pairs up to ``max_param`` in lexicographic order."""
    ident = _REGISTRY[identity]
    for p in range(1, max_param + 1):
        for q in range(1, max_param + 1):
            if ident.valid(p, q):
                yield p, q


def sweep(
    max_param: int = 20,
    ids: Sequence[str] = ALL_IDS,
    perturb: Optional[Tuple[str, int]] = None,
) -> List[IdentityCheckResult]:
    """Check every identity at every valid parameter pair up to ``max_param``."""
    out = []
    for name in ids:
        idx = perturb[1] if perturb and perturb[0] == name else None
        for p, q in sweep_params(name, max_param):
            out.append(check(name, p, q, perturb=idx))
    return out
