"""Exact rational arithmetic and polynomials in Euler's gamma and pi^2.

Every closed form in this package evaluates, at integer dimensions, to a
polynomial in the two transcendental constants gamma (Euler-Mascheroni) and
pi^2 with rational coefficients.  :class:`SymExpr` stores such a polynomial in
sparse canonical form so that two expressions are equal exactly when their
coefficient maps are identical.

Rationals are plain :class:`fractions.Fraction` objects.
"""

from __future__ import annotations

import decimal
import operator
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

BigRational = Fraction

Monomial = Tuple[int, int]  # (power of gamma, power of pi^2)
Scalar = Union[int, Fraction]

# 105 significant digits each.
EULER_GAMMA_DIGITS = (
    "0.577215664901532860606512090082402431042159335939923598805767234884867"
    "726777664670936947063291746749514631"
)
PI_SQUARED_DIGITS = (
    "9.869604401089358618834490999876151135313699407240790626413349376220044"
    "82241920524300177340371855223182403"
)
MAX_EVAL_DIGITS = 100

_RAT_OPS = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "/": operator.truediv,
}


def rat_arith(a: Scalar, b: Scalar, op: str) -> Fraction:
    """Exact ``a op b`` in canonical (reduced) form.

    Division by zero raises :class:`ZeroDivisionError`.
    """
    op = {"×": "*", "÷": "/", "−": "-"}.get(op, op)
    try:
        fn = _RAT_OPS[op]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}") from None
    return Fraction(fn(Fraction(a), Fraction(b)))


class SymExpr:
    """Polynomial ``sum c_ij * gamma**i * (pi**2)**j`` with rational ``c_ij``.

    Instances are immutable.  Zero coefficients are never stored, so the zero
    expression has an empty coefficient map.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[Monomial, Scalar] | None = None):
        c: Dict[Monomial, Fraction] = {}
        if coeffs:
            for (i, j), v in coeffs.items():
                if i < 0 or j < 0:
                    raise ValueError("exponents must be non-negative")
                v = Fraction(v)
                if v:
                    key = (int(i), int(j))
                    c[key] = c.get(key, Fraction(0)) + v
                    if not c[key]:
                        del c[key]
        object.__setattr__(self, "_c", c)

    def __setattr__(self, name, value):
        raise AttributeError("SymExpr is immutable")

    @classmethod
    def const(cls, value: Scalar) -> "SymExpr":
        return cls({(0, 0): value})

    @classmethod
    def _wrap(cls, c: Dict[Monomial, Fraction]) -> "SymExpr":
        obj = object.__new__(cls)
        object.__setattr__(obj, "_c", {k: v for k, v in c.items() if v})
        return obj

    @property
    def coeffs(self) -> Dict[Monomial, Fraction]:
        return dict(self._c)

    def coeff(self, gamma_deg: int = 0, pi2_deg: int = 0) -> Fraction:
        return self._c.get((gamma_deg, pi2_deg), Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def is_rational(self) -> bool:
        return all(k == (0, 0) for k in self._c)

    def degree(self) -> Tuple[int, int]:
        """Maximum exponents of gamma and of pi^2 over stored monomials."""
        if not self._c:
            return (0, 0)
        return (max(i for i, _ in self._c), max(j for _, j in self._c))

    # arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "SymExpr | None":
        if isinstance(other, SymExpr):
            return other
        if isinstance(other, (int, Fraction)):
            return SymExpr.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, Fraction(0)) + v
        return SymExpr._wrap(c)

    __radd__ = __add__

    def __neg__(self):
        return SymExpr._wrap({k: -v for k, v in self._c.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return SymExpr()
            return SymExpr._wrap({k: v * other for k, v in self._c.items()})
        if not isinstance(other, SymExpr):
            return NotImplemented
        c: Dict[Monomial, Fraction] = {}
        for (i1, j1), v1 in self._c.items():
            for (i2, j2), v2 in other._c.items():
                k = (i1 + i2, j1 + j2)
                c[k] = c.get(k, Fraction(0)) + v1 * v2
        return SymExpr._wrap(c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("SymExpr division by zero")
            inv = 1 / Fraction(other)
            return SymExpr._wrap({k: v * inv for k, v in self._c.items()})
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __bool__(self):
        return bool(self._c)

    # rendering ------------------------------------------------------------

    def __repr__(self):
        return f"SymExpr({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for (i, j) in sorted(self._c, key=lambda k: (k[0] + k[1], k[1], k[0])):
            v = self._c[(i, j)]
            mono = []
            if i:
                mono.append("gamma" if i == 1 else f"gamma^{i}")
            if j:
                mono.append("pi^2" if j == 1 else f"pi^{2 * j}")
            mag = abs(v)
            if mono:
                body = "*".join(mono) if mag == 1 else f"{mag}*" + "*".join(mono)
            else:
                body = str(mag)
            if not parts:
                parts.append(("-" if v < 0 else "") + body)
            else:
                parts.append(("- " if v < 0 else "+ ") + body)
        return " ".join(parts)

    def to_json(self) -> list:
        """List of ``{gamma_deg, pi2_deg, coeff}`` records, coeff as ``"p/q"``."""
        return [
            {"gamma_deg": i, "pi2_deg": j, "coeff": str(v)}
            for (i, j), v in sorted(self._c.items())
        ]

    @classmethod
    def from_json(cls, records: Iterable[Mapping]) -> "SymExpr":
        return cls({(r["gamma_deg"], r["pi2_deg"]): Fraction(r["coeff"]) for r in records})


ZERO = SymExpr()
ONE = SymExpr.const(1)
GAMMA = SymExpr({(1, 0): 1})
PI2 = SymExpr({(0, 1): 1})


def sym_arith(a: SymExpr, b: SymExpr, op: str) -> SymExpr:
    op = {"×": "*", "−": "-"}.get(op, op)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    raise ValueError(f"unsupported SymExpr operator {op!r}")


def sym_eval(e: SymExpr, precision_digits: int = 30) -> decimal.Decimal:
    """Numeric value of ``e`` to ``precision_digits`` significant digits."""
    if precision_digits < 15:
        raise ValueError("precision_digits must be at least 15")
    if precision_digits > MAX_EVAL_DIGITS:
        raise ValueError(f"embedded constants support at most {MAX_EVAL_DIGITS} digits")
    ctx = decimal.Context(prec=precision_digits + 10)
    g = ctx.create_decimal(EULER_GAMMA_DIGITS)
    p2 = ctx.create_decimal(PI_SQUARED_DIGITS)
    total = ctx.create_decimal(0)
    for (i, j), v in e.coeffs.items():
        term = ctx.divide(ctx.create_decimal(v.numerator), ctx.create_decimal(v.denominator))
        if i:
            term = ctx.multiply(term, ctx.power(g, i))
        if j:
            term = ctx.multiply(term, ctx.power(p2, j))
        total = ctx.add(total, term)
    return decimal.Context(prec=precision_digits).plus(total)


def to_float(e: SymExpr) -> float:
    return float(sym_eval(e, 20))
