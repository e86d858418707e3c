"""Exact-or-rigorous evaluation of the closed forms appearing in bounds.

Quantities are kept as sympy expressions built from integers, rationals,
rational powers and base-2 logarithms.  Comparisons are decided with mpmath
interval arithmetic (outward rounding), escalating precision; a comparison
that is still undecided at the top precision is settled by exact symbolic
simplification.
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction
from typing import Union

import mpmath
import sympy

Value = Union[int, Fraction, sympy.Expr]

_PRECISIONS = (40, 120, 400)


def rat(x: Value) -> sympy.Expr:
    if isinstance(x, sympy.Basic):
        return x
    if isinstance(x, Fraction):
        return sympy.Rational(x.numerator, x.denominator)
    if isinstance(x, int):
        return sympy.Integer(x)
    raise TypeError(f"cannot make an exact value from {type(x).__name__}")


def log2(x: Value) -> sympy.Expr:
    return sympy.log(rat(x), 2)


def power(base: Value, exp: Value) -> sympy.Expr:
    return sympy.Pow(rat(base), rat(exp))


def is_rational(expr: Value) -> bool:
    return isinstance(expr, (int, Fraction)) or (isinstance(expr, sympy.Basic) and expr.is_Rational)


def as_fraction(expr: Value) -> Fraction:
    if isinstance(expr, (int, Fraction)):
        return Fraction(expr)
    if expr.is_Rational:
        return Fraction(int(expr.p), int(expr.q))
    raise ValueError(f"{expr} is not rational")


@contextmanager
def iv_dps(dps: int):
    iv = mpmath.iv
    saved = iv.dps
    iv.dps = dps
    try:
        yield iv
    finally:
        iv.dps = saved


def enclose(expr: Value, dps: int = _PRECISIONS[0]):
    """Interval enclosure of ``expr`` as an mpmath.iv.mpf."""
    with iv_dps(dps) as iv:
        return _enclose(rat(expr), iv)


def _enclose(e: sympy.Expr, iv):
    if e.is_Integer:
        return iv.mpf(int(e))
    if e.is_Rational:
        return iv.mpf(int(e.p)) / iv.mpf(int(e.q))
    if e.is_Add:
        total = iv.mpf(0)
        for arg in e.args:
            total += _enclose(arg, iv)
        return total
    if e.is_Mul:
        prod = iv.mpf(1)
        for arg in e.args:
            prod *= _enclose(arg, iv)
        return prod
    if e.is_Pow:
        base, exp = e.args
        b = _enclose(base, iv)
        if exp.is_Integer:
            n = int(exp)
            return b**n if n >= 0 else iv.mpf(1) / (b ** (-n))
        if exp.is_Rational and b.a > 0:
            return iv.exp(iv.log(b) * (iv.mpf(int(exp.p)) / iv.mpf(int(exp.q))))
        return iv.exp(iv.log(b) * _enclose(exp, iv))
    if isinstance(e, sympy.log):
        return iv.log(_enclose(e.args[0], iv))
    if e.is_Float:
        raise TypeError("floats are not exact; build bounds from rationals")
    raise TypeError(f"cannot enclose {e!r}")


def decide(lhs: Value, rel: str, rhs: Value) -> bool:
    """Rigorously decide ``lhs rel rhs`` for rel in >=, <=, ==, >, <."""
    if is_rational(lhs) and is_rational(rhs):
        a, b = as_fraction(lhs), as_fraction(rhs)
        return {">=": a >= b, "<=": a <= b, "==": a == b, ">": a > b, "<": a < b}[rel]
    le, re = rat(lhs), rat(rhs)
    for dps in _PRECISIONS:
        x, y = enclose(le, dps), enclose(re, dps)
        if x.a > y.b:
            return rel in (">=", ">")
        if x.b < y.a:
            return rel in ("<=", "<")
        if rel == "==":
            continue
    # enclosures still overlap: settle equality symbolically
    diff = sympy.simplify(sympy.expand(sympy.expand_log(le - re, force=True)))
    if diff == 0:
        return rel in (">=", "<=", "==")
    raise ArithmeticError(f"cannot decide {le} {rel} {re} at {_PRECISIONS[-1]} digits")


def to_float(expr: Value) -> float:
    if isinstance(expr, (int, Fraction)):
        return float(expr)
    return float(enclose(expr, 30).mid)


def to_text(expr: Value, digits: int = 30) -> str:
    """"p/q" for rationals, otherwise a decimal with ``digits`` significant digits."""
    if is_rational(expr):
        return str(as_fraction(expr))
    with mpmath.workdps(digits + 10):
        mid = enclose(expr, digits + 10).mid
        return mpmath.nstr(mpmath.mpf(mid), digits)


def ratio(lhs: Value, rhs: Value) -> float:
    """lhs/rhs as a float (inf when rhs is zero)."""
    if is_rational(lhs) and is_rational(rhs):
        b = as_fraction(rhs)
        if b == 0:
            return float("inf")
        return float(as_fraction(lhs) / b)
    x, y = enclose(lhs, 30), enclose(rhs, 30)
    with mpmath.workdps(30):
        if y.mid == 0:
            return float("inf")
        return float(mpmath.mpf(x.mid) / mpmath.mpf(y.mid))
