"""Exact evaluation over the field of values a + b*sqrt(n).

Closed expressions built from rationals, square roots, and trig functions
at multiples of pi/6 and pi/4 evaluate exactly; anything that leaves the
field raises NotRepresentable. Internally values carry one extra symbolic
term, a rational multiple of pi, so that trig arguments like pi/4 stay
exact on the way in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..expr.nodes import (
    Binary,
    Constant,
    Derivative,
    Expr,
    Function,
    Number,
    Unary,
    Variable,
)
from .errors import DomainError, NotRepresentable, UnboundVariable

F = Fraction


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = s*s*m with m squarefree; returns (s, m)."""
    s, m = 1, 1
    d = 2
    while d * d <= n:
        exp = 0
        while n % d == 0:
            n //= d
            exp += 1
        s *= d ** (exp // 2)
        if exp % 2:
            m *= d
        d += 1
    return s, m * n


@dataclass(frozen=True)
class ExactValue:
    """a + b*sqrt(n), normalized: n squarefree, and n = 0 when b = 0."""

    a: Fraction
    b: Fraction = Fraction(0)
    n: int = 0

    def __post_init__(self):
        a, b, n = Fraction(self.a), Fraction(self.b), self.n
        if b == 0:
            n = 0
        elif n == 0:
            b = F(0)
        else:
            s, m = _squarefree_split(n)
            b *= s
            n = m
            if n == 1:
                a += b
                b, n = F(0), 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "n", n)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def to_float(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.n)

    def __neg__(self) -> "ExactValue":
        return ExactValue(-self.a, -self.b, self.n)

    def __add__(self, other: "ExactValue") -> "ExactValue":
        if self.b == 0:
            return ExactValue(self.a + other.a, other.b, other.n)
        if other.b == 0:
            return ExactValue(self.a + other.a, self.b, self.n)
        if self.n != other.n:
            raise NotRepresentable("sum of unlike radicals")
        return ExactValue(self.a + other.a, self.b + other.b, self.n)

    def __sub__(self, other: "ExactValue") -> "ExactValue":
        return self + (-other)

    def __mul__(self, other: "ExactValue") -> "ExactValue":
        # collect by radical; at most one may survive
        terms: dict[int, Fraction] = {}

        def put(n: int, c: Fraction):
            if c == 0:
                return
            if n > 1:
                s, m = _squarefree_split(n)
                c, n = c * s, m
            if n <= 1:
                terms[0] = terms.get(0, F(0)) + c
            else:
                terms[n] = terms.get(n, F(0)) + c

        put(0, self.a * other.a)
        put(other.n, self.a * other.b)
        put(self.n, self.b * other.a)
        put(self.n * other.n, self.b * other.b)
        terms = {n: c for n, c in terms.items() if c != 0}
        radicals = [n for n in terms if n != 0]
        if len(radicals) > 1:
            raise NotRepresentable("product of unlike radicals")
        n = radicals[0] if radicals else 0
        return ExactValue(terms.get(0, F(0)), terms.get(n, F(0)) if n else F(0), n)

    def inverse(self) -> "ExactValue":
        if self.is_zero():
            raise DomainError("division by zero")
        denom = self.a * self.a - self.b * self.b * self.n
        if denom == 0:
            # impossible for nonzero values with squarefree n > 1
            raise DomainError("division by zero")
        return ExactValue(self.a / denom, -self.b / denom, self.n)

    def __truediv__(self, other: "ExactValue") -> "ExactValue":
        return self * other.inverse()

    def pow_int(self, k: int) -> "ExactValue":
        if k < 0:
            return self.inverse().pow_int(-k)
        out = ExactValue(F(1))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out


def exact_sqrt(x: Fraction) -> ExactValue:
    if x < 0:
        raise DomainError("square root of a negative value")
    if x == 0:
        return ExactValue(F(0))
    p, q = x.numerator, x.denominator
    s, m = _squarefree_split(p * q)
    return ExactValue(F(0), F(s, q), m)


# -- trig tables -------------------------------------------------------------

_HALF = F(1, 2)
_R2 = ExactValue(F(0), _HALF, 2)   # sqrt(2)/2
_R3 = ExactValue(F(0), _HALF, 3)   # sqrt(3)/2

# sin(t*pi) for t in [0, 1/2] on the pi/6 and pi/4 lattices
_SIN_BASE = {
    F(0): ExactValue(F(0)),
    F(1, 6): ExactValue(_HALF),
    F(1, 4): _R2,
    F(1, 3): _R3,
    F(1, 2): ExactValue(F(1)),
}


def _sin_pi_multiple(t: Fraction) -> ExactValue:
    t = t % 2
    if t > 1:
        return -_sin_pi_multiple(t - 1)
    if t > F(1, 2):
        t = 1 - t
    if t in _SIN_BASE:
        return _SIN_BASE[t]
    raise NotRepresentable(f"sin({t}*pi) outside the exact table")


_ASIN_TABLE = {
    ExactValue(F(0)): F(0),
    ExactValue(_HALF): F(1, 6),
    _R2: F(1, 4),
    _R3: F(1, 3),
    ExactValue(F(1)): F(1, 2),
}

_ATAN_TABLE = {
    ExactValue(F(0)): F(0),
    ExactValue(F(0), F(1, 3), 3): F(1, 6),  # sqrt(3)/3
    ExactValue(F(1)): F(1, 4),
    ExactValue(F(0), F(1), 3): F(1, 3),     # sqrt(3)
}


# -- evaluation --------------------------------------------------------------

# internal value: surd + pi_coef * pi
_Val = tuple[ExactValue, Fraction]


def _require_surd(v: _Val, what: str) -> ExactValue:
    surd, c = v
    if c != 0:
        raise NotRepresentable(f"{what} of a pi-multiple")
    return surd


def _val_float(v: _Val) -> float:
    return v[0].to_float() + float(v[1]) * math.pi


def _val_sign(v: _Val) -> int:
    if v[0].is_zero() and v[1] == 0:
        return 0
    x = _val_float(v)
    return -1 if x < 0 else 1


def _eval(e: Expr) -> _Val:
    if isinstance(e, Number):
        return ExactValue(e.value), F(0)
    if isinstance(e, Constant):
        if e.name == "pi":
            return ExactValue(F(0)), F(1)
        raise NotRepresentable("e is not in the exact field")
    if isinstance(e, Variable):
        raise UnboundVariable(e.name)
    if isinstance(e, Unary):
        surd, c = _eval(e.arg)
        return -surd, -c
    if isinstance(e, Binary):
        return _eval_binary(e)
    if isinstance(e, Function):
        return _eval_function(e)
    if isinstance(e, Derivative):
        from .calculus import differentiate

        return _eval(differentiate(e.body, e.var))
    raise TypeError(f"not an Expr: {e!r}")


def _eval_binary(e: Binary) -> _Val:
    (ls, lc) = _eval(e.left)
    (rs, rc) = _eval(e.right)
    if e.op == "add":
        return ls + rs, lc + rc
    if e.op == "sub":
        return ls - rs, lc - rc
    if e.op == "mul":
        if rc == 0 and rs.is_rational():
            k = rs.a
            return ls * ExactValue(k), lc * k
        if lc == 0 and ls.is_rational():
            k = ls.a
            return rs * ExactValue(k), rc * k
        if lc == 0 and rc == 0:
            return ls * rs, F(0)
        raise NotRepresentable("product involving pi")
    if e.op == "div":
        if rc == 0:
            if rs.is_zero():
                raise DomainError("division by zero")
            if rs.is_rational():
                return ls / rs, lc / rs.a
            if lc == 0:
                return ls / rs, F(0)
            raise NotRepresentable("pi over a radical")
        # rational multiples of pi cancel: (c1*pi)/(c2*pi)
        if ls.is_zero() and rs.is_zero():
            return ExactValue(lc / rc), F(0)
        raise NotRepresentable("division by a pi-multiple")
    # pow
    exp = _require_surd((rs, rc), "exponent")
    if not exp.is_rational():
        raise NotRepresentable("irrational exponent")
    return _eval_pow((ls, lc), exp.a)


def _eval_pow(base: _Val, q: Fraction) -> _Val:
    surd, c = base
    if q.denominator == 1:
        k = int(q)
        if k == 0:
            return ExactValue(F(1)), F(0)  # x^0 -> 1, 0^0 included
        if k == 1:
            return base
        if c != 0:
            raise NotRepresentable("integer power of a pi-multiple")
        if surd.is_zero() and k < 0:
            raise DomainError("zero to a negative power")
        return surd.pow_int(k), F(0)
    if c != 0:
        raise NotRepresentable("fractional power of a pi-multiple")
    if not surd.is_rational():
        raise NotRepresentable("fractional power of a radical")
    a = surd.a
    if a < 0:
        raise DomainError("fractional power of a negative base")
    if a == 0:
        if q < 0:
            raise DomainError("zero to a negative power")
        return ExactValue(F(0)), F(0)
    if q.denominator == 2:
        return exact_sqrt(a).pow_int(q.numerator), F(0)
    root = _rational_root(a, q.denominator)
    if root is None:
        raise NotRepresentable(f"{a}^(1/{q.denominator}) is irrational")
    return ExactValue(root ** q.numerator), F(0)


def _rational_root(x: Fraction, r: int) -> Fraction | None:
    def iroot(v: int) -> int | None:
        k = round(v ** (1.0 / r))
        for cand in (k - 1, k, k + 1):
            if cand >= 0 and cand ** r == v:
                return cand
        return None

    p, q = iroot(x.numerator), iroot(x.denominator)
    if p is None or q is None:
        return None
    return F(p, q)


def _eval_function(e: Function) -> _Val:
    name = e.name
    arg = _eval(e.arg)
    surd, c = arg

    if name in ("sin", "cos", "tan", "cot", "sec", "csc"):
        if not surd.is_zero():
            raise NotRepresentable(f"{name} argument is not a pi-multiple")
        t = c
        sin_v = _sin_pi_multiple(t)
        cos_v = _sin_pi_multiple(t + _HALF)
        if name == "sin":
            return sin_v, F(0)
        if name == "cos":
            return cos_v, F(0)
        if name == "tan":
            if cos_v.is_zero():
                raise DomainError("tan at a pole")
            return sin_v / cos_v, F(0)
        if name == "cot":
            if sin_v.is_zero():
                raise DomainError("cot at a pole")
            return cos_v / sin_v, F(0)
        if name == "sec":
            if cos_v.is_zero():
                raise DomainError("sec at a pole")
            return cos_v.inverse(), F(0)
        if sin_v.is_zero():
            raise DomainError("csc at a pole")
        return sin_v.inverse(), F(0)

    if name in ("asin", "acos"):
        x = _require_surd(arg, name)
        key, sign = (x, 1) if _val_sign((x, F(0))) >= 0 else (-x, -1)
        if key not in _ASIN_TABLE:
            if abs(key.to_float()) > 1:
                raise DomainError(f"{name} outside [-1, 1]")
            raise NotRepresentable(f"{name} outside the exact table")
        t = sign * _ASIN_TABLE[key]
        if name == "asin":
            return ExactValue(F(0)), t
        return ExactValue(F(0)), _HALF - t
    if name == "atan":
        x = _require_surd(arg, name)
        key, sign = (x, 1) if _val_sign((x, F(0))) >= 0 else (-x, -1)
        if key not in _ATAN_TABLE:
            raise NotRepresentable("atan outside the exact table")
        return ExactValue(F(0)), sign * _ATAN_TABLE[key]

    if name == "sqrt":
        if c != 0:
            raise NotRepresentable("sqrt of a pi-multiple")
        if not surd.is_rational():
            raise NotRepresentable("nested radical")
        return exact_sqrt(surd.a), F(0)
    if name == "abs":
        return (arg if _val_sign(arg) >= 0 else (-surd, -c))
    if name == "exp":
        if surd.is_zero() and c == 0:
            return ExactValue(F(1)), F(0)
        raise NotRepresentable("exp of a nonzero value")
    if name in ("ln", "log10"):
        if c != 0 or not surd.is_rational():
            raise NotRepresentable(f"{name} outside the exact table")
        x = surd.a
        if x <= 0:
            raise DomainError(f"{name} of a non-positive value")
        if x == 1:
            return ExactValue(F(0)), F(0)
        if name == "log10":
            k = _log10_exact(x)
            if k is not None:
                return ExactValue(F(k)), F(0)
        raise NotRepresentable(f"{name}({x}) is irrational")
    raise NotRepresentable(f"unknown function {name}")


def _log10_exact(x: Fraction) -> int | None:
    if x.numerator == 1:
        k = _log10_exact(1 / x)
        return None if k is None else -k
    if x.denominator != 1:
        return None
    v, k = x.numerator, 0
    while v % 10 == 0:
        v //= 10
        k += 1
    return k if v == 1 else None


def eval_exact(e: Expr) -> ExactValue:
    """Exact value of a closed expression, or NotRepresentable.

    Raises DomainError for genuine domain violations (cot(0), 1/0) and
    NotRepresentable when the value exists but lies outside a + b*sqrt(n);
    a bare pi-multiple such as eval_exact(pi) is NotRepresentable too.
    """
    surd, c = _eval(e)
    if c != 0:
        raise NotRepresentable("value is a pi-multiple")
    return surd
