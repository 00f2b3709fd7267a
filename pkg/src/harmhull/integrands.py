"""Rational integrands f(s, t, zeta) for the Bateman contour integral.

Integrands are small expression trees built from the symbols :data:`S`,
:data:`T`, :data:`ZETA` and complex constants with ``+ - * /`` and integer
powers.  A tree evaluates vectorised over numpy arrays, and after the affine
substitution ``s = a + b*zeta``, ``t = c + d*zeta`` it reduces to a
numerator polynomial in zeta over a product of polynomial factors, which is
what the residue oracle and the pole-distance check need.

>>> f = S * T / ZETA
>>> f(2.0, 3.0, 1.0)
(6+0j)
"""
from __future__ import annotations

import ast
import re
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial


@dataclass(frozen=True)
class RationalInZeta:
    """``numerator(zeta) / prod(factors)(zeta)`` with polynomial factors."""

    numerator: Polynomial
    factors: tuple

    def denominator(self) -> Polynomial:
        out = Polynomial([1.0 + 0j])
        for F in self.factors:
            out = out * F
        return out


def _poly(c) -> Polynomial:
    return Polynomial(np.atleast_1d(np.asarray(c, dtype=complex)))


class Expr:
    """Node of an integrand expression tree."""

    def __call__(self, s, t, zeta):
        return self.evaluate(np.asarray(s, dtype=complex), np.asarray(t, dtype=complex),
                             np.asarray(zeta, dtype=complex))

    def evaluate(self, s, t, zeta):
        raise NotImplementedError

    def reduce(self, s_poly: Polynomial, t_poly: Polynomial) -> RationalInZeta:
        raise NotImplementedError

    def rational_in_zeta(self, alpha, beta, gamma, delta) -> RationalInZeta:
        """Substitute ``s = alpha + beta*zeta`` and ``t = gamma + delta*zeta``."""
        return self.reduce(_poly([alpha, beta]), _poly([gamma, delta]))

    @staticmethod
    def _wrap(other):
        if isinstance(other, Expr):
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return Const(complex(other))
        return NotImplemented

    def __add__(self, other):
        other = self._wrap(other)
        return other if other is NotImplemented else Add(self, other)

    def __radd__(self, other):
        other = self._wrap(other)
        return other if other is NotImplemented else Add(other, self)

    def __sub__(self, other):
        other = self._wrap(other)
        return other if other is NotImplemented else Add(self, Mul(Const(-1.0), other))

    def __rsub__(self, other):
        other = self._wrap(other)
        return other if other is NotImplemented else Add(other, Mul(Const(-1.0), self))

    def __mul__(self, other):
        other = self._wrap(other)
        return other if other is NotImplemented else Mul(self, other)

    def __rmul__(self, other):
        other = self._wrap(other)
        return other if other is NotImplemented else Mul(other, self)

    def __truediv__(self, other):
        other = self._wrap(other)
        return other if other is NotImplemented else Div(self, other)

    def __rtruediv__(self, other):
        other = self._wrap(other)
        return other if other is NotImplemented else Div(other, self)

    def __neg__(self):
        return Mul(Const(-1.0), self)

    def __pow__(self, k):
        if not isinstance(k, (int, np.integer)):
            raise TypeError("only integer powers keep the integrand rational")
        return Pow(self, int(k))


@dataclass(frozen=True, eq=False)
class Const(Expr):
    value: complex

    def evaluate(self, s, t, zeta):
        return np.full(np.broadcast(s, t, zeta).shape, self.value, dtype=complex)

    def reduce(self, s_poly, t_poly):
        return RationalInZeta(_poly(self.value), ())

    def __repr__(self):
        return repr(self.value)


@dataclass(frozen=True, eq=False)
class Var(Expr):
    name: str

    def evaluate(self, s, t, zeta):
        v = {"s": s, "t": t, "zeta": zeta}[self.name]
        return np.broadcast_to(v, np.broadcast(s, t, zeta).shape).astype(complex)

    def reduce(self, s_poly, t_poly):
        if self.name == "s":
            return RationalInZeta(s_poly, ())
        if self.name == "t":
            return RationalInZeta(t_poly, ())
        return RationalInZeta(_poly([0.0, 1.0]), ())

    def __repr__(self):
        return self.name


def _prod(factors) -> Polynomial:
    out = _poly(1.0)
    for F in factors:
        out = out * F
    return out


@dataclass(frozen=True, eq=False)
class Add(Expr):
    left: Expr
    right: Expr

    def evaluate(self, s, t, zeta):
        return self.left.evaluate(s, t, zeta) + self.right.evaluate(s, t, zeta)

    def reduce(self, s_poly, t_poly):
        a = self.left.reduce(s_poly, t_poly)
        b = self.right.reduce(s_poly, t_poly)
        if _same_factors(a.factors, b.factors):
            return RationalInZeta(a.numerator + b.numerator, a.factors)
        num = a.numerator * _prod(b.factors) + b.numerator * _prod(a.factors)
        return RationalInZeta(num, a.factors + b.factors)

    def __repr__(self):
        return f"({self.left!r} + {self.right!r})"


def _same_factors(fa, fb) -> bool:
    if len(fa) != len(fb):
        return False
    return all(F.coef.shape == G.coef.shape and np.array_equal(F.coef, G.coef) for F, G in zip(fa, fb))


@dataclass(frozen=True, eq=False)
class Mul(Expr):
    left: Expr
    right: Expr

    def evaluate(self, s, t, zeta):
        return self.left.evaluate(s, t, zeta) * self.right.evaluate(s, t, zeta)

    def reduce(self, s_poly, t_poly):
        a = self.left.reduce(s_poly, t_poly)
        b = self.right.reduce(s_poly, t_poly)
        return RationalInZeta(a.numerator * b.numerator, a.factors + b.factors)

    def __repr__(self):
        return f"{self.left!r}*{self.right!r}"


@dataclass(frozen=True, eq=False)
class Div(Expr):
    left: Expr
    right: Expr

    def evaluate(self, s, t, zeta):
        return self.left.evaluate(s, t, zeta) / self.right.evaluate(s, t, zeta)

    def reduce(self, s_poly, t_poly):
        a = self.left.reduce(s_poly, t_poly)
        b = self.right.reduce(s_poly, t_poly)
        return RationalInZeta(a.numerator * _prod(b.factors), a.factors + (b.numerator,))

    def __repr__(self):
        return f"{self.left!r}/({self.right!r})"


@dataclass(frozen=True, eq=False)
class Pow(Expr):
    base: Expr
    exponent: int

    def evaluate(self, s, t, zeta):
        return self.base.evaluate(s, t, zeta) ** self.exponent

    def reduce(self, s_poly, t_poly):
        b = self.base.reduce(s_poly, t_poly)
        k = self.exponent
        if k >= 0:
            return RationalInZeta(b.numerator ** k, b.factors * k)
        k = -k
        return RationalInZeta(_prod(b.factors) ** k, (b.numerator,) * k)

    def __repr__(self):
        return f"{self.base!r}**{self.exponent}"


S = Var("s")
T = Var("t")
ZETA = Var("zeta")


# -- parsing ---------------------------------------------------------------

_NAMES = {"s": S, "t": T, "zeta": ZETA}
_BINOPS = {ast.Add: "__add__", ast.Sub: "__sub__", ast.Mult: "__mul__", ast.Div: "__truediv__"}


def _build(node):
    if isinstance(node, ast.Expression):
        return _build(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
        return Const(complex(node.value))
    if isinstance(node, ast.Name):
        if node.id in _NAMES:
            return _NAMES[node.id]
        raise ValueError(f"unknown symbol {node.id!r}; use s, t, zeta")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _build(node.operand)
        return -inner if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            exp = node.right
            sign = 1
            if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                sign, exp = -1, exp.operand
            if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                raise ValueError("exponents must be integer literals")
            return Pow(_build(node.left), sign * exp.value)
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise ValueError(f"operator {type(node.op).__name__} not allowed")
        left = _build(node.left)
        right = _build(node.right)
        if not isinstance(left, Expr):
            left = Const(complex(left))
        return getattr(left, op)(right)
    raise ValueError(f"unsupported syntax: {ast.dump(node)}")


def parse_integrand(text: str) -> Expr:
    """Parse e.g. ``"s*t/zeta"`` or ``"1/((s-2)*(t+1j)*zeta)"``."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse integrand {text!r}: {exc.msg}") from None
    return _build(tree)


# -- built-in catalogue ------------------------------------------------------

_MONOMIAL = re.compile(r"^s(\d)t(\d)_over_zeta$")


def builtin(name: str, a: complex | None = None, b: complex | None = None) -> Expr:
    """Named built-in integrands.

    ``inv_zeta``, ``s_over_zeta``, ``t_over_zeta``, ``st_over_zeta``,
    ``s2_over_zeta``, ``s{k}t{l}_over_zeta`` (k + l <= 4),
    ``inv_zeta_minus_a`` (default a = 0.5) and ``inv_shifted_st_zeta``
    for 1/((s-a)(t-b)zeta) (defaults a = 2+1j, b = -1+2j).
    """
    simple = {
        "inv_zeta": 1 / ZETA,
        "s_over_zeta": S / ZETA,
        "t_over_zeta": T / ZETA,
        "st_over_zeta": S * T / ZETA,
        "s2_over_zeta": S ** 2 / ZETA,
    }
    if name in simple:
        return simple[name]
    m = _MONOMIAL.match(name)
    if m:
        k, l = int(m.group(1)), int(m.group(2))
        if k + l > 4:
            raise ValueError("monomial built-ins need k + l <= 4")
        return (S ** k) * (T ** l) / ZETA
    if name == "inv_zeta_minus_a":
        return 1 / (ZETA - (0.5 if a is None else a))
    if name == "inv_shifted_st_zeta":
        a = 2 + 1j if a is None else a
        b = -1 + 2j if b is None else b
        return 1 / ((S - a) * (T - b) * ZETA)
    raise ValueError(f"unknown built-in integrand {name!r}")


def catalogue() -> dict[str, Expr]:
    """Every built-in, with both an interior and an exterior pole for 1/(zeta - a)."""
    out = {n: builtin(n) for n in ("inv_zeta", "s_over_zeta", "t_over_zeta", "st_over_zeta",
                                   "s2_over_zeta")}
    for k in range(5):
        for l in range(5 - k):
            out[f"s{k}t{l}_over_zeta"] = builtin(f"s{k}t{l}_over_zeta")
    out["inv_zeta_minus_a"] = builtin("inv_zeta_minus_a", a=0.5)
    out["inv_zeta_minus_a[a=2]"] = builtin("inv_zeta_minus_a", a=2.0)
    out["inv_shifted_st_zeta"] = builtin("inv_shifted_st_zeta")
    return out


def integrand_from_string(text: str) -> Expr:
    """A built-in name or an expression in s, t, zeta."""
    try:
        return builtin(text)
    except ValueError:
        return parse_integrand(text)
