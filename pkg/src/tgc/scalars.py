"""Exact scalars: rationals and elements of cyclotomic fields.

Rationals are :class:`fractions.Fraction`.  A :class:`Cyclotomic` is an
element of Q(zeta_m) stored in the power basis 1, zeta, ..., zeta^(phi(m)-1)
after reduction modulo the m-th cyclotomic polynomial, so two equal field
elements always carry identical coefficient vectors.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from sympy import divisors

Rational = Fraction


class OrderMismatch(ValueError):
    """Raised when combining cyclotomics of different orders."""


def _poly_divmod_exact(num: list[int], den: list[int]) -> list[int]:
    # ascending coefficients, den monic
    num = list(num)
    dn = len(den) - 1
    if len(num) - 1 < dn:
        raise ArithmeticError("degree too small")
    quot = [0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        if c:
            quot[k - dn] = c
            for t in range(dn + 1):
                num[k - dn + t] -= c * den[t]
    if any(num[:dn]):
        raise ArithmeticError("inexact division")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Phi_m as ascending integer coefficients.

    >>> cyclotomic_polynomial(6)
    (1, -1, 1)
    """
    if m < 1:
        raise ValueError("m must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m):
        if d < m:
            poly = _poly_divmod_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


@lru_cache(maxsize=None)
def power_basis_table(m: int) -> np.ndarray:
    """Row k holds the power-basis coordinates of zeta_m^k, k = 0..m-1."""
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    table = np.zeros((m, deg), dtype=np.int64)
    cur = [0] * deg
    cur[0] = 1
    for k in range(m):
        table[k] = cur
        # multiply by x, then reduce x^deg = -(phi_0 + ... + phi_{deg-1} x^{deg-1})
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * phi[t] for t, c in enumerate(cur)]
    table.setflags(write=False)
    return table


def _reduce(m: int, coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    deg = euler_phi(m)
    table = power_basis_table(m)
    out = [Fraction(0)] * deg
    for k, c in enumerate(coeffs):
        if c:
            row = table[k % m]
            for t in range(deg):
                if row[t]:
                    out[t] += c * int(row[t])
    return tuple(out)


class Cyclotomic:
    """Immutable element of Q(zeta_m) in canonical power-basis form."""

    __slots__ = ("_m", "_coeffs", "_hash")

    def __init__(self, m: int, coeffs: Iterable = ()):
        if m < 1:
            raise ValueError("order must be positive")
        coeffs = [Fraction(c) for c in coeffs]
        self._m = m
        self._coeffs = _reduce(m, coeffs)
        self._hash = None

    @classmethod
    def _raw(cls, m: int, coeffs: tuple[Fraction, ...]) -> "Cyclotomic":
        obj = cls.__new__(cls)
        obj._m = m
        obj._coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def from_exponent_counts(cls, m: int, counts: Sequence[int]) -> "Cyclotomic":
        """sum_k counts[k] * zeta_m^k for integer counts of length m."""
        vec = np.asarray(counts, dtype=np.int64) @ power_basis_table(m)
        return cls._raw(m, tuple(Fraction(int(v)) for v in vec))

    @classmethod
    def from_power_basis(cls, m: int, coeffs: Sequence) -> "Cyclotomic":
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != euler_phi(m):
            raise ValueError("expected %d coefficients" % euler_phi(m))
        return cls._raw(m, coeffs)

    @property
    def m(self) -> int:
        return self._m

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    def _check(self, other) -> "Cyclotomic":
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self._m, [other])
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if other._m != self._m:
            raise OrderMismatch("orders %d and %d differ" % (self._m, other._m))
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Cyclotomic._raw(self._m, tuple(a + b for a, b in zip(self._coeffs, other._coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self._m, tuple(-a for a in self._coeffs))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self._coeffs, other._coeffs
        prod = [Fraction(0)] * (len(a) + len(b) - 1)
        for s, ca in enumerate(a):
            if ca:
                for t, cb in enumerate(b):
                    if cb:
                        prod[s + t] += ca * cb
        return Cyclotomic(self._m, prod)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic(self._m, [other])
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self._m == other._m and self._coeffs == other._coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._m, self._coeffs))
        return self._hash

    def is_zero(self) -> bool:
        return not any(self._coeffs)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._coeffs)

    def raise_order(self, new_m: int) -> "Cyclotomic":
        """Re-express in Q(zeta_new_m); requires m | new_m."""
        if new_m % self._m:
            raise OrderMismatch("%d does not divide %d" % (self._m, new_m))
        step = new_m // self._m
        coeffs = [Fraction(0)] * (step * (len(self._coeffs) - 1) + 1)
        for k, c in enumerate(self._coeffs):
            coeffs[k * step] = c
        return Cyclotomic(new_m, coeffs)

    def approx_complex(self) -> tuple[float, float]:
        z = cmath.exp(2j * math.pi / self._m)
        total = sum(float(c) * z**k for k, c in enumerate(self._coeffs))
        total = complex(total)
        return (total.real, total.imag)

    def to_json(self) -> dict:
        return {"m": self._m, "coeffs": ["%d/%d" % (c.numerator, c.denominator) for c in self._coeffs]}

    @classmethod
    def from_json(cls, doc: dict) -> "Cyclotomic":
        return cls.from_power_basis(doc["m"], [Fraction(s) for s in doc["coeffs"]])

    def __repr__(self):
        terms = []
        for k, c in enumerate(self._coeffs):
            if c:
                terms.append("%s*z^%d" % (c, k) if k else str(c))
        return "Cyclotomic(%d: %s)" % (self._m, " + ".join(terms) or "0")


def root_of_unity(m: int, k: int) -> Cyclotomic:
    """zeta_m^(k mod m)."""
    if m < 1:
        raise ValueError("m must be positive")
    row = power_basis_table(m)[k % m]
    return Cyclotomic._raw(m, tuple(Fraction(int(v)) for v in row))


def cyclo_arith(a: Cyclotomic, b: Cyclotomic, op: str) -> Cyclotomic:
    if a.m != b.m:
        raise OrderMismatch("orders %d and %d differ" % (a.m, b.m))
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError("unknown op %r" % op)


def approx_complex(a: Cyclotomic) -> tuple[float, float]:
    return a.approx_complex()


def fraction_mod_p(c: Fraction, p: int) -> int:
    """Image of a p-integral rational in F_p."""
    if c.denominator % p == 0:
        raise ZeroDivisionError("denominator %d not invertible mod %d" % (c.denominator, p))
    return c.numerator * pow(c.denominator, -1, p) % p
