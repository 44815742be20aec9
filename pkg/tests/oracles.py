"""Reference implementations used only by the tests."""

from fractions import Fraction
from math import factorial

import numpy as np
import sympy


def nc_symbols(alg):
    return {g.label: sympy.Symbol(g.label, commutative=False) for g in alg.generators}


def to_sympy(poly, syms):
    expr = sympy.Integer(0)
    for labels, c in poly.label_terms().items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s in labels:
            term = term * syms[s]
        expr += term
    return expr


def _letters(f):
    if isinstance(f, sympy.Pow):
        return _letters(f.base) * int(f.exp)
    if isinstance(f, sympy.Mul):
        return [s for a in f.args for s in _letters(a)]
    return [str(f)]


def from_sympy(expr, alg):
    """Expanded non-commutative sympy expression -> label-word dict, truncated at alg.r."""
    grades = {g.label: g.grade for g in alg.generators}
    out = {}
    for term in sympy.Add.make_args(sympy.expand(expr)):
        if term == 0:
            continue
        c, nc = term.args_cnc()
        coef = sympy.Mul(*c)
        word = []
        for f in nc:
            word += _letters(f)
        if sum(grades[s] for s in word) >= alg.r:
            continue
        key = tuple(word)
        out[key] = out.get(key, 0) + Fraction(int(sympy.numer(coef)), int(sympy.denom(coef)))
    return {k: v for k, v in out.items() if v}


def sympy_exp(expr, order):
    return sum((expr**k / factorial(k) for k in range(order)), sympy.Integer(0))


def sympy_log1p(n_expr, order):
    return sum((sympy.Rational((-1) ** (k + 1), k) * n_expr**k for k in range(1, order)), sympy.Integer(0))


# truncated matrices, one entry at a time


def poly_mat_mul(a, b, p):
    """a, b: nested lists [row][col][level]."""
    n, r = len(a), len(a[0][0])
    out = [[[0] * r for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for s in range(r):
                    for t in range(r - s):
                        out[i][j][s + t] += a[i][k][s] * b[k][j][t]
            out[i][j] = [v % p for v in out[i][j]]
    return out


def to_nested(data):
    arr = np.asarray(data)
    return np.moveaxis(arr, 0, -1).tolist()


def det2_mod(m, p):
    return (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % p


def scalar_log_coords(coeffs, p):
    """For a unit c = c_0 (1 + n) of F_p[eps]/eps^r: [eps^j] log(1 + n), j = 1..r-1."""
    r = len(coeffs)
    c0inv = pow(int(coeffs[0]), -1, p)
    n = [0] + [int(c) * c0inv % p for c in coeffs[1:]]
    out = [0] * r
    power = [1] + [0] * (r - 1)
    for k in range(1, r):
        nxt = [0] * r
        for s in range(r):
            for t in range(r - s):
                nxt[s + t] += power[s] * n[t]
        power = [v % p for v in nxt]
        coef = (-1) ** (k + 1) * pow(k, -1, p)
        out = [(o + coef * v) % p for o, v in zip(out, power)]
    return out[1:]
