"""GL_n over F_p[eps]/(eps^r): arithmetic, exponential coordinates, subgroups.

Elements are integer arrays of shape ``(r, n, n)``: slot k holds the matrix
coefficient of eps^k.  Every ``b*`` function works on stacks of shape
``(..., r, n, n)`` so whole groups can be processed at once.  The
:class:`TruncatedMatrix` wrapper is the single-element face of the same code.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import isprime

DEFAULT_BUDGET = 2**22

SUBGROUP_TAGS = ("G_r", "B_r", "T_r", "U_r", "Hprime", "K")


class BudgetExceeded(RuntimeError):
    def __init__(self, what: str, order: int, budget: int):
        super().__init__("%s has %d elements, budget is %d" % (what, order, budget))
        self.order = order
        self.budget = budget


class NotInvertible(ValueError):
    pass


class NotInSubgroup(ValueError):
    pass


@dataclass(frozen=True)
class GroupContext:
    n: int
    p: int
    r: int
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.r < 2:
            raise ValueError("r must be >= 2")
        if not isprime(self.p):
            raise ValueError("p=%d is not prime" % self.p)
        if self.p < self.r:
            raise ValueError("need p >= r (p=%d, r=%d)" % (self.p, self.r))
        if self.budget < 1:
            raise ValueError("budget must be positive")

    @property
    def q(self) -> int:
        return self.p

    @property
    def r_prime(self) -> int:
        return self.r // 2

    @property
    def r_dprime(self) -> int:
        return -(-self.r // 2)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.r, self.n, self.n)


# modular helpers


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


def identity(ctx: GroupContext) -> np.ndarray:
    out = np.zeros(ctx.shape, dtype=np.int64)
    out[0] = np.eye(ctx.n, dtype=np.int64)
    return out


def embed(x: np.ndarray, r: int) -> np.ndarray:
    """Constant (level-0) matrices as truncated matrices."""
    out = np.zeros(x.shape[:-2] + (r,) + x.shape[-2:], dtype=np.int64)
    out[..., 0, :, :] = x
    return out


def bmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    r = a.shape[-3]
    shape = np.broadcast_shapes(a.shape, b.shape)
    out = np.zeros(shape, dtype=np.int64)
    for i in range(r):
        ai = a[..., i, :, :]
        for j in range(r - i):
            out[..., i + j, :, :] += ai @ b[..., j, :, :]
    return out % p


def inv_mod_p(x: np.ndarray, p: int) -> np.ndarray:
    """Batched matrix inverse over F_p by Gauss-Jordan elimination."""
    x = np.asarray(x, dtype=np.int64) % p
    n = x.shape[-1]
    batch = x.shape[:-2]
    a = x.reshape(-1, n, n).copy()
    m = a.shape[0]
    inv = inverse_table(p)
    aug = np.concatenate([a, np.broadcast_to(np.eye(n, dtype=np.int64), a.shape)], axis=2)
    rows = np.arange(m)
    for c in range(n):
        nz = aug[:, c:, c] != 0
        if not nz.any(axis=1).all():
            raise NotInvertible("singular matrix mod %d" % p)
        piv = c + nz.argmax(axis=1)
        swap = aug[rows, piv].copy()
        aug[rows, piv] = aug[:, c]
        aug[:, c] = swap
        aug[:, c] = aug[:, c] * inv[aug[:, c, c]][:, None] % p
        factor = aug[:, :, c].copy()
        factor[:, c] = 0
        aug = (aug - factor[:, :, None] * aug[:, c][:, None, :]) % p
    return aug[:, :, n:].reshape(batch + (n, n))


def det_nonzero(x: np.ndarray, p: int) -> np.ndarray:
    """Mask of invertible constant matrices (rank test by elimination)."""
    x = np.asarray(x, dtype=np.int64) % p
    n = x.shape[-1]
    batch = x.shape[:-2]
    a = x.reshape(-1, n, n).copy()
    m = a.shape[0]
    ok = np.ones(m, dtype=bool)
    inv = inverse_table(p)
    rows = np.arange(m)
    for c in range(n):
        nz = a[:, c:, c] != 0
        has = nz.any(axis=1)
        ok &= has
        piv = c + nz.argmax(axis=1)
        swap = a[rows, piv].copy()
        a[rows, piv] = a[:, c]
        a[:, c] = swap
        pivval = np.where(has, a[:, c, c], 1)
        a[:, c] = a[:, c] * inv[pivval % p][:, None] % p
        factor = a[:, :, c].copy()
        factor[:, c] = 0
        factor[~has] = 0
        a = (a - factor[:, :, None] * a[:, c][:, None, :]) % p
    return ok.reshape(batch)


def binv(g: np.ndarray, p: int) -> np.ndarray:
    r = g.shape[-3]
    a0i = inv_mod_p(g[..., 0, :, :], p)
    m = bmul(embed(a0i, r), g, p)
    n = m.copy()
    n[..., 0, :, :] = 0
    neg = (-n) % p
    eye = embed(np.broadcast_to(np.eye(g.shape[-1], dtype=np.int64), g.shape[:-3] + g.shape[-2:]), r)
    total = eye.copy()
    power = eye
    for _ in range(1, r):
        power = bmul(power, neg, p)
        total = (total + power) % p
    return bmul(total, embed(a0i, r), p)


@lru_cache(maxsize=None)
def _inv_factorials(p: int, upto: int) -> tuple[int, ...]:
    return tuple(pow(math.factorial(k), -1, p) for k in range(upto + 1))


def bexp(i: int, x: np.ndarray, ctx: GroupContext) -> np.ndarray:
    """exp(eps^i X) = sum_k eps^{ik} X^k / k! for constant matrices X."""
    r, p = ctx.r, ctx.p
    if not 1 <= i <= r - 1:
        raise ValueError("level %d outside 1..%d" % (i, r - 1))
    x = np.asarray(x, dtype=np.int64) % p
    out = np.zeros(x.shape[:-2] + ctx.shape, dtype=np.int64)
    eye = np.eye(ctx.n, dtype=np.int64)
    out[..., 0, :, :] = eye
    facts = _inv_factorials(p, r - 1)
    power = np.broadcast_to(eye, x.shape).copy()
    k = 1
    while i * k <= r - 1:
        power = power @ x % p
        out[..., i * k, :, :] = power * facts[k] % p
        k += 1
    return out


def bfactor(g: np.ndarray, ctx: GroupContext, upto: int | None = None):
    """Exponential coordinates g = x e^{eps X_1} ... e^{eps^{r-1} X_{r-1}}.

    Returns ``(x, X)`` with ``X[..., j-1, :, :] = X_j``; only X_1..X_upto
    are filled when ``upto`` is given.
    """
    r, p = ctx.r, ctx.p
    upto = r - 1 if upto is None else upto
    x = g[..., 0, :, :] % p
    w = bmul(embed(inv_mod_p(x, p), r), g, p)
    xs = np.zeros(g.shape[:-3] + (r - 1, ctx.n, ctx.n), dtype=np.int64)
    for j in range(1, upto + 1):
        xj = w[..., j, :, :].copy()
        xs[..., j - 1, :, :] = xj
        if j < upto and xj.any():
            w = bmul(bexp(j, -xj, ctx), w, p)
    return x, xs


def bbuild(x: np.ndarray, xs: np.ndarray, ctx: GroupContext) -> np.ndarray:
    out = embed(np.asarray(x, dtype=np.int64) % ctx.p, ctx.r)
    for j in range(1, ctx.r):
        out = bmul(out, bexp(j, xs[..., j - 1, :, :], ctx), ctx.p)
    return out


def is_diag(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    off = ~np.eye(n, dtype=bool)
    return ~(x[..., off] != 0).any(axis=-1)


def is_upper(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    low = np.tril(np.ones((n, n), dtype=bool), -1)
    return ~(x[..., low] != 0).any(axis=-1)


def is_strict_upper(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    low = np.tril(np.ones((n, n), dtype=bool), 0)
    return ~(x[..., low] != 0).any(axis=-1)


def zero_diag(x: np.ndarray) -> np.ndarray:
    return ~(np.diagonal(x, axis1=-2, axis2=-1) != 0).any(axis=-1)


def is_zero(x: np.ndarray) -> np.ndarray:
    return ~(x != 0).reshape(x.shape[:-2] + (-1,)).any(axis=-1)


def is_identity(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    return is_zero(x - np.eye(n, dtype=np.int64))


def diag_part(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    return x * np.eye(n, dtype=np.int64)


# subgroup specs


@dataclass(frozen=True)
class SubgroupSpec:
    tag: str
    index: int | None = None

    @classmethod
    def parse(cls, text: str) -> "SubgroupSpec":
        m = re.fullmatch(r"([GBTU]_r)(?:\^(\d+))?|(Hprime|K)", text.strip())
        if not m:
            raise ValueError("unknown subgroup %r" % text)
        if m.group(3):
            return cls(m.group(3))
        return cls(m.group(1), int(m.group(2)) if m.group(2) else None)

    def __str__(self):
        if self.index is None:
            return self.tag
        return "%s^%d" % (self.tag, self.index)

    def validate(self, ctx: GroupContext):
        if self.tag not in SUBGROUP_TAGS:
            raise ValueError("unknown tag %r" % self.tag)
        if self.index is not None:
            if self.tag in ("Hprime", "K"):
                raise ValueError("%s takes no index" % self.tag)
            if not 1 <= self.index <= ctx.r - 1:
                raise ValueError("congruence index %d outside 1..%d" % (self.index, ctx.r - 1))


def _as_spec(spec) -> SubgroupSpec:
    return SubgroupSpec.parse(spec) if isinstance(spec, str) else spec


def member_mask(g: np.ndarray, spec, ctx: GroupContext) -> np.ndarray:
    """Coordinate-wise membership test on a stack of invertible elements."""
    spec = _as_spec(spec)
    spec.validate(ctx)
    r, n = ctx.r, ctx.n
    tag, i = spec.tag, spec.index
    levels = [g[..., k, :, :] for k in range(r)]
    ok = det_nonzero(levels[0], ctx.p)
    if tag == "B_r":
        for lev in levels:
            ok &= is_upper(lev)
    elif tag == "T_r":
        for lev in levels:
            ok &= is_diag(lev)
    elif tag == "U_r":
        ok &= is_strict_upper(levels[0] - np.eye(n, dtype=np.int64))
        for lev in levels[1:]:
            ok &= is_strict_upper(lev)
    elif tag in ("Hprime", "K"):
        x, xs = bfactor(g, ctx)
        rp, rpp = ctx.r_prime, ctx.r_dprime
        if tag == "Hprime":
            ok &= is_diag(x)
            for j in range(1, rp):
                ok &= is_diag(xs[..., j - 1, :, :])
            if r % 2:
                ok &= is_upper(xs[..., rp - 1, :, :])
        else:
            ok &= is_identity(x)
            for j in range(1, rp):
                ok &= is_zero(xs[..., j - 1, :, :])
            if r % 2:
                ok &= is_strict_upper(xs[..., rp - 1, :, :])
            for j in range(rpp, r):
                ok &= zero_diag(xs[..., j - 1, :, :])
    if i is not None:
        x, xs = bfactor(g, ctx, upto=i - 1)
        ok &= is_identity(x)
        for j in range(1, i):
            ok &= is_zero(xs[..., j - 1, :, :])
    return ok


def subgroup_order(spec, ctx: GroupContext) -> int:
    spec = _as_spec(spec)
    spec.validate(ctx)
    n, q, r = ctx.n, ctx.p, ctx.r
    dim_b = n * (n + 1) // 2
    dim_u = n * (n - 1) // 2
    i = spec.index
    if spec.tag == "K":
        return q ** ((n * n - n) * (r - ctx.r_dprime) + (dim_u if r % 2 else 0))
    if spec.tag == "Hprime":
        return subgroup_order("T_r", ctx) * subgroup_order("K", ctx)
    if i is not None:
        dim = {"G_r": n * n, "B_r": dim_b, "T_r": n, "U_r": dim_u}[spec.tag]
        return q ** (dim * (r - i))
    if spec.tag == "G_r":
        gl = math.prod(q**n - q**k for k in range(n))
        return gl * q ** (n * n * (r - 1))
    if spec.tag == "B_r":
        return (q - 1) ** n * q ** dim_u * q ** (dim_b * (r - 1))
    if spec.tag == "T_r":
        return (q - 1) ** n * q ** (n * (r - 1))
    if spec.tag == "U_r":
        return q ** (r * dim_u)
    raise ValueError(spec)


# enumeration


def element_keys(g: np.ndarray, p: int) -> np.ndarray:
    """Integer keys whose order is the lexicographic order of serialized coefficients."""
    r, n = g.shape[-3], g.shape[-1]
    flat = np.moveaxis(g, -3, -1).reshape(g.shape[:-3] + (n * n * r,))
    width = n * n * r
    if width * math.log2(p) < 62:
        weights = p ** np.arange(width - 1, -1, -1, dtype=np.int64)
        return flat @ weights
    out = np.empty(flat.shape[:-1], dtype=object)
    for idx in np.ndindex(flat.shape[:-1]):
        v = 0
        for d in flat[idx]:
            v = v * p + int(d)
        out[idx] = v
    return out


def _pattern(spec: SubgroupSpec, ctx: GroupContext):
    """Allowed values per (row, col, level) for entry-described subgroups."""
    n, r, p = ctx.n, ctx.r, ctx.p
    full = list(range(p))
    units = list(range(1, p))
    allowed = {}
    i = spec.index or 0
    for a in range(n):
        for b in range(n):
            for k in range(r):
                if spec.tag == "Hprime":
                    if a == b:
                        vals = units if k == 0 else full
                    else:
                        vals = full if k >= (ctx.r_dprime if a > b else ctx.r_prime) else [0]
                elif k < i:
                    vals = [1 if (a == b and k == 0) else 0]
                elif spec.tag == "G_r":
                    vals = full
                elif a > b:
                    vals = [0]
                elif spec.tag == "T_r" and a != b:
                    vals = [0]
                elif spec.tag == "U_r" and a == b:
                    vals = [1 if k == 0 else 0]
                elif a == b and k == 0:
                    vals = units
                else:
                    vals = full
                allowed[a, b, k] = vals
    return [allowed[a, b, k] for a in range(n) for b in range(n) for k in range(r)]


def _from_pattern(pattern, ctx: GroupContext) -> np.ndarray:
    sizes = [len(v) for v in pattern]
    total = math.prod(sizes)
    idx = np.arange(total, dtype=np.int64)
    flat = np.zeros((total, len(pattern)), dtype=np.int64)
    for pos in range(len(pattern) - 1, -1, -1):
        vals = np.asarray(pattern[pos], dtype=np.int64)
        flat[:, pos] = vals[idx % sizes[pos]]
        idx //= sizes[pos]
    n, r = ctx.n, ctx.r
    return np.moveaxis(flat.reshape(total, n, n, r), -1, 1)


def _enumerate_k(ctx: GroupContext) -> np.ndarray:
    n, r, p = ctx.n, ctx.r, ctx.p
    rp, rpp = ctx.r_prime, ctx.r_dprime
    # free coordinate slots (level, row, col)
    slots = []
    for j in range(1, r):
        for a in range(n):
            for b in range(n):
                if j < rp:
                    continue
                if r % 2 and j == rp:
                    if a < b:
                        slots.append((j, a, b))
                elif j >= rpp and a != b:
                    slots.append((j, a, b))
    total = p ** len(slots)
    idx = np.arange(total, dtype=np.int64)
    xs = np.zeros((total, r - 1, n, n), dtype=np.int64)
    for pos in range(len(slots) - 1, -1, -1):
        j, a, b = slots[pos]
        xs[:, j - 1, a, b] = idx % p
        idx //= p
    x = np.broadcast_to(np.eye(n, dtype=np.int64), (total, n, n))
    return bbuild(x, xs, ctx)


def sort_elements(g: np.ndarray, p: int) -> np.ndarray:
    return g[np.argsort(element_keys(g, p), kind="stable")]


def enumerate_subgroup(spec, ctx: GroupContext) -> np.ndarray:
    """All elements, each once, in lexicographic order of serialized coefficients."""
    spec = _as_spec(spec)
    spec.validate(ctx)
    order = subgroup_order(spec, ctx)
    if order > ctx.budget:
        raise BudgetExceeded(str(spec), order, ctx.budget)
    return _enumerate_cached(spec, ctx)


@lru_cache(maxsize=32)
def _enumerate_cached(spec: SubgroupSpec, ctx: GroupContext) -> np.ndarray:
    if spec.tag == "K":
        out = sort_elements(_enumerate_k(ctx), ctx.p)
    else:
        pattern = _pattern(spec, ctx)
        if math.prod(len(v) for v in pattern) > 4 * ctx.budget:
            raise BudgetExceeded("candidates for %s" % spec, math.prod(len(v) for v in pattern), 4 * ctx.budget)
        out = _from_pattern(pattern, ctx)
        if spec.tag == "G_r" and spec.index is None:
            out = out[det_nonzero(out[:, 0], ctx.p)]
    out.setflags(write=False)
    return out


@lru_cache(maxsize=32)
def _coset_cached(spec: SubgroupSpec, ctx: GroupContext) -> np.ndarray:
    group = enumerate_subgroup("G_r", ctx)
    sub = enumerate_subgroup(spec, ctx)
    keys = element_keys(group, ctx.p)
    covered = np.zeros(len(group), dtype=bool)
    reps = []
    start = 0
    while True:
        left = np.flatnonzero(~covered[start:])
        if not len(left):
            break
        k = start + left[0]
        start = k
        rep = group[k]
        reps.append(rep)
        coset_keys = element_keys(bmul(rep, sub, ctx.p), ctx.p)
        covered[np.searchsorted(keys, coset_keys)] = True
    out = np.array(reps)
    out.setflags(write=False)
    return out


def coset_representatives(spec, ctx: GroupContext) -> np.ndarray:
    """One representative per left coset gH, first-seen in enumeration order."""
    spec = _as_spec(spec)
    spec.validate(ctx)
    if subgroup_order("G_r", ctx) > ctx.budget:
        raise BudgetExceeded("G_r", subgroup_order("G_r", ctx), ctx.budget)
    return _coset_cached(spec, ctx)


def lie_decompose(x: np.ndarray):
    """X = (strictly lower) + (diagonal) + (strictly upper)."""
    x = np.asarray(x, dtype=np.int64)
    return np.tril(x, -1), diag_part(x), np.triu(x, 1)


# retractions


def bsigma(b: np.ndarray) -> np.ndarray:
    return diag_part(b)


def bsigma_prime_coords(h: np.ndarray, ctx: GroupContext):
    """Torus coordinates (x, D_1..D_{r-1}) of sigma'(h) and the leftover K-part."""
    r, p = ctx.r, ctx.p
    x = h[..., 0, :, :] % p
    u = bmul(embed(inv_mod_p(x, p), r), h, p)
    ds = np.zeros(h.shape[:-3] + (r - 1, ctx.n, ctx.n), dtype=np.int64)
    for j in range(1, r):
        _, xs = bfactor(u, ctx, upto=j)
        dj = diag_part(xs[..., j - 1, :, :])
        ds[..., j - 1, :, :] = dj
        if dj.any():
            u = bmul(bexp(j, -dj, ctx), u, p)
    return x, ds, u


# single elements


class TruncatedScalar:
    """c_0 + c_1 eps + ... + c_{r-1} eps^{r-1} over F_p."""

    __slots__ = ("p", "coeffs")

    def __init__(self, coeffs, p: int):
        self.p = p
        self.coeffs = tuple(int(c) % p for c in coeffs)

    @property
    def r(self):
        return len(self.coeffs)

    def _check(self, other):
        if not isinstance(other, TruncatedScalar):
            return TruncatedScalar([other] + [0] * (self.r - 1), self.p)
        if (other.p, other.r) != (self.p, self.r):
            raise ValueError("incompatible truncated scalars")
        return other

    def __add__(self, other):
        other = self._check(other)
        return TruncatedScalar([a + b for a, b in zip(self.coeffs, other.coeffs)], self.p)

    def __sub__(self, other):
        other = self._check(other)
        return TruncatedScalar([a - b for a, b in zip(self.coeffs, other.coeffs)], self.p)

    def __neg__(self):
        return TruncatedScalar([-a for a in self.coeffs], self.p)

    def __mul__(self, other):
        other = self._check(other)
        r = self.r
        out = [0] * r
        for i, a in enumerate(self.coeffs):
            for j in range(r - i):
                out[i + j] += a * other.coeffs[j]
        return TruncatedScalar(out, self.p)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return self.coeffs[0] != 0

    def inverse(self) -> "TruncatedScalar":
        if not self.is_unit():
            raise NotInvertible("constant term is zero")
        a0 = pow(self.coeffs[0], -1, self.p)
        nil = TruncatedScalar([0] + [c * a0 for c in self.coeffs[1:]], self.p)
        total = TruncatedScalar([1] + [0] * (self.r - 1), self.p)
        power = total
        for _ in range(1, self.r):
            power = power * (-nil)
            total = total + power
        return total * a0

    def __eq__(self, other):
        return isinstance(other, TruncatedScalar) and (self.p, self.coeffs) == (other.p, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        return "TruncatedScalar(%s mod %d)" % (list(self.coeffs), self.p)


@dataclass(frozen=True)
class Coordinates:
    x: np.ndarray
    xs: tuple[np.ndarray, ...]


class TruncatedMatrix:
    """Immutable n x n matrix over F_p[eps]/(eps^r)."""

    __slots__ = ("ctx", "data")

    def __init__(self, ctx: GroupContext, data):
        data = np.array(data, dtype=np.int64) % ctx.p
        if data.shape != ctx.shape:
            raise ValueError("expected shape %s, got %s" % (ctx.shape, data.shape))
        data.setflags(write=False)
        self.ctx = ctx
        self.data = data

    @classmethod
    def identity(cls, ctx):
        return cls(ctx, identity(ctx))

    @classmethod
    def from_list(cls, ctx: GroupContext, rows):
        """Row-major list of coefficient vectors ``[[c_0..c_{r-1}], ...]``."""
        arr = np.asarray(rows, dtype=np.int64).reshape(ctx.n, ctx.n, ctx.r)
        return cls(ctx, np.moveaxis(arr, -1, 0))

    def to_list(self) -> list[list[int]]:
        return np.moveaxis(self.data, 0, -1).reshape(-1, self.ctx.r).tolist()

    def entry(self, a: int, b: int) -> TruncatedScalar:
        return TruncatedScalar(self.data[:, a, b], self.ctx.p)

    def key(self) -> int:
        return int(element_keys(self.data, self.ctx.p))

    def __matmul__(self, other: "TruncatedMatrix") -> "TruncatedMatrix":
        return TruncatedMatrix(self.ctx, bmul(self.data, other.data, self.ctx.p))

    __mul__ = __matmul__

    def inverse(self) -> "TruncatedMatrix":
        return TruncatedMatrix(self.ctx, binv(self.data, self.ctx.p))

    def is_invertible(self) -> bool:
        return bool(det_nonzero(self.data[0], self.ctx.p))

    def __eq__(self, other):
        return isinstance(other, TruncatedMatrix) and self.ctx == other.ctx and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.ctx, self.data.tobytes()))

    def __repr__(self):
        return "TruncatedMatrix(%s)" % self.to_list()


def mat_mul(a: TruncatedMatrix, b: TruncatedMatrix) -> TruncatedMatrix:
    return a @ b


def mat_inv(a: TruncatedMatrix) -> TruncatedMatrix:
    if not a.is_invertible():
        raise NotInvertible("reduction mod eps is singular")
    return a.inverse()


def exp_matrix(ctx: GroupContext, i: int, x) -> TruncatedMatrix:
    return TruncatedMatrix(ctx, bexp(i, np.asarray(x), ctx))


def factor_coordinates(g: TruncatedMatrix) -> Coordinates:
    if not g.is_invertible():
        raise NotInvertible("reduction mod eps is singular")
    x, xs = bfactor(g.data, g.ctx)
    return Coordinates(x, tuple(xs))


def build(ctx: GroupContext, coords: Coordinates) -> TruncatedMatrix:
    xs = np.array(coords.xs, dtype=np.int64).reshape(ctx.r - 1, ctx.n, ctx.n)
    return TruncatedMatrix(ctx, bbuild(coords.x, xs, ctx))


def membership(g: TruncatedMatrix, spec) -> bool:
    return bool(member_mask(g.data, spec, g.ctx))


def sigma(b: TruncatedMatrix) -> TruncatedMatrix:
    if not membership(b, "B_r"):
        raise NotInSubgroup("element is not in B_r")
    return TruncatedMatrix(b.ctx, bsigma(b.data))


def _first_violation(h: TruncatedMatrix) -> str:
    ctx = h.ctx
    x, xs = bfactor(h.data, ctx)
    if not is_diag(x):
        return "x = %s is not diagonal" % x.tolist()
    for j in range(1, ctx.r_prime):
        if not is_diag(xs[j - 1]):
            return "X_%d = %s is not diagonal" % (j, xs[j - 1].tolist())
    return "X_%d = %s is not upper triangular" % (ctx.r_prime, xs[ctx.r_prime - 1].tolist())


def sigma_prime(h: TruncatedMatrix) -> TruncatedMatrix:
    """The unique t in T_r with t^{-1} h in K."""
    ctx = h.ctx
    if not membership(h, "Hprime"):
        raise NotInSubgroup("not in Hprime: " + _first_violation(h))
    x, ds, rest = bsigma_prime_coords(h.data, ctx)
    if not member_mask(rest, "K", ctx):
        raise AssertionError("peeling left a remainder outside K")
    return TruncatedMatrix(ctx, bbuild(x, ds, ctx))


def enumerate_elements(spec, ctx: GroupContext) -> list[TruncatedMatrix]:
    return [TruncatedMatrix(ctx, g) for g in enumerate_subgroup(spec, ctx)]
