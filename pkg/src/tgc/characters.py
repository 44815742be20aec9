"""Generic characters of T_r(F_q), their induced characters, and fiber sums.

A character is fixed by exponents m_1..m_n of the multiplicative part and
diagonal matrices A_1..A_{r-1} for the additive part.  On a torus element
with coordinates ``(t_0, D_1, ..., D_{r-1})`` it takes the value

    prod_i zeta_{q-1}^{m_i log(t_0[i, i])} * zeta_p^{sum_j tr(A_j D_j)}

where log is the discrete log to the least primitive root.  All values live
in Q(zeta_m) with m = p(q-1), so zeta_{q-1} = zeta_m^p, zeta_p = zeta_m^{q-1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import primitive_root

from .bch_catalog import compute_u
from .free_algebra import NCPoly
from .reports import make_report, timed
from .scalars import Cyclotomic, fraction_mod_p, power_basis_table, root_of_unity
from .truncated_groups import (
    BudgetExceeded,
    GroupContext,
    NotInSubgroup,
    TruncatedMatrix,
    bbuild,
    bexp,
    bfactor,
    binv,
    bmul,
    bsigma_prime_coords,
    coset_representatives,
    det_nonzero,
    element_keys,
    embed,
    enumerate_subgroup,
    identity,
    inv_mod_p,
    is_diag,
    is_upper,
    member_mask,
    subgroup_order,
)

INDUCING = ("B_r", "Hprime")


class NonGeneric(ValueError):
    """A_{r-1} has a repeated diagonal entry."""


@lru_cache(maxsize=None)
def discrete_log_table(p: int) -> tuple[int, np.ndarray]:
    """(omega, dlog) with dlog[omega^k mod p] = k; dlog[0] is unused."""
    omega = int(primitive_root(p)) if p > 2 else 1
    dlog = np.zeros(p, dtype=np.int64)
    v = 1
    for k in range(p - 1):
        dlog[v] = k
        v = v * omega % p
    dlog.setflags(write=False)
    return omega, dlog


@dataclass(frozen=True)
class CharacterSpec:
    context: GroupContext
    chi: tuple[int, ...]
    A: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        ctx = self.context
        n, p = ctx.n, ctx.p
        if len(self.chi) != n:
            raise ValueError("need %d chi exponents, got %d" % (n, len(self.chi)))
        if len(self.A) != ctx.r - 1:
            raise ValueError("need A_1..A_%d, got %d matrices" % (ctx.r - 1, len(self.A)))
        for j, a in enumerate(self.A, 1):
            if len(a) != n:
                raise ValueError("A_%d needs %d diagonal entries" % (j, n))
        object.__setattr__(self, "chi", tuple(int(c) % (ctx.q - 1) for c in self.chi))
        object.__setattr__(self, "A", tuple(tuple(int(v) % p for v in a) for a in self.A))

    @classmethod
    def build(cls, ctx: GroupContext, chi=None, A=None) -> "CharacterSpec":
        chi = tuple(chi) if chi is not None else (0,) * ctx.n
        A = tuple(tuple(a) for a in A) if A is not None else ((0,) * ctx.n,) * (ctx.r - 1)
        return cls(ctx, chi, A)

    @property
    def omega(self) -> int:
        return discrete_log_table(self.context.p)[0]

    @property
    def m(self) -> int:
        return self.context.p * (self.context.q - 1)

    @property
    def A_matrices(self) -> np.ndarray:
        return np.array([np.diag(a) for a in self.A], dtype=np.int64)

    def is_generic(self) -> bool:
        last = self.A[-1]
        return len(set(last)) == len(last)

    def to_json(self) -> dict:
        c = self.context
        return {"n": c.n, "q": c.q, "r": c.r, "chi": list(self.chi), "A": [list(a) for a in self.A]}


def is_generic(spec: CharacterSpec) -> bool:
    return spec.is_generic()


def _exponent(spec: CharacterSpec, diag0: np.ndarray, ddiag: np.ndarray) -> np.ndarray:
    """Exponent k of zeta_m for torus coordinates given by their diagonals.

    diag0 has shape (..., n), ddiag (..., r-1, n).
    """
    p, q = spec.context.p, spec.context.q
    _, dlog = discrete_log_table(p)
    chi = np.asarray(spec.chi, dtype=np.int64)
    mult = (dlog[diag0] * chi).sum(axis=-1) % (q - 1)
    add = (ddiag * np.asarray(spec.A, dtype=np.int64)).sum(axis=(-1, -2)) % p
    return (p * mult + (q - 1) * add) % spec.m


def _diag(x: np.ndarray) -> np.ndarray:
    return np.diagonal(x, axis1=-2, axis2=-1)


def theta_eval(spec: CharacterSpec, t: TruncatedMatrix) -> Cyclotomic:
    ctx = spec.context
    if not member_mask(t.data, "T_r", ctx):
        raise NotInSubgroup("element is not in T_r")
    x, xs = bfactor(t.data, ctx)
    return root_of_unity(spec.m, int(_exponent(spec, _diag(x), _diag(xs))))


def _torus_coords(h: np.ndarray, which: str, ctx: GroupContext):
    """Diagonal coordinates of the retraction of each element of h."""
    if which == "B_r":
        x, xs = bfactor(h * np.eye(ctx.n, dtype=np.int64), ctx)
        return _diag(x), _diag(xs)
    if which == "Hprime":
        x, ds, _ = bsigma_prime_coords(h, ctx)
        return _diag(x), _diag(ds)
    raise ValueError("cannot retract from %r" % which)


def theta_exponents(spec: CharacterSpec, h: np.ndarray, which: str) -> np.ndarray:
    """Batched theta: exponents e with theta(h_k) = zeta_m^{e_k}, for a stack h of elements of ``which``."""
    ctx = spec.context
    if which not in ("T_r",) + INDUCING:
        raise ValueError("which must be T_r, B_r or Hprime")
    if not member_mask(h, which, ctx).all():
        raise NotInSubgroup("some elements are not in %s" % which)
    d0, dd = _torus_coords(h, "B_r" if which == "T_r" else which, ctx)
    return _exponent(spec, d0, dd)


def theta_on_subgroup(spec: CharacterSpec, h: TruncatedMatrix, which: str) -> Cyclotomic:
    ctx = spec.context
    if which not in INDUCING:
        raise ValueError("which must be one of %s" % (INDUCING,))
    if not member_mask(h.data, which, ctx):
        raise NotInSubgroup("element is not in %s" % which)
    d0, dd = _torus_coords(h.data, which, ctx)
    return root_of_unity(spec.m, int(_exponent(spec, d0, dd)))


# class functions


class ClassFunction:
    """Cyclotomic-valued function on the full enumeration of G_r(F_q).

    Row k of ``coeffs`` is the power-basis vector of the value at the k-th
    element of ``enumerate_subgroup("G_r", ctx)``.
    """

    def __init__(self, ctx: GroupContext, m: int, coeffs: np.ndarray, name: str = ""):
        self.context = ctx
        self.m = m
        self.coeffs = np.asarray(coeffs)
        self.coeffs.setflags(write=False)
        self.name = name
        self.keys = element_keys(enumerate_subgroup("G_r", ctx), ctx.p)

    @classmethod
    def from_counts(cls, ctx, m, counts: np.ndarray, name="") -> "ClassFunction":
        """counts[k, e] = multiplicity of zeta_m^e in the value at element k."""
        return cls(ctx, m, counts @ power_basis_table(m), name)

    def __len__(self):
        return len(self.coeffs)

    def index_of(self, g) -> int:
        data = g.data if isinstance(g, TruncatedMatrix) else np.asarray(g)
        key = element_keys(data % self.context.p, self.context.p)
        k = int(np.searchsorted(self.keys, key))
        if k >= len(self.keys) or self.keys[k] != key:
            raise KeyError("not an element of G_r")
        return k

    def value(self, g) -> Cyclotomic:
        return Cyclotomic.from_power_basis(self.m, [int(v) for v in self.coeffs[self.index_of(g)]])

    def degree(self) -> Cyclotomic:
        return self.value(identity(self.context))

    def scaled(self, c: int) -> "ClassFunction":
        return ClassFunction(self.context, self.m, self.coeffs * c, "%d*%s" % (c, self.name))

    def disagreements(self, other: "ClassFunction") -> np.ndarray:
        if other.m != self.m or other.context != self.context:
            raise ValueError("class functions live on different groups or fields")
        return np.flatnonzero((self.coeffs != other.coeffs).any(axis=1))

    def __eq__(self, other):
        return isinstance(other, ClassFunction) and not len(self.disagreements(other))

    def conjugation_failures(self, samples: int, seed: int = 0) -> list[tuple[int, int]]:
        """Sampled (g, h) index pairs with f(h g h^-1) != f(g)."""
        ctx = self.context
        group = enumerate_subgroup("G_r", ctx)
        rng = np.random.default_rng(seed)
        gi = rng.integers(len(group), size=samples)
        hi = rng.integers(len(group), size=samples)
        h = group[hi]
        conj = bmul(bmul(h, group[gi], ctx.p), binv(h, ctx.p), ctx.p)
        ci = np.searchsorted(self.keys, element_keys(conj, ctx.p))
        bad = (self.coeffs[ci] != self.coeffs[gi]).any(axis=1)
        return [(int(a), int(b)) for a, b in zip(gi[bad], hi[bad])]


# induction


@lru_cache(maxsize=8)
def induction_data(ctx: GroupContext, which: str):
    """For every coset rep x and every g with x^-1 g x in H: (g index, torus coords)."""
    if which not in INDUCING:
        raise ValueError("which must be one of %s" % (INDUCING,))
    group = enumerate_subgroup("G_r", ctx)
    reps = coset_representatives(which, ctx)
    gidx, d0s, dds = [], [], []
    for x in reps:
        conj = bmul(bmul(binv(x, ctx.p), group, ctx.p), x, ctx.p)
        mask = member_mask(conj, which, ctx)
        d0, dd = _torus_coords(conj[mask], which, ctx)
        gidx.append(np.flatnonzero(mask))
        d0s.append(d0)
        dds.append(dd)
    out = (np.concatenate(gidx), np.concatenate(d0s), np.concatenate(dds))
    for a in out:
        a.setflags(write=False)
    return out


def induce(spec: CharacterSpec, which: str) -> ClassFunction:
    """Ind_H^G theta via the coset formula, H = B_r (pull back by sigma) or Hprime (sigma')."""
    ctx = spec.context
    gidx, d0, dd = induction_data(ctx, which)
    k = _exponent(spec, d0, dd)
    size = subgroup_order("G_r", ctx)
    m = spec.m
    counts = np.bincount(gidx * m + k, minlength=size * m).reshape(size, m)
    return ClassFunction.from_counts(ctx, m, counts, "Ind_%s" % which)


def induce_function(ctx: GroupContext, which: str, exponent_fn, m: int) -> ClassFunction:
    """Coset-formula induction of an arbitrary zeta_m-valued character of a subgroup.

    ``exponent_fn`` maps a stack of subgroup elements to exponents of zeta_m.
    """
    group = enumerate_subgroup("G_r", ctx)
    size = len(group)
    counts = np.zeros(size * m, dtype=np.int64)
    for x in coset_representatives(which, ctx):
        conj = bmul(bmul(binv(x, ctx.p), group, ctx.p), x, ctx.p)
        mask = member_mask(conj, which, ctx)
        k = np.asarray(exponent_fn(conj[mask]), dtype=np.int64) % m
        counts += np.bincount(np.flatnonzero(mask) * m + k, minlength=size * m)
    return ClassFunction.from_counts(ctx, m, counts.reshape(size, m), "Ind_%s" % which)


def _describe(ctx, k: int, *fns: ClassFunction) -> dict:
    g = TruncatedMatrix(ctx, enumerate_subgroup("G_r", ctx)[k])
    return {"element": g.to_list(), "values": {f.name: Cyclotomic.from_power_basis(f.m, [int(v) for v in f.coeffs[k]]).to_json() for f in fns}}


def _require_generic(spec, allow_nongeneric):
    if not spec.is_generic() and not allow_nongeneric:
        raise NonGeneric("A_%d = diag%s is not regular semisimple" % (spec.context.r - 1, spec.A[-1]))


def verify_main_theorem(spec: CharacterSpec, allow_nongeneric: bool = False, max_counterexamples: int = 20) -> dict:
    _require_generic(spec, allow_nongeneric)
    ctx = spec.context
    timings = {}
    with timed(timings, "induce_B_r"):
        ind_b = induce(spec, "B_r")
    with timed(timings, "induce_Hprime"):
        ind_h = induce(spec, "Hprime")
    with timed(timings, "compare"):
        bad = ind_b.disagreements(ind_h)
    ce = [_describe(ctx, int(k), ind_b, ind_h) for k in bad[:max_counterexamples]]
    return make_report(
        "main_theorem",
        spec.to_json(),
        ce,
        timings,
        elements=len(ind_b),
        disagreements=int(len(bad)),
        generic=spec.is_generic(),
        degree=ind_b.degree().to_json(),
    )


# fiber sums over (T x, X_1..X_{r-1})


@dataclass(frozen=True, order=True)
class StageId:
    kind: str
    index: int

    def validate(self, ctx: GroupContext):
        if self.kind == "X":
            ok = ctx.r_dprime <= self.index <= ctx.r
        elif self.kind == "Y":
            ok = 0 <= self.index <= ctx.r_prime
        else:
            raise ValueError("stage kind must be X or Y")
        if not ok:
            raise ValueError("stage %s out of range" % self)

    def __str__(self):
        return "%s_%d" % (self.kind, self.index)


def stage_chain(ctx: GroupContext) -> list[StageId]:
    """X_r, ..., X_{r''}, Y_0, ..., Y_{r'} in chain order."""
    xs = [StageId("X", i) for i in range(ctx.r, ctx.r_dprime - 1, -1)]
    return xs + [StageId("Y", i) for i in range(0, ctx.r_prime + 1)]


@lru_cache(maxsize=None)
def torus_coset_reps(n: int, p: int) -> np.ndarray:
    """One x per right coset T(F_p) x in GL_n(F_p)."""
    mats = np.array(np.meshgrid(*[np.arange(p)] * (n * n), indexing="ij")).reshape(n * n, -1).T.reshape(-1, n, n)
    mats = mats[det_nonzero(mats, p)]
    weights = p ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    keys = mats.reshape(-1, n * n) @ weights
    units = np.array(np.meshgrid(*[np.arange(1, p)] * n, indexing="ij")).reshape(n, -1).T
    tor = np.zeros((len(units), n, n), dtype=np.int64)
    tor[:, np.arange(n), np.arange(n)] = units
    covered = np.zeros(len(mats), dtype=bool)
    reps = []
    for k in range(len(mats)):
        if covered[k]:
            continue
        reps.append(mats[k])
        orbit = (tor @ mats[k]) % p
        covered[np.searchsorted(keys, orbit.reshape(-1, n * n) @ weights)] = True
    out = np.array(reps)
    out.setflags(write=False)
    return out


def lie_tuples(ctx: GroupContext, start: int, stop: int) -> np.ndarray:
    """Tuples (X_1..X_{r-1}) of n x n matrices numbered start..stop-1 in base-p order."""
    n, r, p = ctx.n, ctx.r, ctx.p
    width = n * n * (r - 1)
    idx = np.arange(start, stop, dtype=np.int64)
    flat = np.zeros((len(idx), width), dtype=np.int64)
    for pos in range(width - 1, -1, -1):
        flat[:, pos] = idx % p
        idx //= p
    return flat.reshape(-1, r - 1, n, n)


def fiber_size(ctx: GroupContext) -> int:
    return len(torus_coset_reps(ctx.n, ctx.p)) * ctx.p ** (ctx.n * ctx.n * (ctx.r - 1))


def _stage_masks(ctx, stages, z_upper, z_diag, v_upper, v_diag):
    rpp = ctx.r_dprime
    out = []
    for s in stages:
        if s.kind == "X" or s.index == 0:
            last = s.index - 1 if s.kind == "X" else rpp - 1
            mask = z_upper
            for j in range(1, last + 1):
                mask = mask & v_upper[j]
        else:
            mask = z_diag
            for j in range(1, s.index):
                mask = mask & v_diag[j]
            for j in range(s.index, rpp):
                mask = mask & v_upper[j]
        out.append(mask)
    return out


def _stage_counts(spec: CharacterSpec, stages, gprimes: np.ndarray, chunk: int = 1 << 18) -> np.ndarray:
    """counts[s, k, e]: number of fiber points over gprimes[k] in stage s with exponent e."""
    ctx = spec.context
    for s in stages:
        s.validate(ctx)
    n, r, p, q, m = ctx.n, ctx.r, ctx.p, ctx.q, spec.m
    work = fiber_size(ctx) * len(gprimes)
    if work > ctx.budget:
        raise BudgetExceeded("fiber enumeration", work, ctx.budget)
    ng = len(gprimes)
    counts = np.zeros((len(stages), ng * m), dtype=np.int64)
    y = gprimes[:, 0]
    yinv = embed(inv_mod_p(y, p), r)
    reps = torus_coset_reps(n, p)
    repinv = inv_mod_p(reps, p)
    _, dlog = discrete_log_table(p)
    chi = np.asarray(spec.chi, dtype=np.int64)
    A = np.asarray(spec.A, dtype=np.int64)
    total = p ** (n * n * (r - 1))
    step = max(1, chunk // ng)
    eye = np.eye(n, dtype=np.int64)
    base = np.arange(ng, dtype=np.int64) * m
    for start in range(0, total, step):
        Xs = lie_tuples(ctx, start, min(total, start + step))
        ex = bbuild(np.broadcast_to(eye, (len(Xs), n, n)), Xs, ctx)
        exinv = binv(ex, p)
        w = bmul(bmul(bmul(yinv[None], ex[:, None], p), gprimes[None], p), exinv[:, None], p)
        _, U = bfactor(w, ctx)
        for x, xi in zip(reps, repinv):
            z = x @ y @ xi % p
            zu, zd = is_upper(z), is_diag(z)
            mult = (p * ((dlog[_diag(z)] * chi).sum(-1) % (q - 1)))[None]
            V = x @ U @ xi % p
            hhat = (_diag(V) * A).sum(axis=(-1, -2)) % p
            k = (mult + (q - 1) * hhat) % m
            vu = {j: is_upper(V[..., j - 1, :, :]) for j in range(1, r)}
            vd = {j: is_diag(V[..., j - 1, :, :]) for j in range(1, r)}
            flat = base[None] + k
            for si, mask in enumerate(_stage_masks(ctx, stages, zu[None], zd[None], vu, vd)):
                mask = np.broadcast_to(mask, k.shape)
                counts[si] += np.bincount(flat[mask], minlength=ng * m)
    return counts.reshape(len(stages), ng, m)


def stage_trace(spec: CharacterSpec, stage: StageId, gprime: TruncatedMatrix) -> Cyclotomic:
    counts = _stage_counts(spec, [stage], gprime.data[None])
    return Cyclotomic.from_exponent_counts(spec.m, counts[0, 0])


def stage_trace_table(spec: CharacterSpec, stages=None) -> dict[StageId, ClassFunction]:
    ctx = spec.context
    stages = list(stages) if stages is not None else stage_chain(ctx)
    group = enumerate_subgroup("G_r", ctx)
    counts = _stage_counts(spec, stages, group)
    return {s: ClassFunction.from_counts(ctx, spec.m, counts[k], str(s)) for k, s in enumerate(stages)}


def flag_dimension_shift(ctx: GroupContext) -> int:
    """d = r dim b - dim T."""
    return ctx.r * ctx.n * (ctx.n + 1) // 2 - ctx.n


def verify_stage_chain(spec: CharacterSpec, allow_nongeneric: bool = False, max_counterexamples: int = 20) -> dict:
    _require_generic(spec, allow_nongeneric)
    ctx = spec.context
    timings = {}
    with timed(timings, "stage_traces"):
        table = stage_trace_table(spec)
    stages = stage_chain(ctx)
    ce = []
    pairs = []
    for a, b in zip(stages, stages[1:]):
        bad = table[a].disagreements(table[b])
        pairs.append({"stages": [str(a), str(b)], "disagreements": int(len(bad))})
        for k in bad[: max_counterexamples - len(ce)]:
            ce.append(dict(_describe(ctx, int(k), table[a], table[b]), stages=[str(a), str(b)]))
    d = flag_dimension_shift(ctx)
    with timed(timings, "induce_B_r"):
        ind = induce(spec, "B_r").scaled(ctx.q**d)
    top = table[stages[0]]
    bad = top.disagreements(ind)
    pairs.append({"stages": [str(stages[0]), "q^%d*Ind_B_r" % d], "disagreements": int(len(bad))})
    for k in bad[: max(0, max_counterexamples - len(ce))]:
        ce.append(dict(_describe(ctx, int(k), top, ind), stages=[str(stages[0]), "q^d*Ind_B_r"]))
    return make_report(
        "stage_chain",
        spec.to_json(),
        ce,
        timings,
        chain=[str(s) for s in stages],
        comparisons=pairs,
        d=d,
        generic=spec.is_generic(),
    )


# single fiber points


@dataclass(frozen=True)
class FiberPoint:
    x: np.ndarray
    y: np.ndarray
    Xs: tuple
    Ys: tuple


def _exp_product(ctx: GroupContext, mats) -> np.ndarray:
    out = identity(ctx)
    for j, a in enumerate(mats, 1):
        out = bmul(out, bexp(j, np.asarray(a, dtype=np.int64), ctx), ctx.p)
    return out


def matrix_u(ctx: GroupContext, y, Xs, Ys) -> np.ndarray:
    """U_1..U_{r-1}: factored coordinates of e^{(y^-1 X y)..} e^{Y..} (e^{X..})^-1."""
    p = ctx.p
    y = np.asarray(y, dtype=np.int64) % p
    yi = inv_mod_p(y, p)
    conj = [yi @ np.asarray(a, dtype=np.int64) @ y % p for a in Xs]
    w = bmul(bmul(_exp_product(ctx, conj), _exp_product(ctx, Ys), p), binv(_exp_product(ctx, Xs), p), p)
    _, U = bfactor(w, ctx)
    return U


def _check_point(ctx, point: FiberPoint):
    x = np.asarray(point.x, dtype=np.int64) % ctx.p
    y = np.asarray(point.y, dtype=np.int64) % ctx.p
    z = x @ y @ inv_mod_p(x, ctx.p) % ctx.p
    if not is_upper(z):
        raise NotInSubgroup("x y x^-1 is not upper triangular")
    return x, z


def h_hat_eval(ctx: GroupContext, point: FiberPoint, spec: CharacterSpec) -> int:
    x, _ = _check_point(ctx, point)
    p = ctx.p
    xi = inv_mod_p(x, p)
    U = matrix_u(ctx, point.y, point.Xs, point.Ys)
    total = 0
    for a, u in zip(spec.A_matrices, U):
        total += int(np.trace(xi @ a @ x % p @ u))
    return total % p


def iota_hat_eval(point: FiberPoint, ctx: GroupContext) -> np.ndarray:
    _, z = _check_point(ctx, point)
    return z * np.eye(ctx.n, dtype=np.int64)


# Artin-Schreier sums


def exp_sum_affine(p: int, coeffs, c: int) -> Cyclotomic:
    """sum over x in F_p^N of zeta_p^{a.x + c}, by brute force."""
    a = np.asarray(coeffs, dtype=np.int64) % p
    N = len(a)
    if N:
        grid = np.array(np.meshgrid(*[np.arange(p)] * N, indexing="ij")).reshape(N, -1).T
        vals = (grid @ a + c) % p
    else:
        vals = np.array([c % p])
    return Cyclotomic.from_exponent_counts(p, np.bincount(vals, minlength=p))


def exp_sum_report(p: int, N: int) -> dict:
    """Every affine f on F_p^n, n <= N: the sum vanishes iff f is non-constant."""
    ce = []
    checked = 0
    for size in range(N + 1):
        for flat in np.ndindex(*([p] * (size + 1))):
            *a, c = flat
            s = exp_sum_affine(p, a, c)
            constant = not any(a)
            expected = root_of_unity(p, c) * p**size if constant else Cyclotomic(p, [0])
            checked += 1
            if s != expected or s.is_zero() == constant:
                ce.append({"a": list(a), "c": c, "value": s.to_json()})
    return make_report("exp_sum", {"p": p, "N": N}, ce, checked=checked)


# symbolic versus matrix u_j


def evaluate_mod_p(poly: NCPoly, assignment: dict, p: int, n: int) -> np.ndarray:
    """Substitute n x n matrices over F_p for generators; coefficients reduced mod p."""
    alg = poly.algebra
    out = np.zeros((n, n), dtype=np.int64)
    eye = np.eye(n, dtype=np.int64)
    for word, coef in poly.terms.items():
        prod = eye
        for lab in alg.word_labels(word):
            prod = prod @ assignment[lab] % p
        out = (out + fraction_mod_p(coef, p) * prod) % p
    return out


def random_gl(rng, n: int, p: int) -> np.ndarray:
    while True:
        y = rng.integers(p, size=(n, n))
        if det_nonzero(y, p):
            return y


def cross_validate_u(ctx: GroupContext, trials: int, seed: int = 0, max_counterexamples: int = 10) -> dict:
    rng = np.random.default_rng(seed)
    n, r, p = ctx.n, ctx.r, ctx.p
    polys = [compute_u(j) for j in range(1, r)]
    ce = []
    timings = {}
    with timed(timings, "trials"):
        for t in range(trials):
            y = random_gl(rng, n, p)
            Xs = rng.integers(p, size=(r - 1, n, n))
            Ys = rng.integers(p, size=(r - 1, n, n))
            U = matrix_u(ctx, y, Xs, Ys)
            yi = inv_mod_p(y, p)
            env = {}
            for k in range(1, r):
                env["A.%d" % k] = yi @ Xs[k - 1] @ y % p
                env["B.%d" % k] = Ys[k - 1]
                env["C.%d" % k] = Xs[k - 1]
            for j, poly in enumerate(polys, 1):
                sym = evaluate_mod_p(poly, env, p, n)
                if not np.array_equal(sym, U[j - 1]) and len(ce) < max_counterexamples:
                    ce.append({"trial": t, "j": j, "symbolic": sym.tolist(), "matrix": U[j - 1].tolist()})
    return make_report("cross_validate", {"n": n, "q": ctx.q, "r": r, "trials": trials, "seed": seed}, ce, timings)
