"""Named structure polynomials and the truncated-BCH identity checks.

Two families are computed symbolically in :mod:`tgc.free_algebra`:

* ``u_j``: the j-th factored coordinate of
  e^{A_1}..e^{A_j} e^{B_1}..e^{B_j} (e^{C_1}..e^{C_j})^{-1};
* ``psi_j``: the correction terms in the factored form
  e^{M_i}..e^{M_{r-1}} e^{U_1}..e^{U_{r-1}} e^{-N_{r-1}}..e^{-N_i} = e^{V_1}..e^{V_{r-1}},
  ``psi_j = V_j - U_j - M_j + N_j``.

Generator ``X.k`` has grade k.  The ``verify_*`` functions return a
:class:`LemmaReport` and never raise on a mathematical failure.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from pathlib import Path
from typing import Iterator

from .free_algebra import (
    FreeAlgebra,
    NCPoly,
    bracket,
    dynkin_lie_test,
    factored_exp,
    factored_log,
)

DEFAULT_MAX_R = 6
# words of grade < r in the (r=6, i=1) psi algebra number 1024
DEFAULT_SYMBOLIC_BUDGET = 2048


class BudgetExceeded(RuntimeError):
    pass


class CacheCorrupt(RuntimeError):
    pass


@dataclass
class LemmaReport:
    lemma: str
    params: dict
    status: str
    witness: str = ""
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in ("pass", "fail"):
            raise ValueError("status must be pass or fail")
        if self.status == "fail" and not self.witness:
            raise ValueError("a failing report needs a witness")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "params": dict(self.params),
            "status": self.status,
            "witness": self.witness,
            "details": self.details,
        }


def _report(lemma, params, failures, details=None) -> LemmaReport:
    if failures:
        return LemmaReport(lemma, params, "fail", "; ".join(failures), details or {})
    return LemmaReport(lemma, params, "pass", "", details or {})


# partitions


def partitions(n: int) -> list[tuple[int, ...]]:
    """Partitions of n, parts decreasing, in reverse lexicographic order.

    >>> partitions(3)
    [(3,), (2, 1), (1, 1, 1)]
    """
    if n < 0:
        raise ValueError("n must be non-negative")

    def gen(rest: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for part in range(min(rest, cap), 0, -1):
            for tail in gen(rest - part, part):
                yield (part,) + tail

    return list(gen(n, n))


def multiplicities(lam: tuple[int, ...]) -> dict[int, int]:
    out: dict[int, int] = {}
    for part in lam:
        out[part] = out.get(part, 0) + 1
    return out


# algebras


def word_space_size(grades: list[int], r: int) -> int:
    """Number of words of grade < r over generators with the given grades."""
    count = [0] * r
    count[0] = 1
    for g in range(1, r):
        count[g] = sum(count[g - d] for d in grades if d <= g)
    return sum(count)


def _check_budget(grades, r, budget):
    size = word_space_size(grades, r)
    if size > budget:
        raise BudgetExceeded("word space of size %d exceeds symbolic budget %d" % (size, budget))


@lru_cache(maxsize=None)
def u_algebra(j: int) -> FreeAlgebra:
    gens = [("%s.%d" % (s, k), k) for s in "ABC" for k in range(1, j + 1)]
    return FreeAlgebra(gens, j + 1)


@lru_cache(maxsize=None)
def psi_algebra(r: int, i: int) -> FreeAlgebra:
    gens = [("M.%d" % k, k) for k in range(i, r)]
    gens += [("U.%d" % k, k) for k in range(1, r)]
    gens += [("N.%d" % k, k) for k in range(i, r)]
    return FreeAlgebra(gens, r)


@lru_cache(maxsize=None)
def partition_algebra(i: int, r: int) -> FreeAlgebra:
    gens = [("M", i)] + [("U.%d" % k, k) for k in range(1, r)] + [("N", i)]
    return FreeAlgebra(gens, r)


def _exp_chain(alg: FreeAlgebra, labels, sign=1) -> NCPoly:
    out = alg.one()
    for lab in labels:
        out = out * alg.gen(lab).scale(sign).exp()
    return out


def _zero_map(alg, labels):
    return {lab: alg.zero() for lab in labels}


# u_j


def u_product(j: int) -> NCPoly:
    alg = u_algebra(j)
    a = _exp_chain(alg, ["A.%d" % k for k in range(1, j + 1)])
    b = _exp_chain(alg, ["B.%d" % k for k in range(1, j + 1)])
    c = _exp_chain(alg, ["C.%d" % k for k in range(1, j + 1)])
    return a * b * c.group_inverse()


@lru_cache(maxsize=None)
def compute_u(j: int) -> NCPoly:
    if j < 1:
        raise ValueError("j must be >= 1")
    return factored_log(u_product(j))[j - 1]


def u_linear_part(j: int) -> NCPoly:
    alg = u_algebra(j)
    return alg.gen("A.%d" % j) + alg.gen("B.%d" % j) - alg.gen("C.%d" % j)


def check_u_contract(j: int) -> LemmaReport:
    """u_j - (A_j + B_j - C_j) is Lie with no words of length <= 1, in lower generators only."""
    rest = compute_u(j) - u_linear_part(j)
    failures = []
    short = [w for w in rest.terms if len(w) <= 1]
    if short:
        failures.append("constant or linear term %s" % rest.algebra.word_labels(short[0]))
    if not dynkin_lie_test(rest):
        failures.append("not a Lie polynomial")
    bad = {s for s in rest.generators_used() if int(s.split(".")[1]) >= j}
    if bad:
        failures.append("uses %s" % sorted(bad))
    return _report("u_contract", {"j": j}, failures, {"terms": len(rest)})


# psi_j and the first formula


def first_formula_product(r: int, i: int) -> NCPoly:
    alg = psi_algebra(r, i)
    m = _exp_chain(alg, ["M.%d" % k for k in range(i, r)])
    u = _exp_chain(alg, ["U.%d" % k for k in range(1, r)])
    n = _exp_chain(alg, ["N.%d" % k for k in range(r - 1, i - 1, -1)], sign=-1)
    return m * u * n


@lru_cache(maxsize=None)
def first_formula_factors(r: int, i: int, budget: int = DEFAULT_SYMBOLIC_BUDGET) -> tuple[NCPoly, ...]:
    """V_1..V_{r-1} for the (M, U, N) product at truncation r."""
    if not (r >= 2 and 1 <= i <= r - 1):
        raise ValueError("need r >= 2 and 1 <= i <= r-1")
    alg = psi_algebra(r, i)
    _check_budget([g.grade for g in alg.generators], r, budget)
    return tuple(factored_log(first_formula_product(r, i)))


def _gen_or_zero(alg, label):
    return alg.gen(label) if label in alg else alg.zero()


def compute_psi(r: int, i: int, j: int, budget: int = DEFAULT_SYMBOLIC_BUDGET) -> NCPoly:
    if not (1 <= i < j <= r - 1):
        raise ValueError("need 1 <= i < j <= r-1, got r=%d i=%d j=%d" % (r, i, j))
    alg = psi_algebra(r, i)
    v = first_formula_factors(r, i, budget)[j - 1]
    return v - alg.gen("U.%d" % j) - alg.gen("M.%d" % j) + alg.gen("N.%d" % j)


def _mn_labels(alg: FreeAlgebra) -> list[str]:
    return [g.label for g in alg.generators if g.label[0] in "MN"]


def _first_word(p: NCPoly, words) -> str:
    w = min(words, key=p.algebra.word_key)
    return "%s*%s" % (p.terms[w], " ".join(p.algebra.word_labels(w)))


def verify_psi_lie(r: int, i: int, budget: int = DEFAULT_SYMBOLIC_BUDGET) -> LemmaReport:
    alg = psi_algebra(r, i)
    vs = first_formula_factors(r, i, budget)
    failures = []
    for j in range(1, r):
        vj = vs[j - 1]
        uj = alg.gen("U.%d" % j)
        if j < i:
            if vj != uj:
                failures.append("V_%d != U_%d: %r" % (j, j, vj - uj))
            continue
        if j == i:
            expected = uj + alg.gen("M.%d" % i) - alg.gen("N.%d" % i)
            if vj != expected:
                failures.append("V_%d != U+M-N: %r" % (j, vj - expected))
            continue
        psi = compute_psi(r, i, j, budget)
        if not psi:
            continue
        short = [w for w in psi.terms if len(w) <= 1]
        if short:
            failures.append("psi_%d has short word %s" % (j, _first_word(psi, short)))
        if not dynkin_lie_test(psi):
            failures.append("psi_%d fails the Dynkin test" % j)
        allowed = {"M.%d" % k for k in range(i, j)} | {"N.%d" % k for k in range(i, j)}
        allowed |= {"U.%d" % k for k in range(1, j)}
        extra = psi.generators_used() - allowed
        if extra:
            failures.append("psi_%d uses %s" % (j, sorted(extra)))
        again = compute_psi(r + 1, i, j, max(budget, word_space_size(
            [g.grade for g in psi_algebra(r + 1, i).generators], r + 1)))
        if psi.label_terms() != again.label_terms():
            failures.append("psi_%d changes between r=%d and r=%d" % (j, r, r + 1))
    return _report("psi_lie", {"r": r, "i": i}, failures, {"psi_count": max(0, r - 1 - i)})


def verify_psi_homogeneous(r: int, i: int, budget: int = DEFAULT_SYMBOLIC_BUDGET) -> LemmaReport:
    """Homogeneity of psi_j, by grade inspection and by rescaling every generator by alpha^grade."""
    alg = psi_algebra(r, i)
    failures = []
    alpha = Fraction(2)
    scaling = {g.label: alg.gen(g.label).scale(alpha**g.grade) for g in alg.generators}
    for j in range(i + 1, r):
        psi = compute_psi(r, i, j, budget)
        bad = [w for w in psi.terms if alg.word_grade(w) != j]
        if bad:
            failures.append("psi_%d has word of grade %d" % (j, alg.word_grade(bad[0])))
        if psi.substitute(scaling) != psi.scale(alpha**j):
            failures.append("psi_%d not homogeneous under rescaling" % j)
    # rescaled product: V_j(alpha) must equal alpha^j V_j
    if r - 1 > i:
        scaled = factored_log(first_formula_product(r, i).substitute(scaling))
        for j, (vj, sj) in enumerate(zip(first_formula_factors(r, i, budget), scaled), start=1):
            if sj != vj.scale(alpha**j):
                failures.append("rescaled V_%d mismatch" % j)
    return _report("psi_homogeneous", {"r": r, "i": i}, failures)


def _mixed_words(p: NCPoly, u_labels: set[str], mn_labels: set[str]):
    lab = p.algebra.word_labels
    out = []
    for w in p.terms:
        labels = set(lab(w))
        if labels & u_labels and labels & mn_labels:
            out.append(w)
    return out


def verify_bracket_leading(r: int, i: int, j: int, budget: int = DEFAULT_SYMBOLIC_BUDGET) -> LemmaReport:
    if not (2 * i < j <= r - 1):
        raise ValueError("need 2i < j <= r-1, got r=%d i=%d j=%d" % (r, i, j))
    alg = psi_algebra(r, i)
    vj = first_formula_factors(r, i, budget)[j - 1]
    target = bracket(alg.gen("N.%d" % i), alg.gen("U.%d" % (j - i)))
    u_set = {"U.%d" % k for k in range(j - i, r)}
    mn_set = set(_mn_labels(alg))
    rest = vj - target
    bad = _mixed_words(rest, u_set, mn_set)
    failures = []
    if bad:
        failures.append("mixed word %s" % _first_word(rest, bad))
    raw = _mixed_words(vj, u_set, mn_set)
    mixed = {" ".join(alg.word_labels(w)): str(vj.terms[w]) for w in sorted(raw, key=alg.word_key)}
    return _report("bracket_leading", {"r": r, "i": i, "j": j}, failures,
                   {"V_j_alone_mixed": bool(raw), "mixed_part": mixed})


def verify_psi_vanishing(r: int, i: int, budget: int = DEFAULT_SYMBOLIC_BUDGET) -> LemmaReport:
    alg = psi_algebra(r, i)
    mn = _mn_labels(alg)
    mn_set = set(mn)
    kill = _zero_map(alg, mn)
    failures = []
    for j in range(i + 1, r):
        psi = compute_psi(r, i, j, budget)
        if psi.substitute(kill):
            failures.append("psi_%d(0, U) != 0" % j)
        lab = alg.word_labels
        pure = [w for w in psi.terms if not set(lab(w)) & mn_set]
        if pure:
            failures.append("psi_%d word without M/N: %s" % (j, _first_word(psi, pure)))
    return _report("psi_vanishing", {"r": r, "i": i}, failures)


def ad_partition(lam: tuple[int, ...], alg: FreeAlgebra, target: NCPoly) -> NCPoly:
    """ad_{U_k}^{lam(k)} ... ad_{U_1}^{lam(1)} applied to target, U_1 innermost."""
    mult = multiplicities(lam)
    out = target
    for k in sorted(mult):
        uk = alg.gen("U.%d" % k)
        for _ in range(mult[k]):
            out = bracket(uk, out)
    return out


def partition_formula(i: int, j: int) -> NCPoly:
    r = j + 1
    alg = partition_algebra(i, r)
    m = alg.gen("M")
    out = alg.gen("U.%d" % j)
    for lam in partitions(j - i):
        mult = multiplicities(lam)
        coeff = Fraction((-1) ** len(lam), prod(factorial(v) for v in mult.values()))
        out = out + ad_partition(lam, alg, m).scale(coeff)
    return out


def second_formula_factors(i: int, r: int) -> list[NCPoly]:
    alg = partition_algebra(i, r)
    g = alg.gen("M").exp() * _exp_chain(alg, ["U.%d" % k for k in range(1, r)]) * (-alg.gen("N")).exp()
    return factored_log(g)


def verify_partition_expansion(i: int, j: int) -> LemmaReport:
    if not (i < j < 2 * i):
        raise ValueError("need i < j < 2i, got i=%d j=%d" % (i, j))
    vj = second_formula_factors(i, j + 1)[j - 1]
    expected = partition_formula(i, j)
    failures = []
    if vj != expected:
        diff = vj - expected
        failures.append("V_%d differs by %s" % (j, _first_word(diff, list(diff.terms))))
    return _report("partition_expansion", {"i": i, "j": j, "r": j + 1}, failures,
                   {"partitions": [list(l) for l in partitions(j - i)]})


def lemma_grid(max_r: int, max_j_partition: int | None = None) -> list[tuple[str, dict]]:
    """Every (lemma, params) tuple checked for r <= max_r; the partition expansion runs for j <= max_j_partition."""
    if max_j_partition is None:
        max_j_partition = max_r + 1
    out = []
    for r in range(2, max_r + 1):
        for i in range(1, r):
            out.append(("psi_lie", {"r": r, "i": i}))
            out.append(("psi_homogeneous", {"r": r, "i": i}))
            out.append(("psi_vanishing", {"r": r, "i": i}))
            for j in range(2 * i + 1, r):
                out.append(("bracket_leading", {"r": r, "i": i, "j": j}))
    for j in range(2, max_j_partition + 1):
        for i in range(1, j):
            if i < j < 2 * i:
                out.append(("partition_expansion", {"i": i, "j": j}))
    return out


def run_lemma(lemma: str, params: dict, budget: int = DEFAULT_SYMBOLIC_BUDGET) -> LemmaReport:
    if lemma == "psi_lie":
        return verify_psi_lie(params["r"], params["i"], budget)
    if lemma == "psi_homogeneous":
        return verify_psi_homogeneous(params["r"], params["i"], budget)
    if lemma == "bracket_leading":
        return verify_bracket_leading(params["r"], params["i"], params["j"], budget)
    if lemma == "psi_vanishing":
        return verify_psi_vanishing(params["r"], params["i"], budget)
    if lemma == "partition_expansion":
        return verify_partition_expansion(params["i"], params["j"])
    raise ValueError("unknown lemma %r" % lemma)


# on-disk cache


def _digest(body: str) -> str:
    return hashlib.sha256(body.encode()).hexdigest()


class PolynomialCache:
    """Directory of ``<family>_<indices>_<r>.ncp`` files, each with a digest header.

    Writes go through a temporary file and an atomic rename.
    """

    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)

    @staticmethod
    def filename(family: str, indices: tuple[int, ...], r: int) -> str:
        if family not in ("u", "psi", "P"):
            raise ValueError("unknown family %r" % family)
        return "%s_%s_%d.ncp" % (family, "-".join(str(k) for k in indices) or "none", r)

    def path(self, key) -> Path:
        return self.directory / self.filename(*key)

    def put(self, key, poly: NCPoly) -> Path:
        body = poly.serialize()
        text = "# sha256 %s\n%s" % (_digest(body), body)
        self.directory.mkdir(parents=True, exist_ok=True)
        target = self.path(key)
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".ncp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return target

    def get(self, key, algebra: FreeAlgebra) -> NCPoly | None:
        target = self.path(key)
        try:
            text = target.read_text()
        except FileNotFoundError:
            return None
        header, _, body = text.partition("\n")
        if not header.startswith("# sha256 "):
            raise CacheCorrupt("%s: missing digest header" % target)
        if header.split()[2] != _digest(body):
            raise CacheCorrupt("%s: digest mismatch" % target)
        return algebra.parse(body)


def cached_u(j: int, cache: PolynomialCache | None) -> NCPoly:
    if cache is None:
        return compute_u(j)
    key = ("u", (j,), j + 1)
    hit = cache.get(key, u_algebra(j))
    if hit is not None:
        return hit
    poly = compute_u(j)
    cache.put(key, poly)
    return poly


def cached_psi(r: int, i: int, j: int, cache: PolynomialCache | None) -> NCPoly:
    if cache is None:
        return compute_psi(r, i, j)
    key = ("psi", (i, j), r)
    hit = cache.get(key, psi_algebra(r, i))
    if hit is not None:
        return hit
    poly = compute_psi(r, i, j)
    cache.put(key, poly)
    return poly
