"""Acceptance criteria, one test each, at the stated tolerances and time limits.

Run directly (``python tests/test_acceptance.py``) or through pytest; either
way one PASS/FAIL line is printed per criterion.
"""

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from tgc import bch_catalog as bch
from tgc import characters as ch
from tgc import truncated_groups as tg
from tgc.free_algebra import FreeAlgebra, bracket, factored_exp, factored_log
from tgc.scalars import Cyclotomic, root_of_unity
from tgc.truncated_groups import GroupContext

half = Fraction(1, 2)


def criterion_1():
    """Lemma grid for 2 <= r <= 6, partition expansion for j <= 7; exact; under 5 minutes."""
    grid = bch.lemma_grid(6, max_j_partition=7)
    reports = [bch.run_lemma(lemma, params) for lemma, params in grid]
    bad = [r.to_json() for r in reports if not r.passed]
    counts = {}
    for lemma, _ in grid:
        counts[lemma] = counts.get(lemma, 0) + 1
    return not bad, "%d tuples %s, %d failing" % (len(grid), counts, len(bad)), 300


def criterion_2():
    """u_j contract for j <= 5, u_1 and u_2 closed forms."""
    ok = all(bch.check_u_contract(j).passed for j in range(1, 6))
    u1 = bch.compute_u(1)
    a = u1.algebra
    ok &= u1 == a.gen("A.1") + a.gen("B.1") - a.gen("C.1")
    u2 = bch.compute_u(2)
    a = u2.algebra
    A1, B1, C1 = (a.gen(s) for s in ("A.1", "B.1", "C.1"))
    ok &= u2 == a.gen("A.2") + a.gen("B.2") - a.gen("C.2") + (bracket(A1, B1) - bracket(A1, C1) - bracket(B1, C1)).scale(half)
    return ok, "u_1..u_5 checked", 60


THEOREM_CASES = [
    (2, 2, [(0, 1)], [(0, 0)], 10),
    (3, 2, [(1, 2)], [(1, 0), (0, 1), (1, 1)], 60),
    (3, 3, [(2, 0), (1, 2)], [(1, 0), (0, 1)], 900),
]


def _theorem_case(q, r, A, chis):
    ctx = GroupContext(2, q, r)
    details = []
    ok = True
    for chi in chis:
        rep = ch.verify_main_theorem(ch.CharacterSpec.build(ctx, chi, A))
        ok &= rep["status"] == "pass" and rep["elements"] == tg.subgroup_order("G_r", ctx)
        details.append("chi=%s: %d elements, %d disagree" % (chi, rep["elements"], rep["disagreements"]))
    return ok, "; ".join(details)


def criterion_3():
    """Exhaustive induced-character equality; per-case limits 10 s, 1 min, 15 min."""
    ok = True
    parts = []
    for q, r, A, chis, limit in THEOREM_CASES:
        start = time.perf_counter()
        good, detail = _theorem_case(q, r, A, chis)
        elapsed = time.perf_counter() - start
        good &= elapsed < limit
        ok &= good
        parts.append("(q,r)=(%d,%d) %s in %.1fs/%ds" % (q, r, detail, elapsed, limit))
    return ok, " | ".join(parts), 10 + 60 + 900


def criterion_4():
    """Stage chain at (2,2) and (3,2), including X_r = q^d Ind_B."""
    ok = True
    parts = []
    for q, A, chi in ((2, [(0, 1)], (0, 0)), (3, [(1, 2)], (1, 0))):
        spec = ch.CharacterSpec.build(GroupContext(2, q, 2), chi, A)
        rep = ch.verify_stage_chain(spec)
        ok &= rep["status"] == "pass" and rep["d"] == 4
        parts.append("q=%d %s" % (q, ",".join("%s=%s:%d" % (c["stages"][0], c["stages"][1], c["disagreements"]) for c in rep["comparisons"])))
    return ok, " | ".join(parts), 600


def criterion_5():
    """Affine character sums over F_p^N, p in {2,3,5}, N <= 2."""
    ok = True
    checked = 0
    for p in (2, 3, 5):
        rep = ch.exp_sum_report(p, 2)
        ok &= rep["status"] == "pass"
        checked += rep["checked"]
    return ok, "%d affine functions" % checked, 30


def criterion_6():
    """K normal in H', T_r meets K trivially, |H'| = |T_r||K|, sigma' multiplicative and identity on T_r."""
    ctx = GroupContext(2, 3, 3)
    p = ctx.p
    H = tg.enumerate_subgroup("Hprime", ctx)
    K = tg.enumerate_subgroup("K", ctx)
    T = tg.enumerate_subgroup("T_r", ctx)
    conj = tg.bmul(tg.bmul(H[:, None], K[None], p), tg.binv(H, p)[:, None], p).reshape(-1, *ctx.shape)
    normal = bool(tg.member_mask(conj, "K", ctx).all())
    meet = int(tg.member_mask(T, "K", ctx).sum())
    orders = len(H) == len(T) * len(K)

    def sp(h):
        x, ds, _ = tg.bsigma_prime_coords(h, ctx)
        return tg.bbuild(x, ds, ctx)

    rng = np.random.default_rng(0)
    a = H[rng.integers(len(H), size=10_000)]
    b = H[rng.integers(len(H), size=10_000)]
    mult = np.array_equal(sp(tg.bmul(a, b, p)), tg.bmul(sp(a), sp(b), p))
    ident = np.array_equal(sp(T), T)
    ok = normal and meet == 1 and orders and mult and ident
    detail = "|H'|=%d |T_r|=%d |K|=%d normal=%s meet=%d multiplicative=%s identity_on_T=%s" % (
        len(H), len(T), len(K), normal, meet, mult, ident)
    return ok, detail, 300


def criterion_7():
    """100 randomized u_j comparisons at q=5, r=4, n=2."""
    rep = ch.cross_validate_u(GroupContext(2, 5, 4), 100, seed=0)
    return rep["status"] == "pass", "%d mismatches" % len(rep["counterexamples"]), 60


def _random_poly(rng, alg, max_terms=5, max_len=3):
    labels = [g.label for g in alg.generators]
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        word = tuple(rng.choice(labels) for _ in range(rng.randint(1, max_len)))
        terms[word] = Fraction(rng.randint(-3, 3), rng.randint(1, 4))
    return alg.from_labels(terms)


def criterion_8():
    """Round trips, cyclotomic canonical equality, enumeration counts."""
    rng = random.Random(0)
    trips = 0
    ok = True
    for r in range(2, 6):
        for _ in range(25):
            alg = FreeAlgebra([("X", 1), ("Y", 1), ("Z", 2)][: rng.randint(1, 3)], r)
            x = _random_poly(rng, alg)
            g = x.exp()
            ok &= g.log() == x and g.log().exp() == g and factored_exp(factored_log(g)) == g
            trips += 1
    # canonical forms: equal field elements have identical coefficient vectors
    cyc = [
        root_of_unity(6, 3) == -1,
        sum((root_of_unity(5, k) for k in range(5)), Cyclotomic(5)).is_zero(),
        root_of_unity(3, 1).raise_order(6) == root_of_unity(6, 2),
        Cyclotomic(12, [0, 0, 0, 0, 1]).coeffs == (root_of_unity(12, 2) - 1).coeffs,
        hash(root_of_unity(4, 6)) == hash(Cyclotomic(4, [-1])),
    ]
    ok &= all(cyc)
    counted = 0
    for q, r in ((2, 2), (3, 2), (3, 3)):
        ctx = GroupContext(2, q, r)
        specs = [tg.SubgroupSpec("Hprime"), tg.SubgroupSpec("K")]
        for tag in ("G_r", "B_r", "T_r", "U_r"):
            specs.append(tg.SubgroupSpec(tag))
            specs += [tg.SubgroupSpec(tag, i) for i in range(1, r)]
        for spec in specs:
            ok &= len(tg.enumerate_subgroup(spec, ctx)) == tg.subgroup_order(spec, ctx)
            counted += 1
    return ok, "%d round trips, %d canonical identities, %d subgroup counts" % (trips, len(cyc), counted), 300


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


def evaluate(k):
    start = time.perf_counter()
    ok, detail, limit = CRITERIA[k - 1]()
    elapsed = time.perf_counter() - start
    ok = bool(ok) and elapsed < limit
    line = "criterion %d: %s (%.1fs, limit %ds) %s" % (k, "PASS" if ok else "FAIL", elapsed, limit, detail)
    return ok, line


@pytest.mark.parametrize("k", range(1, 9))
def test_criterion(k, acceptance_log):
    ok, line = evaluate(k)
    acceptance_log.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(k) for k in range(1, 9)]
    for _, line in results:
        print(line)
    raise SystemExit(0 if all(ok for ok, _ in results) else 1)
