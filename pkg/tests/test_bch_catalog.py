import itertools
from fractions import Fraction

import pytest
import sympy
from sympy.utilities.iterables import partitions as sympy_partitions

from tgc import bch_catalog as bch
from tgc.free_algebra import bracket, dynkin_lie_test

half = Fraction(1, 2)


@pytest.mark.parametrize("n", range(1, 13))
def test_partitions_match_sympy(n):
    ours = bch.partitions(n)
    assert len(ours) == int(sympy.partition(n))
    theirs = {tuple(sorted(itertools.chain.from_iterable([k] * v for k, v in p.items()), reverse=True))
              for p in sympy_partitions(n)}
    assert set(ours) == theirs
    assert ours == sorted(ours, reverse=True)
    assert all(list(lam) == sorted(lam, reverse=True) for lam in ours)


def test_multiplicities():
    assert bch.multiplicities((3, 1, 1)) == {3: 1, 1: 2}


def test_u1_u2_closed_forms():
    u1 = bch.compute_u(1)
    a = u1.algebra
    assert u1 == a.gen("A.1") + a.gen("B.1") - a.gen("C.1")
    u2 = bch.compute_u(2)
    a = u2.algebra
    A1, B1, C1 = (a.gen(s) for s in ("A.1", "B.1", "C.1"))
    want = a.gen("A.2") + a.gen("B.2") - a.gen("C.2") + (bracket(A1, B1) - bracket(A1, C1) - bracket(B1, C1)).scale(half)
    assert u2 == want


@pytest.mark.parametrize("j", range(1, 6))
def test_u_contract(j):
    rep = bch.check_u_contract(j)
    assert rep.passed, rep.witness
    rest = bch.compute_u(j) - bch.u_linear_part(j)
    assert rest.constant_term() == 0
    assert dynkin_lie_test(rest) if rest else True


def test_u_satisfies_defining_identity():
    # e^{A_1}..e^{A_j} e^{B_1}..e^{B_j} (e^{C_1}..e^{C_j})^{-1} = e^{u_1} ... e^{u_j} through grade j
    j = 3
    prod = bch.u_product(j)
    alg = prod.algebra
    parts = [bch.compute_u(k) for k in range(1, j + 1)]
    # lift u_k into the grade-(j+1) algebra by relabelling
    lifted = [alg.from_labels(p.label_terms()) for p in parts]
    rebuilt = alg.one()
    for v in lifted:
        rebuilt = rebuilt * v.exp()
    assert rebuilt == prod


def test_psi_2_closed_form():
    psi = bch.compute_psi(3, 1, 2)
    a = psi.algebra
    M, U, N = a.gen("M.1"), a.gen("U.1"), a.gen("N.1")
    assert psi == (bracket(M, U) - bracket(M, N) - bracket(U, N)).scale(half)
    assert len(psi) == 6
    assert psi.grades() == {2}
    assert all({"M.1", "N.1"} & set(psi.algebra.word_labels(w)) for w in psi.terms)
    kill = {"M.1": 0, "M.2": 0, "N.1": 0, "N.2": 0}
    assert not psi.substitute(kill)


@pytest.mark.parametrize("r,i,j", [(r, i, j) for r in range(3, 6) for i in range(1, r) for j in range(i + 1, r)])
def test_psi_independent_of_r(r, i, j):
    assert bch.compute_psi(r, i, j).label_terms() == bch.compute_psi(r + 1, i, j).label_terms()


@pytest.mark.parametrize("lemma,params", [
    ("psi_lie", {"r": 4, "i": 1}), ("psi_lie", {"r": 6, "i": 3}), ("psi_homogeneous", {"r": 5, "i": 2}),
    ("bracket_leading", {"r": 4, "i": 1, "j": 3}), ("bracket_leading", {"r": 6, "i": 2, "j": 5}), ("psi_vanishing", {"r": 5, "i": 1}),
])
def test_lemma_examples(lemma, params):
    rep = bch.run_lemma(lemma, params)
    assert rep.passed, rep.witness


def test_bracket_leading_mixed_part():
    rep = bch.verify_bracket_leading(4, 1, 3)
    assert rep.details["V_j_alone_mixed"]
    assert rep.details["mixed_part"] == {"N.1 U.2": "1", "U.2 N.1": "-1"}


def _explicit_v(i, j):
    alg = bch.partition_algebra(i, j + 1)
    M = alg.gen("M")
    U = {k: alg.gen("U.%d" % k) for k in range(1, j + 1)}
    if (i, j) == (2, 3):
        return alg, U[3] - bracket(U[1], M)
    if (i, j) == (3, 4):
        return alg, U[4] - bracket(U[1], M)
    if (i, j) == (3, 5):
        return alg, U[5] - bracket(U[2], M) + bracket(U[1], bracket(U[1], M)).scale(half)
    raise KeyError


@pytest.mark.parametrize("i,j", [(2, 3), (3, 4), (3, 5)])
def test_partition_expansion_explicit(i, j):
    alg, want = _explicit_v(i, j)
    got = bch.second_formula_factors(i, j + 1)[j - 1]
    assert got == want
    assert bch.verify_partition_expansion(i, j).passed


def test_grid_count():
    max_r = 6
    count = 0
    for r, i in itertools.product(range(2, max_r + 1), range(1, max_r)):
        if i < r:
            count += 3 + len([j for j in range(1, r) if 2 * i < j])
    count += len([(i, j) for i, j in itertools.product(range(1, 8), range(1, 8)) if i < j < 2 * i])
    assert len(bch.lemma_grid(max_r)) == count


@pytest.mark.parametrize("lemma,params", bch.lemma_grid(4))
def test_small_grid(lemma, params):
    rep = bch.run_lemma(lemma, params)
    assert rep.passed, rep.witness


def test_report_invariants():
    with pytest.raises(ValueError):
        bch.LemmaReport("psi_lie", {}, "fail")
    with pytest.raises(ValueError):
        bch.LemmaReport("psi_lie", {}, "maybe")
    rep = bch.verify_psi_lie(3, 1)
    assert rep.to_json()["status"] == "pass"


def test_argument_checks():
    with pytest.raises(ValueError):
        bch.verify_bracket_leading(4, 1, 2)
    with pytest.raises(ValueError):
        bch.verify_partition_expansion(2, 4)
    with pytest.raises(ValueError):
        bch.compute_psi(4, 2, 2)


def test_symbolic_budget():
    with pytest.raises(bch.BudgetExceeded):
        bch.first_formula_factors(5, 1, budget=10)


def test_cache_round_trip_and_tamper(tmp_path):
    cache = bch.PolynomialCache(tmp_path)
    assert cache.filename("psi", (2, 3), 6) == "psi_2-3_6.ncp"
    assert cache.get(("u", (3,), 4), bch.u_algebra(3)) is None
    u3 = bch.cached_u(3, cache)
    assert (tmp_path / "u_3_4.ncp").exists()
    assert bch.cached_u(3, cache) == u3
    psi = bch.cached_psi(5, 1, 3, cache)
    assert cache.get(("psi", (1, 3), 5), bch.psi_algebra(5, 1)) == psi
    path = tmp_path / "u_3_4.ncp"
    raw = bytearray(path.read_bytes())
    raw[-3] = ord("7") if raw[-3] != ord("7") else ord("5")
    path.write_bytes(bytes(raw))
    with pytest.raises(bch.CacheCorrupt):
        cache.get(("u", (3,), 4), bch.u_algebra(3))
    assert not list(tmp_path.glob(".tmp-*"))
