# Truncated BCH series and the u_j structure polynomials.
from fractions import Fraction

from tgc.bch_catalog import check_u_contract, compute_psi, compute_u, second_formula_factors
from tgc.free_algebra import FreeAlgebra, bracket, dynkin_lie_test, factored_log

# two grade-1 generators, everything of grade >= 4 dropped
alg = FreeAlgebra([("A", 1), ("B", 1)], 4)
A, B = alg.gen("A"), alg.gen("B")

z = (A.exp() * B.exp()).log()
print("log(e^A e^B) =", z)
print("Lie element?", dynkin_lie_test(z))
print("A*B is Lie?", dynkin_lie_test(A * B))

# same product, split by grade into e^{V_1} e^{V_2} e^{V_3}
for j, v in enumerate(factored_log(A.exp() * B.exp()), 1):
    print("V_%d =" % j, v)

print()
for j in (1, 2):
    print("u_%d =" % j, compute_u(j))
u3 = compute_u(3)
print("u_3 has", len(u3), "terms")
for j in range(1, 6):
    rep = check_u_contract(j)
    print("u_%d contract: %s (%s)" % (j, rep.status, rep.details))

print()
print("psi_2 (r=3, i=1) =", compute_psi(3, 1, 2))
print("psi_3 (r=4, i=1) has", len(compute_psi(4, 1, 3)), "terms")

# M of grade 3 against U_1..U_5: the grade-5 factor
v5 = second_formula_factors(3, 6)[4]
print("V_5 =", v5)
alg5 = v5.algebra
M, U1, U2, U5 = (alg5.gen(s) for s in ("M", "U.1", "U.2", "U.5"))
print("equals U_5 - [U_2,M] + 1/2 [U_1,[U_1,M]]:",
      v5 == U5 - bracket(U2, M) + bracket(U1, bracket(U1, M)).scale(Fraction(1, 2)))
