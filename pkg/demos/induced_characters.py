# The two induced characters of a generic torus character, compared everywhere.
import time

from tgc import characters as ch
from tgc.truncated_groups import GroupContext, TruncatedMatrix, enumerate_subgroup

ctx = GroupContext(n=2, p=3, r=2)
spec = ch.CharacterSpec.build(ctx, chi=(1, 0), A=[(1, 2)])
print("generic:", spec.is_generic(), " omega =", spec.omega, " values in Q(zeta_%d)" % spec.m)

ind_b = ch.induce(spec, "B_r")
ind_h = ch.induce(spec, "Hprime")
print("degree", ind_b.degree(), "on", len(ind_b), "elements")

G = enumerate_subgroup("G_r", ctx)
for k in (0, 100, 1234, 3000):
    g = TruncatedMatrix(ctx, G[k])
    print(g.to_list(), ind_b.value(g), ind_h.value(g))

print("disagreements:", len(ind_b.disagreements(ind_h)))
print("class function on 2000 sampled conjugates:", not ind_b.conjugation_failures(2000))

# outside the hypothesis the two sides are not forced to agree
flat = ch.CharacterSpec.build(ctx, chi=(1, 0), A=[(1, 1)])
rep = ch.verify_main_theorem(flat, allow_nongeneric=True)
print("A_1 = diag(1,1):", rep["status"], rep["disagreements"], "elements differ")

t = time.perf_counter()
big = ch.CharacterSpec.build(GroupContext(2, 3, 3), chi=(1, 0), A=[(2, 0), (1, 2)])
rep = ch.verify_main_theorem(big)
print("q=3 r=3:", rep["status"], "on", rep["elements"], "elements in %.1fs" % (time.perf_counter() - t))
