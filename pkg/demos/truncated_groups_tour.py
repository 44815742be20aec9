# GL_2 over F_q[eps]/(eps^r): subgroups, coordinates and the retraction onto the torus.
import time

import numpy as np

from tgc import truncated_groups as tg
from tgc.truncated_groups import GroupContext, TruncatedMatrix

ctx = GroupContext(n=2, p=3, r=3)
print("q=%d r=%d r'=%d r''=%d" % (ctx.q, ctx.r, ctx.r_prime, ctx.r_dprime))

for spec in ["G_r", "B_r", "T_r", "U_r", "G_r^1", "G_r^2", "B_r^1", "Hprime", "K"]:
    t = time.perf_counter()
    elems = tg.enumerate_subgroup(spec, ctx)
    print("%-7s %7d elements  (closed form %7d, %.2fs)" % (
        spec, len(elems), tg.subgroup_order(spec, ctx), time.perf_counter() - t))

# an element and its exponential coordinates g = x e^{eps X_1} e^{eps^2 X_2}
g = TruncatedMatrix.from_list(ctx, [[2, 1, 0], [1, 2, 2], [0, 1, 1], [1, 0, 2]])
c = tg.factor_coordinates(g)
print("\ng =", g.to_list())
print("x =", c.x.tolist())
for j, X in enumerate(c.xs, 1):
    print("X_%d =" % j, X.tolist())
print("rebuilt equals g:", tg.build(ctx, c) == g)

# sigma' on H' = T_r B_r^{r'} G_r^{r''}: t with t^{-1} h in K
H = tg.enumerate_subgroup("Hprime", ctx)
# first element that is neither in T_r nor in K
h = next(TruncatedMatrix(ctx, e) for e in H[::37] if not tg.membership(TruncatedMatrix(ctx, e), "T_r")
         and not tg.membership(TruncatedMatrix(ctx, e), "K"))
t = tg.sigma_prime(h)
print("\nh =", h.to_list())
print("sigma'(h) =", t.to_list())
print("t^-1 h in K:", tg.membership(t.inverse() @ h, "K"))

reps = tg.coset_representatives("B_r", ctx)
print("\n[G_r : B_r] =", len(reps), "=", (ctx.q + 1) * ctx.q ** (ctx.r - 1))
rng = np.random.default_rng(0)
a, b = (TruncatedMatrix(ctx, H[k]) for k in rng.integers(len(H), size=2))
print("sigma'(ab) = sigma'(a)sigma'(b):", tg.sigma_prime(a @ b) == tg.sigma_prime(a) @ tg.sigma_prime(b))
