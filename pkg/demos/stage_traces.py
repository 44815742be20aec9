# Fiber sums over (Tx, X_1..X_{r-1}) along the chain X_r, ..., X_{r''} = Y_0, ..., Y_{r'}.
import numpy as np

from tgc import characters as ch
from tgc.truncated_groups import GroupContext, TruncatedMatrix

ctx = GroupContext(n=2, p=3, r=2)
spec = ch.CharacterSpec.build(ctx, chi=(1, 0), A=[(1, 2)])
print("fiber size", ch.fiber_size(ctx), "  d =", ch.flag_dimension_shift(ctx))

table = ch.stage_trace_table(spec)
one = TruncatedMatrix.identity(ctx)
for stage, f in table.items():
    print(stage, "at identity:", f.value(one))

chain = ch.stage_chain(ctx)
for a, b in zip(chain, chain[1:]):
    print("%s vs %s: %d disagreements" % (a, b, len(table[a].disagreements(table[b]))))

top = table[chain[0]]
ind = ch.induce(spec, "B_r").scaled(ctx.q ** ch.flag_dimension_shift(ctx))
print("X_r vs q^d Ind_B:", len(top.disagreements(ind)), "disagreements")

# one fiber point by hand
rng = np.random.default_rng(1)
x = np.array([[1, 0], [2, 1]])
y = np.array([[1, 1], [0, 2]])
pt = ch.FiberPoint(x, y, tuple(rng.integers(3, size=(1, 2, 2))), tuple(rng.integers(3, size=(1, 2, 2))))
try:
    print("h_hat =", ch.h_hat_eval(ctx, pt, spec), " iota_hat =", ch.iota_hat_eval(pt, ctx).tolist())
except Exception as exc:
    print("point outside the domain:", exc)

# character sums of affine functions
print("sum psi(x1 + 2 x2) over F_5^2:", ch.exp_sum_affine(5, [1, 2], 0))
print("sum psi(3) over F_5^2:", ch.exp_sum_affine(5, [0, 0], 3))
