"""
Cyclic extensions of degree 9 over Q_3
======================================

Build an Eisenstein polynomial that should give a cyclic extension, read
off the coefficient conditions, and compare with the norm group.
"""

import numpy as np

from eisenstein.cft_oracle import norm_subgroup, oracle_verdicts
from eisenstein.classify2 import check_cyclic_p2, classify_p2, gen_p2, level_value_p2
from eisenstein.upoly import artin_hasse_norm, lower_breaks

# a synthesized polynomial: coefficients are 3-adic integers mod 3^6
f = gen_p2(3, 1, "cyclic", seed=0)
print("f_i =", [int(c) for c in f.coeffs])

# the seven conditions, in order
rep = check_cyclic_p2(f)
for c in rep.conditions:
    print(f"  ({c.id}) {'ok  ' if c.passed else 'FAIL'} {c.reason}")
print("cyclic:", rep.cyclic)

# the oracle knows nothing about the conditions: it reads U_1 / N(U_1,L)
rep_o = norm_subgroup(f)
print("invariant factors:", rep_o.invariant_factors, "from", rep_o.generator_count, "norms")

# lower ramification breaks from the ramification polygon
print("lower breaks:", [str(b) for b in lower_breaks(f)])

# break one condition at a time and watch both sides move together
for target in ["fail:3", "fail:4", "fail:6", "fail:7"]:
    g = gen_p2(3, 1, target, seed=0)
    r, o = check_cyclic_p2(g), oracle_verdicts(g)
    c = classify_p2(g)
    print(f"{target}: first failed {r.first_failed}, oracle {o.invariant_factors}, "
          f"regime {c.regime}, predicted max abelian degree {c.predicted_max_abelian_degree}")

# the level-ell norm of the Artin-Hasse unit is 1 + c_ell(theta) mod 27
R = f.ring
table = np.zeros((2, 3), dtype=np.int64)
for j, r in enumerate(R.base.elements()):
    t = R.teichmuller(r)
    for i, ell in enumerate((2, 4)):
        x = artin_hasse_norm(f, t, ell) - 1 - level_value_p2(f, ell, t)
        table[i, j] = min(x.valuation(), 6)
print("valuation of the difference (rows ell = 2, 4; columns theta = 0, 1, 2):")
print(table)
