"""
Degree 125 over Q_5: cyclic seeds and near-misses
=================================================

A cyclic seed comes from a Lubin-Tate division polynomial, moved around
by a unit, a scaling and a Taylor shift.  A near-miss changes one
coefficient by a single p-adic digit.  The coefficient criteria and the
norm-group oracle should agree on every one of them.  This takes a
minute or two.
"""

import time

from eisenstein.cft_oracle import oracle_verdicts
from eisenstein.classify3 import check_cyclic_p3, gen_p3, near_miss_sites

rows = []
cases = [("cyclic", 0), ("cyclic", 1), ("pair", 0)]
cases += [(f"near:{i}:{k}", 7) for i, k in near_miss_sites(5)[::6]]
for target, seed in cases:
    f = gen_p3(5, 1, target, seed)
    t0 = time.perf_counter()
    rep = check_cyclic_p3(f)
    t1 = time.perf_counter()
    orc = oracle_verdicts(f)
    t2 = time.perf_counter()
    rows.append((target, rep.first_failed, orc.invariant_factors, rep.cyclic == orc.cyclic, t1 - t0, t2 - t1))

print(f"{'target':12s} {'first failed':>12s} {'oracle':>8s} agree  criteria  oracle")
for target, ff, inv, agree, a, b in rows:
    print(f"{target:12s} {str(ff):>12s} {str(inv):>8s} {str(agree):5s} {a:7.2f}s {b:6.2f}s")

# the closed forms as printed reject the cyclic seed; the derived ones accept it
f = gen_p3(5, 1, "cyclic", 0)
for variant in ["derived", "literal", "y_coeff", "q_extra"]:
    print(variant, check_cyclic_p3(f, variant=variant).first_failed)
