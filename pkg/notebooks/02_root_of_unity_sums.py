"""
Sums of roots of unity over distinct indices
============================================

Sigma_lambda(ell) adds zeta^(i_1 l_1 + ... + i_r l_r) over tuples of
distinct residues mod ell.  Brute force lives in Z[x]/Phi_ell; the formula
sums over set partitions whose blocks have lambda-sum divisible by ell.
"""

import numpy as np

from eisenstein.cyclosum import Partition, connected_signed_count, sigma_direct, sigma_formula

# a few values both ways
for parts, ell in [((3,), 3), ((1, 1), 2), ((2, 1, 1), 2), ((1, 1, 1), 3), ((3, 1), 4)]:
    lam = Partition(parts)
    print(parts, ell, sigma_direct(lam, ell), sigma_formula(lam, ell))

# pairs: Sigma_(a,b) = delta_a delta_b - delta_(a+b), so (k, 1) gives -ell when ell | k+1
ells = np.arange(2, 9)
row = [sigma_formula((4, 1), int(e)) for e in ells]
print("Sigma_(4,1)(ell) for ell = 2..8:", row)

# scaling every part by p does not change the sum when ell is prime to p
lam = Partition.of(2, 1, 1)
print([sigma_formula(lam, e) == sigma_formula(lam.scaled(5), e) for e in (2, 3, 4, 6)])

# the single-block coefficient is the signed count of connected graphs
print([connected_signed_count(v) for v in range(1, 6)])
