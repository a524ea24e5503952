"""
=================================
An antidistinguishing measurement
=================================

Build the four entangled outcome vectors, check that they form a basis, and
see which product preparation each outcome can never fire on.
"""

import numpy as np

from pbrcheck import build_xi_basis, born_probability, is_entangled, is_orthonormal_basis, product_preparations
from pbrcheck.qlinalg import gram_residual

xi = build_xi_basis()
np.set_printoptions(precision=4, suppress=True)
for label, vec in zip(xi.labels, xi):
    print(label, vec.amplitudes.real, "entangled:", is_entangled(vec))

print("orthonormal:", is_orthonormal_basis(xi), "gram residual:", gram_residual(xi))

# rows: outcomes, columns: |00>, |0+>, |+0>, |++>
preps = product_preparations()
table = np.array([[born_probability(v, s) for s in preps.values()] for v in xi])
print(table)
# the zero diagonal is what makes every outcome exclude one preparation
