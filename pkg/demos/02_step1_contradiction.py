"""
===========================================
No outcome left on the shared ontic state
===========================================

Pairs drawn from the four product preparations of the toy model all reach the
ontic state (0+, 0+). Each outcome of the entangled measurement is ruled out
by one of those preparations, so at that state nothing may happen.
"""

from pbrcheck import (
    build_cabbolet_pair_model,
    build_xi_basis,
    find_contradiction_witness,
    overlap_fraction_affected,
    product_preparations,
)
from pbrcheck.pbr import PRODUCT_PREPARATION_LABELS

model = build_cabbolet_pair_model()
witness = find_contradiction_witness(model, build_xi_basis(), product_preparations())

print("witness:", witness.ontic_label)
for outcome, (prep, prob) in witness.forbidden.items():
    print(f"  {outcome} ruled out by |{prep[0]}{prep[1]}>  (Born probability {prob:.1e})")

fractions = overlap_fraction_affected(model, {witness.ontic_label}, PRODUCT_PREPARATION_LABELS)
print("share of each ensemble at the witness:", fractions)
