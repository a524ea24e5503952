"""
==========================================
Local parity instructions vs. the Born rule
==========================================

The +1 outcome of M1' (measure A on both halves, +1 if the answers differ)
is the coarse-graining of |01> and |10>. On |01> it fires with certainty,
while the entangled outcome xi1 would fire only half the time.
"""

from pbrcheck import INSTRUCTIONS, born_mismatch, build_xi_basis, plus_one_effect
from pbrcheck.cabbolet import default_test_state

xi = build_xi_basis()
for instr, vec in zip(INSTRUCTIONS, xi):
    basis, effect = plus_one_effect(instr)
    members = [basis.labels[i] for i in sorted(effect.member_indices)]
    report = born_mismatch(instr, vec, default_test_state(instr))
    print(
        f"{instr.name}: +1 = {members}  "
        f"operational {report.operational_prob:.3f}  xi {report.entangled_born_prob:.3f}  "
        f"gap {report.discrepancy:.3f}"
    )
