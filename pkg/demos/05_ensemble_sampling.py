"""
=============================
Sampling the pair ensembles
=============================

Draw 100000 pairs from each product preparation (seeded PCG64 streams) and
compare region frequencies with the exact weights. About a quarter of every
ensemble lands on (0+, 0+), where no instruction ever reports +1.
"""

from pbrcheck import INSTRUCTIONS, build_cabbolet_pair_model, draw_ensemble, empirical_instruction_stats
from pbrcheck.cabbolet import OVERLAP_PAIR
from pbrcheck.pbr import PRODUCT_PREPARATION_LABELS

model = build_cabbolet_pair_model()
for prep in PRODUCT_PREPARATION_LABELS:
    sample = draw_ensemble(model, prep, 100_000, seed=42)
    freq = sample.frequencies()[OVERLAP_PAIR]
    plus = [empirical_instruction_stats(i, sample) for i in INSTRUCTIONS]
    on_overlap = [empirical_instruction_stats(i, sample, region={OVERLAP_PAIR}) for i in INSTRUCTIONS]
    print(f"|{prep[0]}{prep[1]}>  overlap {freq:.4f}  +1 rates {[round(x, 3) for x in plus]}  on overlap {on_overlap}")
