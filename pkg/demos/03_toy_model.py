"""
========================
The four-region toy model
========================

Single systems sit in one of four regions; each region fixes the answers of
A (z basis) and B (x basis). The model reproduces the single-system
statistics of |0> and |+>, and its two preparations overlap on region 0+.
"""

from pbrcheck import build_cabbolet_model, predicted_probability, supports_overlap
from pbrcheck.ontology import classify

model = build_cabbolet_model()
print("ontic space:", model.space.states)
for prep in model.preparations:
    for meas, resp in model.measurements.items():
        probs = {k: predicted_probability(model, prep, meas, k) for k in resp.outcomes}
        print(f"|{prep}>  {meas}: {probs}")

print("overlap of supports:", supports_overlap(model.preparation("0"), model.preparation("+")))
print("classification:", classify(model))
print(model.dumps(indent=1))
