# Checking the structural properties of one sample, then pass rates over seeds.
import json

from rigwalk import derive_params, sample_graph, verify

params, q = derive_params(1000, 2.0, 1.0, seed=0)
b, g = sample_graph(params)
report = verify.property_report(b, g, q)
for name, v in report.to_dict()["verdicts"].items():
    print(f"{name:>3}: {v['verdict']:8s} statistic={json.dumps(v['statistic'])[:60]}")
for w in report.warnings:
    print("warning:", w)

print()
freq = verify.verify_frequencies(params, range(10), ("P0", "P1", "P4", "F9"))
for name, (ok, total) in freq.items():
    print(f"{name}: {ok}/{total}")
