# Paired cover times against an Erdos-Renyi graph of the same edge density.
from rigwalk import derive_params
from rigwalk.experiments import compare

params, _ = derive_params(2000, 2.0, 1.0)
rows = compare(params, range(10), trials=20)
for r in rows:
    print(f"seed {r.seed}: intersection {r.cover_rig:9.1f}  ER {r.cover_er:9.1f}  slower: {r.winner}")
print(f"intersection graph slower in {sum(r.winner == 'rig' for r in rows)} of {len(rows)} pairs")
