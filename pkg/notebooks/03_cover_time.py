# Cover time by exact dynamic programming on tiny graphs and by simulation on sampled ones.
from rigwalk import derive_params, sample_graph, theory, walk
from rigwalk.model import complete_graph, cycle_graph, path_graph

for name, g in (("C8", cycle_graph(8)), ("K4", complete_graph(4)), ("P6", path_graph(6))):
    exact = walk.exact_cover_time(g, 0)
    mc = walk.estimate_cover_time(g, starts=[0], trials_per_start=20_000).c_empirical
    print(f"{name}: exact {exact:.4f}, simulated {mc:.4f}")

print()
for n in (1000, 2000, 4000):
    params, q = derive_params(n, 2.0, 1.0, seed=1)
    _, g = sample_graph(params)
    est = walk.estimate_cover_time(g, trials_per_start=50, master=1)
    pred = theory.cover_prediction(q)
    print(f"n={n}: simulated {est.c_empirical:9.1f}  predicted {pred:9.1f}  ratio {est.c_empirical / pred:.3f}")
