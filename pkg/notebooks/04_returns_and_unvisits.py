# Return probabilities and the chance a vertex stays unvisited for t steps.
import math

from rigwalk import derive_params, sample_graph, theory, walk
from rigwalk.genrand import RngStream

params, q = derive_params(2000, 2.0, 1.0, seed=0)
_, g = sample_graph(params)
T, capped = walk.default_horizon(g)
print(f"horizon T = {T} (capped: {capped})")

t0, _ = theory.time_scales(q)
t = math.ceil(t0 / 4)
vs = RngStream(0, 0, "demo").generator().choice(g.n, size=5, replace=False)
emp = walk.unvisit_probability(g, vs, T, t, trials=5000)
for v, e in zip(vs, emp):
    rs = walk.return_stats(g, int(v), T, trials=2000)
    print(f"v={v:4d} deg={g.degree(int(v)):3d}  pbar={rs.pbar_v:.4f}  R={rs.R_T1:.4f}  "
          f"unvisited to t={t}: {e:.4f} vs (1+p_v)^-t = {walk.unvisit_prediction(rs.p_v, t):.4f}")

pair = walk.far_pair(g, min_dist=4)
if pair is not None:
    x, y = pair
    merged = walk.merge_vertices(g, x, y, min_dist=4)
    print(f"merged {x} and {y} into vertex {merged.kappa} of degree {merged.degree}")
