# Sampling a random intersection graph and looking at what comes out.
import numpy as np

from rigwalk import derive_params, sample_graph
from rigwalk.model import edge_density
from rigwalk.verify import degree_profile

params, q = derive_params(1000, 2.0, 1.0, seed=0)
print(params)
print(f"realised c = {q.c:.5f}, kappa = {q.kappa:.4f}, cbar = {q.cbar:.4f}")

b, g = sample_graph(params)
print(f"links = {b.link_count}, expected n m p = {params.n * params.m * params.p:.1f}")

pI, pI_hat = edge_density(params)
print(f"edges = {g.edge_count}, expected = {pI * params.n * (params.n - 1) / 2:.1f}")

sizes = b.clique_sizes()
print("attribute clique sizes:", np.bincount(sizes)[:6], "largest", sizes.max())

prof = degree_profile(b, g, q)
print("degree counts around the mean:", {k: prof.D.get(k, 0) for k in range(18, 26)})
print(f"SMALL vertices: {len(prof.small_set)} of {g.n}")
