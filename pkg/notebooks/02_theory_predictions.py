# Closed-form cover-time predictions and the lambda constants.
from rigwalk import theory
from rigwalk.model import derive_params

for n in (10**3, 10**4, 10**6):
    _, q = derive_params(n, 2.0, 1.0)
    fam = theory.lambda_family(n, q.c, q.np)
    t0, t1 = theory.time_scales(q)
    print(f"n={n:>8}  cover ~ {theory.cover_prediction(q):12.1f}  "
          f"ER at same density ~ {theory.er_same_density_prediction(q):12.1f}  "
          f"lambda={fam.lam:.5f}  t0={t0:.0f}  t1={'undefined' if t1 is None else f'{t1:.0f}'}")

print()
print("ratio of lambda to the ER constant at the same density:")
for c in theory.FIGURE1_C:
    print(f"  c={c:>4}: " + "  ".join(f"np={x}: {theory.figure1_ratio(x, c):.3f}" for x in (0.1, 1, 5, 30)))

_, q = derive_params(1000, 2.0, 1.0)
print()
print("expected degree counts Dbar(k) near the mode:")
for k in range(18, 26):
    print(f"  k={k}: {theory.dbar_k(k, q):7.2f}")
