# A Fuchsian example on the upper half-plane: floating point, estimates only.
# Run: python demos/hyperbolic_plane_estimates.py

# %%
import math

import numpy as np

from pnaive.hypspace import delta_estimate, distance, geodesic
from pnaive.isometry import classify
from pnaive.models import HalfPlane

H = HalfPlane([[[2, 1], [1, 1]], [[1, 1], [1, 2]]])

# %% four-point defect from seeded samples, against the thin-triangle constant
est = delta_estimate(H, 2, sample_count=1000, seed=0)
print(f"delta estimate {est.value:.4f} from {est.quadruples} quadruples; ln(1+sqrt2) = {math.log(1 + math.sqrt(2)):.4f}")

# %% translation lengths from traces
for w in ("a", "b", "ab", "aB"):
    rep = classify(H.parse(w))
    print(f"{w:>3}: {rep.kind.value}, length {rep.translation_length:.4f} (approximate={rep.approximate})")

# %% sampled geodesic: consecutive gaps are equal
x, y = H.basepoint, H.act(H.parse("ab"), H.basepoint)
path = geodesic(x, y, samples=8)
gaps = np.array([distance(p, q) for p, q in zip(path, path[1:])])
print("gaps", np.round(gaps, 6), "sum", gaps.sum().round(6), "d(x,y)", round(distance(x, y), 6))
