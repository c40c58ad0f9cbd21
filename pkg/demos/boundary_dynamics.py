# Boundary of the free group F2: measures pushed to a point, dense orbits, no fixed open sets.
# Run: python demos/boundary_dynamics.py

# %%
from fractions import Fraction

from pnaive.boundary import (
    EndMeasure,
    minimality_check,
    proximality_run,
    push_measure,
    random_end,
    topological_freeness_check,
)
from pnaive.models import FreeGroup

F = FreeGroup(2)

# %% two three-atom measures and a target end
mu1 = EndMeasure.make(zip([random_end(F, i) for i in range(3)], (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))))
mu2 = EndMeasure.make(zip([random_end(F, i) for i in range(3, 6)], (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))))
zeta = random_end(F, "target")

# %% one loxodromic with repelling end off the atoms and attracting end near zeta does the job
trace = proximality_run(F, mu1, mu2, zeta, depth=3)
print("target cylinder", trace.target.prefix, "avoiding", trace.repelling_cylinder.prefix)
print("loxodromic", trace.loxodromic)
for g, (m1, m2) in zip(trace.elements, trace.masses):
    print(f"  {str(g):>24}  mass {m1}, {m2}")
print("pushed atoms:", [e for e, _ in push_measure(trace.elements[-1], mu1).atoms])

# %% every depth-2 cylinder is reached from a single end
rep = minimality_check(F, random_end(F, 42), 2)
print("minimal at depth 2:", rep.passed, "longest steering word", max(len(g) for _, g in rep.witnesses))

# %% fixed ends of a and of ab sit inside exactly two cylinders
for w in ("a", "ab", "aB"):
    rep = topological_freeness_check(F.parse(w), 4)
    print(f"{w:>5}: fixed in {[c.prefix for c in rep.fixed_cylinders]}")
