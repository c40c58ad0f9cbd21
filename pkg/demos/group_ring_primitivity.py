# The (*) condition behind primitivity of group rings, checked by brute force in F2.
# Run: python demos/group_ring_primitivity.py

# %%
from pnaive.certify import elementary_closure, noloops_bound, star_property_check, star_run
from pnaive.models import FreeGroup

F = FreeGroup(2)
M = [F.parse(w) for w in ("a", "b", "ab", "Ab")]

# %% a loxodromic u whose elementary closure misses M, spacing N from the no-loops window
run = star_run(M, ms=(2, 3))
print("u =", run.u, " E(u) =", elementary_closure(run.u).describe(), " N =", run.N)
for m, res in run.results:
    print(f"  m={m}: {res.cases} products, {'none' if res.passed else 'some'} equal to 1")

# %% with a^-1 in M, a careless triple admits a product of conjugates equal to 1
M_plus = M + [F.parse("A")]
bad = star_property_check(M_plus, 2, triple=[F.identity, F.parse("a"), F.parse("b")])
gs, xs = bad.witness
print("triple (1, a, b):", [str(g) for g in gs], "conjugated by indices", xs)

# %% the spaced triple u^N, u^2N, u^3N keeps working
u = star_run(M_plus, ms=(2,)).u
N = noloops_bound(u, M_plus, 2)
print("u =", u, "N =", N, "m=2 passes:", star_property_check(M_plus, 2, u, N).passed)
