# Ping-pong partners in PSL(2,Z) = Z/2 * Z/3, acting on its Bass-Serre tree.
# Run: python demos/partner_in_the_modular_group.py

# %%
from pnaive.certify import path_quasigeodesic_check
from pnaive.isometry import classify, fix_set, fixed_ends, translation_length
from pnaive.models import FreeProduct
from pnaive.partner import PipelineParams, pnaive_pipeline

G = FreeProduct((2, 3))
s, t = G.parse("s"), G.parse("t")

# %% the two generators are elliptic, st translates by 2
for g in (s, t, s * t):
    rep = classify(g)
    print(f"{str(g):>5}: {rep.kind.value:10} translation length {rep.translation_length}")

# %% each finite factor fixes exactly one vertex: its quasi-fixed set has no boundary
for H in (s, t):
    fs = fix_set([H], 0, 6, 3)
    print(f"Fix(<{H}>) = {[x.coords for x in fs.sites]}, boundary trace {sorted(fs.boundary_closure)}")

# %% full pipeline: gamma, the power N, and one certificate per subgroup
res = pnaive_pipeline(G, [["s"], ["t"]], PipelineParams(syllable_bound=8, exponent_bound=3))
pr = res.partner
print("gamma =", pr.gamma, " ends:", fixed_ends(pr.gamma))
print(f"Delta = {pr.Delta}, C = {pr.C}, N = {pr.power_N}, l(gamma^N) = {translation_length(pr.gammaN)}")
for c in res.certificates:
    print(f"  <{', '.join(map(str, c.subgroup))}>: {c.status} on {c.words_checked} words via {'+'.join(c.oracles)}")

# %% the broken path of one certified word is an honest geodesic in the tree
rep = path_quasigeodesic_check(pr.gammaN, [s], [s, 2, s, -1, s, 3], Delta=pr.Delta)
print("segments", rep.segment_lengths, "chain", rep.chain_length, "= endpoint distance", rep.endpoint_distance)

# %% an elliptic impostor is caught with a short relation
from pnaive.certify import freeness_certificate

bad = freeness_certificate(s, [s])
print("gamma = s:", bad.status, "witness", bad.witness_str())
