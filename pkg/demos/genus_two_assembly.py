# %% [markdown]
# # Rational cohomology of BDiff+ of the genus-two connected sum
#
# The computation runs in three steps.
#
# 1. Take invariants of each graph ring under the automorphisms of a chain.
# 2. Restrict along the morphism theta -> rose.
# 3. Take derived limits over the three-element chain poset.

# %%
from prime_moduli import graphs, hgamma, limits

theta_ring = hgamma.build_ring(graphs.theta())
rose_ring = hgamma.build_ring(graphs.rose2())
print(theta_ring.presentation)
print(rose_ring.presentation)

# %% [markdown]
# Invariants under the full automorphism group of theta, under the
# stabilizer of the middle edge, and under the dihedral group of the rose.

# %%
D = 20
for label, ring, group in [("theta, S3xC2", theta_ring, "s3xc2"), ("theta, C2xC2", theta_ring, "c2xc2"), ("rose, D8", rose_ring, "d8")]:
    action = limits.group_action(ring, limits.named_group(ring.graph, group))
    print(f"{label:>14}: {limits.invariant_betti(ring.presentation, action, D).nonzero()}")

# %% [markdown]
# Pulling back along theta -> rose identifies the D8-invariants with the
# C2xC2-invariants, degree by degree.

# %%
t = hgamma.theta_classes(theta_ring)
r = hgamma.rose_classes(rose_ring)
_, pi_star, _, _ = limits.pi_star_on_invariants(8)
for name, target in [("alpha1", "gamma1"), ("eta1", "epsilon"), ("alpha2", "gamma2"), ("nu2", "mu2")]:
    image = pi_star(r[name])
    sign = "+" if image == t[target] else "-" if image == -t[target] else "?"
    print(f"pi*({name}) = {sign}{target}")

# %% [markdown]
# The derived limits: lim^1 vanishes and lim^0 is the answer.

# %%
betti, report = limits.assemble_u2(40)
print("Betti:", betti.nonzero())
print("lim^1 = 0:", report["lim1_zero"], " pi* iso:", report["pi_star_iso"])
for row in report["relations_checked"]:
    print(f"  {row['product']:>15} = {row['normal_form']}")

# %% [markdown]
# In genus three the chain poset has depth three.  Only the E_2 page is
# computed, and the report says so.

# %%
e2 = limits.e2_page(3, 0, 2)
print(e2.note)
for p in range(e2.table.depth + 1):
    print(f"lim^{p}:", e2.table.lim(p))
