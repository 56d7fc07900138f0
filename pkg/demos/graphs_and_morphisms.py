# %% [markdown]
# # Graphs, morphisms and the chain poset
#
# Objects of Gr_{g,n} are connected half-edge graphs of first Betti number g
# with n marked vertices.  Every unmarked vertex has valence at least three.
# A morphism collapses a forest and then relabels.

# %%
from prime_moduli import graphs

for g, n in [(2, 0), (1, 1), (0, 2), (3, 0)]:
    found = graphs.enumerate_graphs(g, n, no_redundant=True)
    orders = [len(graphs.automorphisms(mg)) for mg in found]
    print(f"Gr_{{{g},{n}}} without redundant edges: {len(found)} classes, |Aut| = {orders}")

# %% [markdown]
# The two genus-two graphs are the theta graph and the rose with two petals.
# Collapsing the middle edge of theta gives the rose.  Every morphism
# theta -> rose arises this way, up to automorphisms on either side.

# %%
theta, rose = graphs.theta(), graphs.rose2()
homs = graphs.hom_set(theta, rose)
print("|Hom(theta, rose)| =", len(homs))
print("collapsed edge of each morphism:", sorted({f.collapsed_edges() for f in homs}))

# %% [markdown]
# A morphism pulls tripods (ordered triples of half-edges at one vertex)
# back from the target.  On the rose, two of the tripods at its only vertex
# come from the two trivalent vertices of theta.

# %%
H, R = graphs.THETA_HALF_EDGES, graphs.ROSE2_HALF_EDGES
names_t = {v: k for k, v in H.items()}
names_r = {v: k for k, v in R.items()}
pull = graphs.tripod_pullback(graphs.theta_to_rose())
for t in [(R["h1"], R["h2"], R["h3"]), (R["h1"], R["h2"], R["h4"])]:
    print([names_r[h] for h in t], "->", [names_t[h] for h in pull[t]])

# %% [markdown]
# Relative first homology supplies the odd generators.  On theta the basis
# consists of the differences of the middle edge with the outer edges.

# %%
hom = graphs.relative_homology(theta)
print("rank", hom.rank, "basis", [[str(x) for x in v] for v in hom.basis])

# %% [markdown]
# Chains of non-isomorphisms modulo isomorphism form a finite poset.  In
# genus two it has three elements, and in genus three a few dozen.

# %%
for g in (2, 3):
    P = graphs.chain_poset(g, 0)
    print(f"g = {g}: {len(P.elements)} chains, depth {P.depth}, {len(P.relations())} relations")
