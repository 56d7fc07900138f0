# %% [markdown]
# # Cohomology of configuration spaces of points in S^3
#
# The plain ring has classes w_ij^k in degree 2 and one odd class in degree
# 3.  The SO(4)-equivariant ring replaces the squares w^2 = 0 with c^2 = delta.

# %%
from prime_moduli import confcoh, galgebra

for d in range(1, 6):
    plain = confcoh.conf_ring(d, "plain").presentation.betti(10)
    so4 = confcoh.conf_ring(d, "so4").presentation.betti(10)
    print(f"d = {d}: plain {list(plain.ranks)}")
    print(f"       so4   {list(so4.ranks)}")

# %% [markdown]
# For three points the SO(4)-equivariant ring is a polynomial ring on one
# class of degree two, the cohomology of BSO(2).

# %%
R = confcoh.conf_ring(3, "so4")
c = R.triple(1, 2, 3)
print("c^2 == delta:", c ** 2 == R.delta())
print("ranks:", R.presentation.betti(12).nonzero())

# %% [markdown]
# The Groebner basis is computed by Buchberger's algorithm in exact
# arithmetic.  A closed-form generating set is also available.  Its mixed
# relations carry +delta, and that set passes the Buchberger criterion.

# %%
for d in range(3, 7):
    G = confcoh.closed_form_groebner_set(d)
    print(f"d = {d}: {len(G)} polynomials, Groebner = {galgebra.is_groebner(G)}")

# %% [markdown]
# Multiplication by delta is injective, so delta is a non-zero-divisor.

# %%
R = confcoh.conf_ring(5, "so4")
print(all(galgebra.is_injective_multiplication(R.presentation, R.delta(), 14).values()))

# %% [markdown]
# The symmetric group acts by relabelling points.

# %%
swap = confcoh.sym_action(4, "plain", (2, 1, 3, 4))
R4 = confcoh.conf_ring(4, "plain")
x = R4.triple(1, 2, 4) * R4.triple(1, 3, 4)
print(x.to_text(), "  ->  ", swap(x).to_text())
