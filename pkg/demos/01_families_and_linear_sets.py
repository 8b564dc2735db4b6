# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Multi-Sidon families and their linear sets
#
# We build a two-member monomial family in F_81 over F_3, check it is
# multi-Sidon along three independent routes, and look at the linear set
# defined by the product U_1 x U_2 in PG(1, 81).

# %%
from multisidon.construct import find_monomial_params, monomial_family
from multisidon.linset import (heavy_points_analysis, hyperplane_weights, max_rank_spectrum_formula,
                               product_space, weight_spectrum)
from multisidon.sidon import canonical_form, is_multi_sidon, is_weak_multi_sidon, poly_criterion

P = find_monomial_params(q=3, t=2, s=1, r=2)
fam = monomial_family(P)
print(P.to_dict())
print([list(U.rows) for U in fam])

# %% [markdown]
# The orbit route scans one alpha per F_q-class; the polynomial route reads
# the same intersections off kernels of linearized polynomials.

# %%
print("orbit route:", is_multi_sidon(fam).to_dict())
print("polynomial route:", bool(poly_criterion(canonical_form(fam))))
print("weak multi-Sidon:", bool(is_weak_multi_sidon(fam)))

# %% [markdown]
# Every point of the product linear set has weight 1 except the two
# coordinate points, which carry the full member dimension.

# %%
V = product_space(list(fam))
spec = weight_spectrum(V)
print(spec.to_dict())
print(max_rank_spectrum_formula(3, 4, 2))
print(heavy_points_analysis(V).to_dict())

# %% [markdown]
# Dualizing turns the point spectrum into a hyperplane spectrum with three
# values.

# %%
print(hyperplane_weights(V).to_dict())
