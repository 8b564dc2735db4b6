# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Equivalence of families and codes
#
# Two families are equivalent when a permutation, nonzero scalars and a field
# automorphism carry one onto the other. We plant such a map, recover it,
# then compare the monomial clause test with the generic search.

# %%
from multisidon.construct import find_monomial_params, monomial_equivalence, monomial_family, roth_code_params
from multisidon.sidon import EquivalenceWitness, family_equivalence

fam = monomial_family(find_monomial_params(3, 2, 1, 2))
planted = EquivalenceWitness(sigma=(1, 0), lambdas=(5, 17), rho=2)
target = planted.apply(fam)
found = family_equivalence(fam, target)
print(found.to_dict(), found.validates(fam, target))

# %% [markdown]
# For t >= 3 the clause test decides equivalence of monomial families
# without a search. Here the twists s = 1 and s = 2 give inequivalent codes
# in F_(3^10).

# %%
A, B = roth_code_params(3, 5, 1), roth_code_params(3, 5, 2)
print(monomial_equivalence(A.as_monomial(), B.as_monomial()))
print(family_equivalence(A.family(), B.family()))
