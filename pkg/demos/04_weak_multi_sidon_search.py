# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Searching for weak-but-not-multi-Sidon families
#
# Every multi-Sidon family is weak multi-Sidon. Whether the converse holds is
# open, so this search only logs candidates: random families that pass the
# weak test while failing the multi-Sidon test. Families with a repeated
# member are not candidates: the definition asks for distinct members.

# %%
import numpy as np

from multisidon.field import Extension, make_field
from multisidon.sidon import SubspaceFamily, is_multi_sidon, is_weak_multi_sidon
from multisidon.subspace import random_subspace

SEED = 2024
TRIALS = 150
FIELDS = [(2, 4), (2, 6), (3, 4), (3, 6)]

# %%
rng = np.random.default_rng(SEED)
log = []
for p, n in FIELDS:
    ext = Extension(make_field(p, n), p)
    stats = {"field": ext.field.spec, "families": 0, "multi": 0, "weak": 0, "candidates": []}
    for _ in range(TRIALS):
        k = int(rng.integers(2, n // 2 + 1))
        r = int(rng.integers(2, 4))
        fam = SubspaceFamily.of([random_subspace(ext, k, rng) for _ in range(r)])
        multi, weak = bool(is_multi_sidon(fam)), bool(is_weak_multi_sidon(fam))
        if multi and not weak:
            raise AssertionError("multi-Sidon family failed the weak test")
        stats["families"] += 1
        stats["multi"] += multi
        stats["weak"] += weak
        if weak and not multi:
            stats["candidates"].append([list(U.rows) for U in fam])
    log.append(stats)
    print({k: (len(v) if k == "candidates" else v) for k, v in stats.items()})

# %% [markdown]
# Candidates, if any, are printed in full for follow-up.

# %%
for stats in log:
    for fam in stats["candidates"]:
        print(stats["field"], fam)
