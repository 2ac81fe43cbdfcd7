# coding: utf-8
# # Exponent and budget tables

# %%
from qmclaw.harness import bound_table, sha3_table

for row in bound_table(8):
    print(row["l"], row["ours"], row["ours_decimal"], row["hsx"], row["hsx_decimal"])

# %% [markdown]
# log2 of the query budget for a 512-bit range. Computed in log space,
# since 2^512 does not fit in a float exponent comfortably.

# %%
for l, bits in sha3_table().items():
    print(l, bits)
