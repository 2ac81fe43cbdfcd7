# coding: utf-8
# # Measuring the query exponent
#
# Run seeded trials at several N, then fit log(mean queries) against log N.

# %%
from qmclaw.harness import SweepConfig, fit_exponent, format_records, run_sweep

cfg = SweepConfig("mclaw", l=2, N=[2**e for e in range(10, 21, 2)], trials=50, seed=42)
records = run_sweep(cfg)
print(format_records(records))

# %%
fit = fit_exponent(records)
print(f"slope {fit.slope:.4f}, theory {fit.theory_exponent} (+- {fit.tolerance})")
print("within tolerance:", fit.within_tolerance)

# %% [markdown]
# Success rates come with a Wilson interval.

# %%
for r in records:
    lo, hi = r.success_interval()
    print(r.N, f"{r.successes}/{r.trials}", f"[{lo:.3f}, {hi:.3f}]")
