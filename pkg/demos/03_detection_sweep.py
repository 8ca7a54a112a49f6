# %% [markdown]
# Training the parity classifier under gate noise while adding syndrome rounds.
# A reduced grid keeps this to a few minutes; `ftqml sweep` runs the full one.

# %%
from ftqml.sweep import SweepConfig, compare, extract_threshold, sweep
from ftqml.trainer import TrainConfig

cfg = SweepConfig(
    base=TrainConfig.parity(),
    models=("gate",),
    p_grid=(0.001, 0.0025, 0.0075),
    rounds_grid=(0, 2, 4),
    seeds=tuple(range(5)),
)
summary = sweep(cfg)

# %%
for c in summary.cells:
    print(f"p={c.p:<7} rounds={c.rounds}  final={c.mean:.3f} +- {c.std:.3f}")

# %% [markdown]
# Gain from two rounds at the lowest rate, and the resulting threshold.

# %%
lo = 0.001
print(compare(summary.cell("gate", lo, 2).finals, summary.cell("gate", lo, 0).finals))
try:
    print("threshold:", extract_threshold(summary, "gate"))
except ValueError as exc:
    print(exc)

# %% [markdown]
# Optional plot, if matplotlib is around.

# %%
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    for p in cfg.p_grid:
        rs = cfg.rounds_grid
        plt.errorbar(rs, [summary.cell("gate", p, r).mean for r in rs],
                     [summary.cell("gate", p, r).std for r in rs], label=f"p={p}", capsize=3)
    plt.xlabel("syndrome rounds")
    plt.ylabel("mean final accuracy")
    plt.legend()
    plt.savefig("detection_sweep.png", dpi=120)
