# %% [markdown]
# Depolarizing noise after every rotation flattens the loss of a layered
# classifier. Same seeds, same data, same initial parameters; only p changes.

# %%
import numpy as np

from ftqml.noisechan import depol_from_gate_error, effective_gate_error
from ftqml.trainer import TrainConfig, train

for p in (0.0, 1.99e-3, 5.11e-3, 2e-2):
    g = []
    for seed in range(3):
        cfg = TrainConfig.qvc(p_depol=p, seed=seed, shots=0, iterations=3, n_samples=100)
        g.append(np.mean(train(cfg).avg_sq_gradient))
    print(f"p_depol={p:<8} gate error={effective_gate_error(p):.2e}  mean sq gradient={np.mean(g):.3e}")

# %% [markdown]
# The depolarizing strength matching a target benchmarked gate error.

# %%
print(depol_from_gate_error(1.33e-3))
