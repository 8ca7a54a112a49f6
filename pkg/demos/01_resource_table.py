# %% [markdown]
# Surface-code cost of a layered variational circuit on 10 logical qubits.
# Each algorithmic qubit gets three patches (data plus routing), every rotation
# is synthesised from T gates, and the T gates come from a distillation unit.

# %%
from ftqml import costmodel as cm
from ftqml.noisechan import TCountScaling

params = cm.CodeParams(p_phys=1e-3)

# %% [markdown]
# The four calibration rows, with the fixture factory pinned per budget.

# %%
print(f"{'budget':>8} {'layers':>6} {'d':>3} {'eps_L':>9} {'data':>6} {'cycles':>6} {'ms':>6}")
for item in cm.table1_estimates(params):
    row, est = item["row"], item["estimate"]
    print(f"{row['budget']:>8g} {row['layers']:>6} {est.code_distance:>3} {est.epsilon_L:>9.2e} "
          f"{est.data_qubits:>6} {est.n_logical_cycles:>6} {est.runtime_ms:>6.1f}")

# %% [markdown]
# Free selection over the catalog. At 100 layers under the tight budget the T
# count outgrows every entry with either scaling, which is why the calibration
# rows pin their factory.

# %%
for layers in (50, 100):
    shape = cm.CircuitShape(layers=layers)
    for scaling in TCountScaling:
        try:
            est = cm.estimate(shape, 1e-4, params, scaling=scaling)
            print(layers, scaling.value, est.distillation, est.n_t_gates, f"{est.total_qubits:.3g}")
        except cm.InfeasibleBudget as exc:
            print(layers, scaling.value, "infeasible:", exc)

# %% [markdown]
# Skipping distillation altogether shrinks the factory to a few patches but
# leaves the raw physical error on every T gate.

# %%
raw = cm.estimate(cm.CircuitShape(), 1e-3, params, distill=False)
print(raw.table())
