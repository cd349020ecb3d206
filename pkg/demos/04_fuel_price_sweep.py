"""Sensitivity of the equilibrium to the fuel price.

At today's fuel prices gasoline energy per km costs roughly twice the
electric rate, so gasoline drivers value the short crossing most.  As
fuel gets cheaper the two classes gradually swap roles: gasoline
traffic drifts to the long ring roads and electric traffic takes over
the crossing.  The swap happens over a narrow band of fuel prices set
by where gasoline's per-km energy cost crosses the electric one.
"""

import numpy as np

from evwardrop import (
    ChargingScenario,
    ClassParams,
    build_parallel_network,
    sweep_fuel_price,
)

net = build_parallel_network()
params = ClassParams()
sc = ChargingScenario(n=2, eta=[0.01, 0.01], ell0=[16.7, 25.6])

grid = [round(v, 2) for v in np.arange(0.50, 1.61, 0.02)]
results = sweep_fuel_price(net, params, sc, grid)

print(f"{'fuel':>6} {'ev on a':>8} {'gv on a':>8} {'price':>8}")
for lam_g, res in zip(grid, results):
    if abs(lam_g * 100 - round(lam_g * 100)) < 1e-9 and round(lam_g * 100) % 10 == 0:
        print(f"{lam_g:6.2f} {res.flows.matrix[0, 0]:8.3f} "
              f"{res.flows.matrix[0, 1]:8.3f} {res.unit_price:8.4f}")

ev_a = np.array([r.flows.matrix[0, 0] for r in results])
gv_a = np.array([r.flows.matrix[0, 1] for r in results])
swap = [g for g, e in zip(grid, ev_a) if e > 1e-6]
print()
print(f"electric vehicles first appear on the crossing at fuel price "
      f"{max(swap):.2f} EUR/L and below")
print("(the energy-cost tie sits at lambda_g = m_e/m_g * lambda_e, with the")
print("unit price between 0.221 and 0.237 EUR/kWh this is 0.74-0.79 EUR/L)")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.5, 3.8))
    ax.plot(grid, ev_a, label="electric on crossing")
    ax.plot(grid, gv_a, label="gasoline on crossing")
    ax.set_xlabel("fuel price (EUR/L)")
    ax.set_ylabel("flow on arc a")
    ax.legend()
    fig.tight_layout()
    fig.savefig("demos/04_fuel_price_sweep.png", dpi=120)
    print("wrote demos/04_fuel_price_sweep.png")
except ImportError:
    print("matplotlib not installed; skipping the figure")
