"""How the charging scheduler fills time slots.

Walks a two-slot day (night 16.7 kWh, day 25.6 kWh of nonflexible load)
through growing fleet charging needs and shows the water-filling shape:
the cheap slot fills alone until the activation threshold, then both
slots rise together at equal marginal cost.  Saves a figure next to
this script when matplotlib is available.
"""

import numpy as np

from evwardrop import (
    ChargingScenario,
    charging_unit_price,
    energy_thresholds,
    optimal_cost,
    schedule_charging,
)

sc = ChargingScenario(n=2, eta=[0.01, 0.01], ell0=[16.7, 25.6])

print("slot activation thresholds (kWh):", energy_thresholds(sc))
print()
print(f"{'need':>6} {'slot 1':>8} {'slot 2':>8} {'cost':>8} {'price':>8}")
needs = [0.0, 2.0, 5.0, 8.9, 12.0, 20.0, 30.0]
for L in needs:
    s = schedule_charging(sc, L)
    print(
        f"{L:6.1f} {s.ell_e[0]:8.2f} {s.ell_e[1]:8.2f} "
        f"{s.value:8.3f} {s.unit_price:8.4f}"
    )

print()
print("the first 8.9 kWh go entirely into the night slot; beyond that the")
print("two total loads stay equal:", end=" ")
s = schedule_charging(sc, 20.0)
print(f"{16.7 + s.ell_e[0]:.2f} kWh vs {25.6 + s.ell_e[1]:.2f} kWh")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    grid = np.linspace(0.0, 30.0, 301)
    fills = np.array([schedule_charging(sc, float(L)).ell_e for L in grid])
    cost = np.array([optimal_cost(sc, float(L)) for L in grid])
    price = np.array([charging_unit_price(sc, float(L)) for L in grid])

    fig, axes = plt.subplots(1, 3, figsize=(13, 3.6))
    axes[0].plot(grid, 16.7 + fills[:, 0], label="slot 1 total")
    axes[0].plot(grid, 25.6 + fills[:, 1], label="slot 2 total")
    axes[0].axvline(8.9, ls=":", c="gray")
    axes[0].set_xlabel("charging need (kWh)")
    axes[0].set_ylabel("slot load (kWh)")
    axes[0].legend()
    axes[1].plot(grid, cost)
    axes[1].set_xlabel("charging need (kWh)")
    axes[1].set_ylabel("total cost (EUR)")
    axes[2].plot(grid, price)
    axes[2].set_xlabel("charging need (kWh)")
    axes[2].set_ylabel("unit price (EUR/kWh)")
    fig.tight_layout()
    fig.savefig("demos/01_water_filling.png", dpi=120)
    print("wrote demos/01_water_filling.png")
except ImportError:
    print("matplotlib not installed; skipping the figure")
