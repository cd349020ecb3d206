"""When is the charging unit price increasing in the total need?

The unit price averages the total electricity cost over all energy, so
with a very skewed nonflexible profile the first charged kWh can pull
the average DOWN: cheap valley capacity gets blended into the bill.
The closed-form test compares a normalized profile statistic against
the cost exponent; this script shows one profile on each side of the
boundary and corroborates the verdicts with a numerical slope scan.
"""

import numpy as np

from evwardrop import (
    ChargingScenario,
    is_price_increasing,
    price_derivative_sign_scan,
    unit_price_curve,
)

smooth = ChargingScenario(n=2, eta=[0.01, 0.01], ell0=[16.7, 25.6])
skewed = ChargingScenario(n=2, eta=[0.01, 0.01], ell0=[1.0, 3.0])

for name, sc in [("smooth day", smooth), ("skewed day", skewed)]:
    verdict = is_price_increasing(sc)
    scan = price_derivative_sign_scan(sc, L_max=6.0, grid_points=600)
    negatives = sum(1 for _, s in scan if s < 0)
    print(
        f"{name}: ratio {verdict.ratio:.4f} vs n = {sc.n:.0f} -> "
        f"increasing = {verdict.increasing} "
        f"(slope scan finds {negatives} negative points)"
    )

print()
print("for two uniform-cost quadratic slots the verdict reduces to")
print("slot2/slot1 <= 1 + sqrt(2) ~= 2.414:")
for hi in (2.0, 2.4, 2.5, 3.0):
    sc = ChargingScenario(n=2, eta=[0.01, 0.01], ell0=[1.0, hi])
    print(f"  ratio of slots {hi:.1f} -> increasing = {is_price_increasing(sc).increasing}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 3.6))
    grid = np.linspace(0.0, 6.0, 400)
    ax.plot(grid, unit_price_curve(smooth, grid) / 0.2208, label="smooth day (scaled)")
    ax.plot(grid, unit_price_curve(skewed, grid) / unit_price_curve(skewed, [0.0])[0],
            label="skewed day (scaled)")
    ax.set_xlabel("charging need (kWh)")
    ax.set_ylabel("unit price / price at zero need")
    ax.legend()
    fig.tight_layout()
    fig.savefig("demos/02_price_monotonicity.png", dpi=120)
    print("wrote demos/02_price_monotonicity.png")
except ImportError:
    print("matplotlib not installed; skipping the figure")
