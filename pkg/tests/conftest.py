import math

import numpy as np
import pytest

from evwardrop.charging import ChargingScenario
from evwardrop.network import ClassParams, build_parallel_network


@pytest.fixture
def city_network():
    """Three parallel routes: 30 km crossing plus two ring roads."""
    return build_parallel_network()


@pytest.fixture
def city_params():
    return ClassParams()


@pytest.fixture
def city_scenario():
    """Two slots, quadratic costs, average French-household day."""
    return ChargingScenario(n=2, eta=[0.01, 0.01], ell0=[16.7, 25.6])


def random_scenario(rng: np.random.Generator, t_max: int = 6) -> ChargingScenario:
    T = int(rng.integers(1, t_max + 1))
    n = float(rng.choice([2.0, 3.0]))
    return ChargingScenario(
        n=n,
        eta=rng.uniform(0.005, 0.05, T),
        ell0=rng.uniform(0.0, 50.0, T),
    )


def brute_force_schedule_value(sc: ChargingScenario, L_e: float) -> float:
    """Reference optimum via a general constrained minimizer.

    Independent of the closed-form solution path: minimizes the slot
    costs directly with SLSQP from two feasible starts.
    """
    import warnings

    from scipy.optimize import minimize

    eta = np.asarray(sc.eta)
    ell0 = np.asarray(sc.ell0)
    n = sc.n
    T = len(eta)

    def f(l):
        return float(np.sum(eta * (ell0 + l) ** n))

    def grad(l):
        return n * eta * (ell0 + l) ** (n - 1)

    cons = [{
        "type": "eq",
        "fun": lambda l: np.sum(l) - L_e,
        "jac": lambda l: np.ones(T),
    }]
    marg = n * eta * ell0 ** (n - 1)
    starts = [np.full(T, L_e / T), np.eye(T)[int(np.argmin(marg))] * L_e]
    best = math.inf
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for start in starts:
            res = minimize(
                f, start, jac=grad, method="SLSQP",
                bounds=[(0.0, L_e)] * T, constraints=cons,
                options={"maxiter": 300, "ftol": 1e-16},
            )
            best = min(best, f(np.maximum(res.x, 0.0)))
    return best
