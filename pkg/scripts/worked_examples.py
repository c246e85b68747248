"""Run the standard example systems and print the key numbers.

    python scripts/worked_examples.py
"""
import math

import numpy as np

from ltikit import (
    Constant,
    StateSpaceModel,
    bibo_integral,
    classify,
    controllability_gramian,
    deadbeat_gain,
    equilibrium,
    lqr,
    lyapunov_check,
    observability_gramian,
    simulate_continuous,
    simulate_discrete,
)

np.set_printoptions(precision=6, suppress=True)


def rotation(omega):
    return StateSpaceModel.continuous([[0, omega], [-omega, 0]], [[0], [1]], [[1, 1]])


def double_integrator():
    return StateSpaceModel.discrete([[1, 1], [0, 1]], [[0], [1]], [[1, 1]])


def section(title):
    print(f"\n== {title}")


def main():
    section("rotation plant, unit step from (1, 0), omega = 2")
    tr = simulate_continuous(rotation(2.0), [1, 0], Constant(1.0), 0.0, 5.0, 100)
    for k in (0, 20, 100):
        print(f"t={tr.times[k]:.2f}  x={tr.states[k]}  y={tr.outputs[k, 0]:.6f}")

    section("double integrator, unit step from (1, 0)")
    tr = simulate_discrete(double_integrator(), [1, 0], Constant(1.0), 5)
    for t, x, y in zip(tr.times, tr.states, tr.outputs[:, 0]):
        print(f"t={int(t)}  x={x}  y={y:g}")

    section("stability of the rotation plant")
    m = rotation(2.0)
    x_bar = equilibrium(m, [1.0])
    rep = classify(m, P=np.eye(2), x_bar=x_bar)
    print("equilibrium", x_bar, "class", rep.classification.value)
    print("Lyapunov verdict", lyapunov_check(m, x_bar, np.eye(2)).verdict.value)
    prof = bibo_integral(m, 3 * math.pi, 7)
    print("impulse-response integral at full periods", prof.integral_values[::2, 0, 0])
    print("verdict", prof.verdict.value, "via", prof.method)

    section("Gramians")
    print("W(0, pi), omega = 1\n", controllability_gramian(rotation(1.0), 0.0, math.pi).W)
    print("W(0, 3) discrete\n", controllability_gramian(double_integrator(), 0, 3).W)
    for t1 in (1, 2, 3):
        rep = observability_gramian(double_integrator(), t1)
        print(f"M(0, {t1}) det={rep.det:g} nonsingular={rep.nonsingular}")

    section("deadbeat gain for the digital position plant")
    plant = StateSpaceModel.discrete([[1, 0.08015], [0, 0.6313]], [[0.00339], [0.06308]], [[1, 0]])
    gain = deadbeat_gain(plant)
    print("F", gain.F[0], "canonical", gain.canonical_gain[0])

    section("finite-horizon LQR on the same plant")
    sol = lqr(plant, np.diag([1.0, 0.0]), [[1e-4]], np.zeros((2, 2)), 0, 10)
    print("F(0)", sol.gain(0)[0], "cost from (1, 0)", sol.cost_of([1.0, 0.0]))


if __name__ == "__main__":
    main()
