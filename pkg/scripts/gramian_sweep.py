"""Accuracy of the quadrature Gramian against the rotation-plant closed form.

    python scripts/gramian_sweep.py --quad-tol 1e-6
"""
import argparse
import math
from dataclasses import dataclass, field

import numpy as np

from ltikit import StateSpaceModel, controllability_gramian


@dataclass
class SweepConfig:
    omegas: list = field(default_factory=lambda: [0.5, 1.0, 2.0, 5.0])
    horizons: list = field(default_factory=lambda: [0.5, 1.0, math.pi, 5.0, 10.0])
    quad_tol: float = 1e-9


def closed_form(omega, t1):
    s2, c2 = math.sin(2 * omega * t1), math.cos(2 * omega * t1)
    off = (1 - c2) / (4 * omega)
    return np.array([[t1 / 2 - s2 / (4 * omega), off], [off, t1 / 2 + s2 / (4 * omega)]])


def sweep(cfg: SweepConfig):
    rows = []
    for omega in cfg.omegas:
        plant = StateSpaceModel.continuous([[0, omega], [-omega, 0]], [[0], [1]], [[1, 1]])
        for t1 in cfg.horizons:
            rep = controllability_gramian(plant, 0.0, t1, quad_tol=cfg.quad_tol)
            err = float(np.max(np.abs(rep.W - closed_form(omega, t1))))
            rows.append((omega, t1, rep.panels, err))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quad-tol", type=float, default=SweepConfig.quad_tol)
    cfg = SweepConfig(quad_tol=ap.parse_args().quad_tol)
    print(f"{'omega':>6} {'t1':>8} {'panels':>7} {'max err':>10}")
    for omega, t1, panels, err in sweep(cfg):
        print(f"{omega:6.2f} {t1:8.4f} {panels:7d} {err:10.2e}")


if __name__ == "__main__":
    main()
