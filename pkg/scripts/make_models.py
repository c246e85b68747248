"""Write the bundled model files under models/.

    python scripts/make_models.py
"""
from pathlib import Path

from ltikit.files import dumps_model
from ltikit.statespace import StateSpaceModel

ROOT = Path(__file__).resolve().parents[1] / "models"


def rotation(omega):
    return StateSpaceModel.continuous(
        [[0.0, omega], [-omega, 0.0]], [[0.0], [1.0]], [[1.0, 1.0]],
        name="rotation", parameters={"omega": omega},
        units="A in rad per unit time",
    )


MODELS = {
    "rotation.json": rotation(2.0),
    "rotation_unit.json": rotation(1.0),
    "double_integrator.json": StateSpaceModel.discrete(
        [[1.0, 1.0], [0.0, 1.0]], [[0.0], [1.0]], [[1.0, 1.0]],
        name="discrete double integrator"),
    "double_integrator_obsv.json": StateSpaceModel.discrete(
        [[1.0, 1.0], [0.0, 1.0]], [[0.0], [1.0]], [[1.0, 1.0]],
        name="discrete double integrator, observed through y = x1 + x2"),
    # A12 and B reconstructed from the reference phase-variable transform T
    "digital_position.json": StateSpaceModel.discrete(
        [[1.0, 0.08015], [0.0, 0.6313]], [[0.00339], [0.06308]], [[1.0, 0.0]],
        name="digital position control", units="sampled, one step per sample"),
}


def main():
    ROOT.mkdir(exist_ok=True)
    for name, model in MODELS.items():
        (ROOT / name).write_text(dumps_model(model), newline="\n")
        print(ROOT / name)


if __name__ == "__main__":
    main()
