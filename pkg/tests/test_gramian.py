import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import double_integrator, rotation
from oracles import random_controllable
from ltikit import (
    Constant,
    Sinusoid,
    StateSpaceModel,
    Zero,
    controllability_gramian,
    min_energy_input,
    observability_gramian,
    reconstruct_initial_state,
    simulate_continuous,
    simulate_discrete,
)
from ltikit.errors import GridMismatch, InvalidHorizon, SingularGramian
from ltikit.gramian import SteeringInput


def ctrb_closed_form(omega, t1):
    s2, c2 = math.sin(2 * omega * t1), math.cos(2 * omega * t1)
    off = (1 - c2) / (4 * omega)
    return np.array([[t1 / 2 - s2 / (4 * omega), off], [off, t1 / 2 + s2 / (4 * omega)]])


def obsv_closed_form(omega, t1):
    s, c = math.sin(omega * t1), math.cos(omega * t1)
    return np.array([[t1 - s * s / omega, s * c / omega], [s * c / omega, t1 + s * s / omega]])


def test_ctrb_rotation_half_period():
    rep = controllability_gramian(rotation(1.0), 0.0, math.pi)
    np.testing.assert_allclose(rep.W, np.eye(2) * math.pi / 2, atol=1e-8)
    assert rep.nonsingular


@pytest.mark.parametrize("omega", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("t1", [0.5, 1.0, math.pi, 5.0])
def test_ctrb_closed_form(omega, t1):
    rep = controllability_gramian(rotation(omega), 0.0, t1)
    np.testing.assert_allclose(rep.W, ctrb_closed_form(omega, t1), atol=1e-8)


def test_ctrb_shifted_horizon_matches():
    a = controllability_gramian(rotation(2.0), 1.0, 3.0).W
    b = controllability_gramian(rotation(2.0), 0.0, 2.0).W
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_ctrb_discrete_example():
    rep = controllability_gramian(double_integrator(), 0, 3)
    np.testing.assert_array_equal(rep.W, [[5, 3], [3, 3]])
    assert rep.det == pytest.approx(6, abs=1e-12)
    assert rep.nonsingular


def test_ctrb_degenerate_horizon():
    rep = controllability_gramian(rotation(), 1.0, 1.0)
    assert not rep.W.any() and not rep.nonsingular


def test_horizon_errors():
    with pytest.raises(InvalidHorizon):
        controllability_gramian(rotation(), 2.0, 1.0)
    with pytest.raises(InvalidHorizon):
        controllability_gramian(double_integrator(), 0, 0)
    with pytest.raises(InvalidHorizon):
        controllability_gramian(double_integrator(), 0, 2.5)
    with pytest.raises(InvalidHorizon):
        observability_gramian(rotation(), 0.0)


def test_obsv_rotation_examples():
    np.testing.assert_allclose(observability_gramian(rotation(1.0), math.pi).W, np.eye(2) * math.pi, atol=1e-8)
    for omega in (0.5, 1.0, 2.0):
        for t1 in (0.5, 1.0, math.pi, 5.0):
            np.testing.assert_allclose(observability_gramian(rotation(omega), t1).W,
                                       obsv_closed_form(omega, t1), atol=1e-8)


def test_obsv_discrete_examples():
    rep = observability_gramian(double_integrator(), 2)
    np.testing.assert_array_equal(rep.W, [[2, 3], [3, 5]])
    assert rep.det == pytest.approx(1, abs=1e-12) and rep.nonsingular
    rep = observability_gramian(double_integrator(), 1)
    np.testing.assert_array_equal(rep.W, [[1, 1], [1, 1]])
    assert not rep.nonsingular


@pytest.mark.parametrize("t1", range(2, 11))
def test_discrete_determinant_identity(t1):
    want = t1 ** 2 * (t1 ** 2 - 1) / 12
    assert controllability_gramian(double_integrator(), 0, t1).det == pytest.approx(want, abs=1e-9)
    assert observability_gramian(double_integrator(), t1).det == pytest.approx(want, abs=1e-9)


def _psd_symmetric(W):
    assert np.max(np.abs(W - W.T)) <= 1e-9
    assert np.min(np.linalg.eigvalsh(W)) >= -1e-9 * max(1.0, np.linalg.norm(W, np.inf))


def test_gramian_symmetry_psd_and_duality(rng):
    for _ in range(20):
        n, m, p = int(rng.integers(1, 5)), int(rng.integers(1, 3)), int(rng.integers(1, 3))
        A = rng.standard_normal((n, n))
        B = rng.standard_normal((n, m))
        C = rng.standard_normal((p, n))
        t1 = float(rng.uniform(0.1, 2.0))
        for make, horizon in ((StateSpaceModel.continuous, t1), (StateSpaceModel.discrete, int(rng.integers(1, 8)))):
            W = controllability_gramian(make(A, B, C), 0, horizon).W
            M = observability_gramian(make(A, B, C), horizon).W
            _psd_symmetric(W)
            _psd_symmetric(M)
            dual = observability_gramian(make(A.T, C.T, B.T), horizon).W
            np.testing.assert_allclose(W, dual, atol=1e-8 * max(1, np.abs(W).max()))


@given(st.floats(0.2, 3.0), st.floats(0.0, 1.0))
def test_gramian_monotone_in_horizon(t1, frac):
    m = StateSpaceModel.continuous([[0.1, 1.0], [-1.0, -0.3]], [[0.0], [1.0]], [[1.0, 0.0]])
    W_long = controllability_gramian(m, 0.0, t1).W
    W_short = controllability_gramian(m, 0.0, t1 * frac).W
    assert np.min(np.linalg.eigvalsh(W_long - W_short)) >= -1e-9


def test_min_energy_zero_when_free_motion_lands(rng):
    m = rotation(1.0)
    x0 = np.array([0.3, -0.2])
    x1 = simulate_continuous(m, x0, Zero(), 0.0, 2.0, 4).states[-1]
    u = min_energy_input(m, x0, x1, 2.0)
    assert isinstance(u, SteeringInput)
    assert u.energy <= 1e-12
    assert np.max(np.abs(u.table()[1])) <= 1e-6


def test_min_energy_rotation_to_origin():
    m = rotation(1.0)
    u = min_energy_input(m, [1, 0], [0, 0], math.pi, grid=100)
    tr = simulate_continuous(m, [1, 0], u, 0.0, math.pi, 100)
    assert np.linalg.norm(tr.states[-1]) <= 1e-6
    # energy identity: int |u|^2 = eta' W eta, checked by quadrature of the samples
    times, values = u.table()
    h = times[1] - times[0]
    w = np.full(len(times), 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    assert np.sum(w * values[:, 0] ** 2) * h / 3 == pytest.approx(u.energy, rel=1e-8)


def test_min_energy_discrete_is_exact():
    m = double_integrator()
    u = min_energy_input(m, [1, 0], [-4, 2], 3)
    tr = simulate_discrete(m, [1, 0], u, 3)
    np.testing.assert_allclose(tr.states[-1], [-4, 2], atol=1e-12)


def test_min_energy_singular():
    m = StateSpaceModel.continuous(np.eye(2), np.zeros((2, 1)), [[1, 0]])
    with pytest.raises(SingularGramian):
        min_energy_input(m, [1, 0], [0, 0], 1.0)


def test_reconstruct_rotation_round_trip():
    m = rotation(1.0)
    tr = simulate_continuous(m, [1, 0], Constant(1.0), 0.0, math.pi, 100)
    np.testing.assert_allclose(reconstruct_initial_state(m, Constant(1.0), tr, math.pi), [1, 0], atol=1e-6)


def test_reconstruct_discrete_round_trip():
    m = double_integrator()
    tr = simulate_discrete(m, [3, -2], Constant(1.0), 2)
    np.testing.assert_allclose(reconstruct_initial_state(m, Constant(1.0), tr, 2), [3, -2], atol=1e-10)
    with pytest.raises(SingularGramian):
        reconstruct_initial_state(m, Constant(1.0), tr, 1)


def test_reconstruct_accepts_arrays_and_checks_grid():
    m = rotation(2.0)
    tr = simulate_continuous(m, [0.2, 0.4], Sinusoid(1.0, 1.5), 0.0, 2.0, 40)
    got = reconstruct_initial_state(m, Sinusoid(1.0, 1.5), (tr.times, tr.outputs), 2.0)
    np.testing.assert_allclose(got, [0.2, 0.4], atol=1e-9)
    with pytest.raises(GridMismatch):
        reconstruct_initial_state(m, Sinusoid(1.0, 1.5), (tr.times[:-1], tr.outputs[:-1]), 2.0)
    with pytest.raises(GridMismatch):
        reconstruct_initial_state(double_integrator(), Zero(), (np.array([0.0, 2.0]), np.zeros((2, 1))), 2)


def test_steering_random_systems(rng):
    for _ in range(10):
        m = random_controllable(rng, int(rng.integers(1, 4)))
        x0, x1 = rng.standard_normal(m.n), rng.standard_normal(m.n)
        u = min_energy_input(m, x0, x1, 1.5)
        tr = simulate_continuous(m, x0, u, 0.0, 1.5, 40)
        assert np.max(np.abs(tr.states[-1] - x1)) <= 1e-6
