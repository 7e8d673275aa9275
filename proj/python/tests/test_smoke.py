import math

import numpy as np
import pytest

import rdreg


@pytest.fixture(scope="module")
def fixture():
    plant = rdreg.PlantSpec(
        rdreg.CoefficientFunction.constant(1.0),
        rdreg.CoefficientFunction.constant(0.0),
        3.0,
        rdreg.Scenario.DIRICHLET_MEAS_NEUMANN_REG,
    )
    basis = rdreg.solve_plant_basis(plant, n_max=60, grid_points=1201)
    return plant, basis


def test_eigenvalues(fixture):
    _, basis = fixture
    assert basis.eigenvalue(1) == pytest.approx(math.pi**2 / 4, rel=1e-8)
    lams = basis.eigenvalues()
    assert len(lams) == 60
    assert np.all(np.diff(lams) > 0)


def test_design_and_certificate(fixture):
    plant, basis = fixture
    assert rdreg.select_N0(plant, basis, 0.5) == 1
    gains = rdreg.GainSet(
        np.array([[-10.4134, -11.3747, 2.31]]), np.array([1.4373]), delta=0.5
    )
    model = rdreg.build_reduced_matrices(plant, basis, 1, 3, gains.K, gains.L)
    cert = rdreg.certify_at(model)
    assert cert.feasible
    assert cert.theta_max_eig < 0
    assert cert.gamma_n_margin <= 0

    eq = rdreg.solve_equilibrium(model, gains, 1.0)
    assert eq.y_e == pytest.approx(1.0, abs=1e-6)
    assert eq.max_residual <= 1e-9


def test_cauchy_condition(fixture):
    plant, _ = fixture
    v = rdreg.check_cauchy_condition(plant)
    assert v == pytest.approx(math.sqrt(3) * math.sin(math.sqrt(3)), abs=1e-6)


def test_simulation(fixture):
    plant, basis = fixture
    gains = rdreg.GainSet(
        np.array([[-10.4134, -11.3747, 2.31]]), np.array([1.4373]), delta=0.5
    )
    model = rdreg.build_reduced_matrices(plant, basis, 1, 3, gains.K, gains.L)
    cfg = rdreg.SimConfig()
    cfg.M = 20
    cfg.horizon = 12.0
    traj = rdreg.simulate(model, gains, basis, cfg)
    assert traj.y_r[-1] == pytest.approx(1.0, abs=1e-3)
    metrics = rdreg.fit_decay_metrics(traj, 0.5, rdreg.solve_equilibrium(model, gains, 1.0))
    assert metrics.fitted_rate <= -0.45


def test_error_mapping(fixture):
    plant, basis = fixture
    with pytest.raises(rdreg.ToolkitError):
        rdreg.select_N0(plant, basis, -1.0)
