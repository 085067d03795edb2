"""Closed-form sensitivity formulas: intensity decomposition, perturbation
rows, energy asymptote, topological derivative, and the slope fitter."""

import numpy as np
import pytest

from crackbem import (
    CrackSegment,
    LameParams,
    StressIntensity,
    dirichlet_perturbation,
    energy_asymptotic,
    fit_log_slope,
    neumann_perturbation,
    potential_energy_difference,
    stress_intensity,
    stress_intensity_from_stress,
    topological_derivative,
    traction_at_crack,
)
from crackbem.mesh import BoundaryField
from conftest import constant_stress_background


def test_intensity_decomposition_exact():
    # uniaxial tension, crack tangent at -45 degrees: K_I = K_II = 1/2
    sif = stress_intensity_from_stress(
        np.diag([1.0, 0.0]), np.array([np.sqrt(0.5), -np.sqrt(0.5)])
    )
    assert sif.k1 == pytest.approx(0.5, abs=1e-14)
    assert sif.k2 == pytest.approx(0.5, abs=1e-14)
    assert sif.magnitude_squared == pytest.approx(0.5, abs=1e-14)


def test_intensity_equals_traction_magnitude():
    # k1^2 + k2^2 = |sigma e_perp|^2 for any orientation
    rng = np.random.default_rng(9)
    sigma = rng.standard_normal((2, 2))
    sigma = sigma + sigma.T
    for theta in rng.uniform(0, 2 * np.pi, size=4):
        e = np.array([np.cos(theta), np.sin(theta)])
        e_perp = np.array([-e[1], e[0]])
        sif = stress_intensity_from_stress(sigma, e)
        assert sif.magnitude_squared == pytest.approx(
            float(np.sum((sigma @ e_perp) ** 2)), abs=1e-13
        )


def test_intensity_normalizes_direction():
    a = stress_intensity_from_stress(np.diag([2.0, -1.0]), np.array([3.0, 4.0]))
    b = stress_intensity_from_stress(np.diag([2.0, -1.0]), np.array([0.6, 0.8]))
    assert a.k1 == pytest.approx(b.k1, abs=1e-14)
    assert a.k2 == pytest.approx(b.k2, abs=1e-14)


def test_energy_asymptotic_literal():
    # lam = mu = 1 (E = 8/3), eps = 0.1, K = (1, 0): -pi eps^2 / (4 E) = -3 pi/3200
    mat = LameParams(1.0, 1.0)
    crack = CrackSegment(center=(0.0, 0.0), direction=(1.0, 0.0), length=0.1)
    val = energy_asymptotic(crack, StressIntensity(1.0, 0.0), mat)
    assert val == pytest.approx(-3.0 * np.pi / 3200.0, rel=1e-14)
    # quadratic in the length
    double = CrackSegment(center=(0.0, 0.0), direction=(1.0, 0.0), length=0.2)
    assert energy_asymptotic(double, StressIntensity(1.0, 0.0), mat) == pytest.approx(
        4.0 * val, rel=1e-14
    )


def test_topological_derivative_literals():
    mat = LameParams(1.0, 1.0)
    # pure shear tau: K = (0, tau) for an axis-aligned crack: -tau^2 3/32
    tau = 0.7
    sif = stress_intensity_from_stress(np.array([[0.0, tau], [tau, 0.0]]), np.array([1.0, 0.0]))
    assert topological_derivative(sif, mat) == pytest.approx(-3.0 * tau**2 / 32.0, rel=1e-14)
    # hydrostatic load: orientation independent
    for theta in np.linspace(0.0, np.pi, 5):
        e = np.array([np.cos(theta), np.sin(theta)])
        sif = stress_intensity_from_stress(2.0 * np.eye(2), e)
        assert topological_derivative(sif, mat) == pytest.approx(-3.0 / 8.0, rel=1e-13)


def test_traction_and_intensity_from_background(solver_128):
    background = constant_stress_background(solver_128, np.diag([1.0, 0.0]))
    crack = CrackSegment(center=(0.3, 0.0), direction=(np.sqrt(0.5), -np.sqrt(0.5)), length=0.1)
    t0 = traction_at_crack(background, crack)
    assert np.allclose(t0, np.diag([1.0, 0.0]) @ crack.normal, atol=1e-10)
    sif = stress_intensity(background, crack)
    assert sif.k1 == pytest.approx(0.5, abs=1e-10)
    assert sif.k2 == pytest.approx(0.5, abs=1e-10)


def test_neumann_perturbation_scaling(solver_128):
    background = constant_stress_background(solver_128, np.diag([1.0, 0.0]))
    small = CrackSegment(center=(0.3, 0.0), direction=(0.0, 1.0), length=0.05)
    large = CrackSegment(center=(0.3, 0.0), direction=(0.0, 1.0), length=0.1)
    w_small = neumann_perturbation(background, small)
    w_large = neumann_perturbation(background, large)
    assert np.allclose(w_large, 4.0 * w_small, atol=1e-13)


def test_dirichlet_perturbation_structure(solver_128):
    crack = CrackSegment(center=(0.2, 0.1), direction=(1.0, 0.0), length=0.08)
    t0 = np.array([0.3, -1.1])
    base = dirichlet_perturbation(solver_128, crack, t0)
    assert base.shape == (solver_128.mesh.n, 2)
    assert np.allclose(
        dirichlet_perturbation(solver_128, crack, 2.0 * t0), 2.0 * base, atol=1e-13
    )
    double = CrackSegment(center=(0.2, 0.1), direction=(1.0, 0.0), length=0.16)
    assert np.allclose(
        dirichlet_perturbation(solver_128, double, t0), 4.0 * base, atol=1e-12
    )


def test_potential_energy_difference_quadrature(solver_128):
    mesh = solver_128.mesh
    g = BoundaryField(mesh, mesh.normals)
    u0 = BoundaryField(mesh, np.zeros((mesh.n, 2)))
    u_eps = BoundaryField(mesh, 0.5 * mesh.normals)
    # -1/2 Int 0.5 n . n = -1/2 0.5 (2 pi)
    assert potential_energy_difference(g, u_eps, u0) == pytest.approx(
        -0.5 * np.pi, abs=1e-12
    )


def test_fit_log_slope_exact_power():
    eps = np.array([0.2, 0.1, 0.05, 0.025])
    fit = fit_log_slope(eps, 3.0 * eps**2)
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert fit.n_points == 4
    assert fit.note == "ok"


def test_fit_log_slope_noise_floor():
    eps = np.array([0.2, 0.1, 0.05, 0.025])
    values = np.array([1e-2, 1e-3, 1e-16, 1e-16])
    fit = fit_log_slope(eps, values, noise_floor=1e-12)
    assert fit.n_points == 2
    assert "below noise floor" in fit.note
    assert fit.slope == pytest.approx(np.log(10) / np.log(2), rel=1e-12)
    vacuous = fit_log_slope(eps, np.full(4, 1e-16), noise_floor=1e-12)
    assert vacuous.slope is None
    assert vacuous.note == "below_noise_floor"


def test_fit_log_slope_validation():
    with pytest.raises(ValueError):
        fit_log_slope(np.array([0.1, 0.05]), np.array([1.0]))
