"""Closed-form asymptotics of the small-crack perturbation.

For a crack of total length eps centered at z with tangent e and normal
e_perp, let t0 = sigma(u0)(z) e_perp be the background traction across the
crack line.  The solvable model on the rescaled segment gives the leading
opening psi = (4/E) sqrt(1 - eta^2) t0, and pushing it through the
Green-function representation yields

    u_eps - u0   = (pi eps^2 / 2E) dN/dnu_y(x, z) t0 + O(eps^4)   on dOmega,
    J_eps - J0   = -(pi eps^2 / 4E) (K_I^2 + K_II^2) + O(eps^4),
    D_T(z, e)    = -(1/4E) (K_I^2 + K_II^2),

with stress intensity factors K_I = t0 . e_perp, K_II = t0 . e, so that
t0 = K_I e_perp + K_II e exactly.  The eps^3 term vanishes by parity of the
crack problem, which is why the remainders above are one full power of eps^2
better than the leading term.

The constants are pinned by the classical flat-crack solution: uniform
tension p across a crack of half-length c opens it by (4p/E) sqrt(c^2 - s^2)
and releases energy pi p^2 c^2 / E, with E the plane-stress effective
modulus 4 mu (lam + mu) / (lam + 2 mu).

The topological derivative uses the area normalization rho(eps) = pi eps^2,
so it is exactly the energy coefficient divided by pi; both are evaluated in
closed form and the eps -> 0 limit is checked only numerically in the test
suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cracks import CrackSegment
from .forward import BackgroundField, BoundarySolver
from .kernels import LameParams
from .mesh import BoundaryField

__all__ = [
    "StressIntensity",
    "traction_at_crack",
    "stress_intensity",
    "stress_intensity_from_stress",
    "neumann_perturbation",
    "dirichlet_perturbation",
    "potential_energy_difference",
    "energy_asymptotic",
    "topological_derivative",
    "SlopeFit",
    "fit_log_slope",
]


@dataclass(frozen=True)
class StressIntensity:
    """Normalized stress intensity pair of a crack orientation.

    k1 is the normal (opening) component of the background traction across
    the crack line, k2 the tangential (sliding) component.
    """

    k1: float
    k2: float

    @property
    def magnitude_squared(self) -> float:
        return self.k1**2 + self.k2**2


def traction_at_crack(background: BackgroundField, crack: CrackSegment) -> np.ndarray:
    """Background traction sigma(u0)(z) . e_perp at the crack center."""
    stress = background.stress(np.asarray(crack.center))[0]
    return stress @ crack.normal


def stress_intensity_from_stress(stress: np.ndarray, direction) -> StressIntensity:
    """Intensity pair of a stress tensor for a crack tangent `direction`."""
    e = np.asarray(direction, dtype=float)
    e = e / np.hypot(e[0], e[1])
    e_perp = np.array([-e[1], e[0]])
    t = np.asarray(stress, dtype=float) @ e_perp
    return StressIntensity(k1=float(t @ e_perp), k2=float(t @ e))


def stress_intensity(background: BackgroundField, crack: CrackSegment) -> StressIntensity:
    """Intensity pair of the background stress at the crack center."""
    stress = background.stress(np.asarray(crack.center))[0]
    return stress_intensity_from_stress(stress, crack.tangent)


def neumann_perturbation(background: BackgroundField, crack: CrackSegment) -> np.ndarray:
    """Leading boundary-trace perturbation of the traction problem, (n, 2).

    Evaluates (pi eps^2 / 2E) dN/dnu_y(x_i, z) t0 at every boundary node;
    the full solve differs from this by O(eps^4), rigid motions aside.
    """
    solver = background.solver
    row = solver.neumann_conormal_row(np.asarray(crack.center), crack.normal)
    t0 = traction_at_crack(background, crack)
    factor = np.pi * crack.length**2 / (2.0 * solver.mat.E)
    return factor * np.einsum("ick,k->ic", row, t0)


def dirichlet_perturbation(
    solver: BoundarySolver, crack: CrackSegment, traction_at_center
) -> np.ndarray:
    """Leading boundary-traction perturbation of the displacement problem.

    Evaluates (pi eps^2 / 2E) d^2G/dnu_x dnu_y(x_i, z) t0, where t0 is the
    crack-line traction of the Dirichlet background at the center.  Formula
    evaluation only: no cracked Dirichlet solve backs it, so tests exercise
    scaling and symmetry.
    """
    row = solver.green_second_conormal_row(np.asarray(crack.center), crack.normal)
    t0 = np.asarray(traction_at_center, dtype=float)
    factor = np.pi * crack.length**2 / (2.0 * solver.mat.E)
    return factor * np.einsum("ick,k->ic", row, t0)


def potential_energy_difference(
    g: BoundaryField, u_eps_trace: BoundaryField, u0_trace: BoundaryField
) -> float:
    """Energy change J_eps - J0 = -1/2 Int (u_eps - u0) . g dsigma."""
    return -0.5 * (u_eps_trace - u0_trace).dot(g)


def energy_asymptotic(crack: CrackSegment, sif: StressIntensity, mat: LameParams) -> float:
    """Leading energy change -(pi eps^2 / 4E)(K_I^2 + K_II^2)."""
    return -np.pi * crack.length**2 / (4.0 * mat.E) * sif.magnitude_squared


def topological_derivative(sif: StressIntensity, mat: LameParams) -> float:
    """Energy sensitivity per unit crack area pi eps^2: -(1/4E)(K_I^2+K_II^2)."""
    return -sif.magnitude_squared / (4.0 * mat.E)


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares slope of log(value) against log(eps)."""

    slope: float | None
    n_points: int
    note: str


def fit_log_slope(eps_values, values, noise_floor: float = 0.0) -> SlopeFit:
    """Fit a log-log decay rate, ignoring points at or below the noise floor.

    Mismatch values that have hit solver tolerance carry no decay
    information; they are dropped before fitting.  With fewer than two
    usable points the slope is None and the note says why.
    """
    eps_values = np.asarray(eps_values, dtype=float)
    values = np.asarray(values, dtype=float)
    if eps_values.shape != values.shape or eps_values.ndim != 1:
        raise ValueError("need matching 1-d arrays of eps and values")
    keep = values > noise_floor
    n = int(np.count_nonzero(keep))
    if n < 2:
        return SlopeFit(slope=None, n_points=n, note="below_noise_floor")
    slope = float(np.polyfit(np.log(eps_values[keep]), np.log(values[keep]), 1)[0])
    note = "ok" if n == keep.size else f"dropped {keep.size - n} points below noise floor"
    return SlopeFit(slope=slope, n_points=n, note=note)
