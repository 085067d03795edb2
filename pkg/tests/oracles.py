"""Finite-difference reference derivatives used to validate analytic kernels.

Everything here is slow and independent of the closed-form gradient code in
the package: plain central differences with one Richardson step for first
derivatives, second-order stencils for the Navier operator.  Tolerances in
the tests account for the O(h^4) / O(h^2) truncation of these stencils.
"""

import numpy as np

from crackbem import LameParams


def fd_jacobian(fn, x, h=None):
    """Jacobian of fn: R^2 -> array, shape fn(x).shape + (2,).

    Richardson-extrapolated central differences, O(h^4) truncation.
    """
    x = np.asarray(x, dtype=float)
    if h is None:
        h = 1e-4 * (1.0 + float(np.max(np.abs(x))))
    cols = []
    for l in range(2):
        e = np.zeros(2)
        e[l] = 1.0

        def d(step):
            return (np.asarray(fn(x + step * e)) - np.asarray(fn(x - step * e))) / (
                2.0 * step
            )

        cols.append((4.0 * d(0.5 * h) - d(h)) / 3.0)
    return np.stack(cols, axis=-1)


def fd_conormal(fn, x, normal, mat: LameParams):
    """Traction sigma(fn) normal at x from a finite-difference gradient."""
    grad = fd_jacobian(fn, x)  # (2, 2), grad[i, l] = d fn_i / d x_l
    tr = grad[0, 0] + grad[1, 1]
    sigma = mat.lam * tr * np.eye(2) + mat.mu * (grad + grad.T)
    return sigma @ np.asarray(normal, dtype=float)


def fd_navier_residual(fn, x, mat: LameParams, h=1e-4):
    """Residual mu Lap u + (lam + mu) grad div u of a vector field at x."""
    x = np.asarray(x, dtype=float)
    e1, e2 = np.eye(2) * h
    u0 = np.asarray(fn(x))
    lap = (
        np.asarray(fn(x + e1))
        + np.asarray(fn(x - e1))
        + np.asarray(fn(x + e2))
        + np.asarray(fn(x - e2))
        - 4.0 * u0
    ) / h**2

    # second partials of the divergence: d_k d_l u_l via nested stencils
    def div_grad(k):
        ek = np.eye(2)[k] * h
        gp = fd_jacobian(fn, x + ek, h=h)
        gm = fd_jacobian(fn, x - ek, h=h)
        return ((gp[0, 0] + gp[1, 1]) - (gm[0, 0] + gm[1, 1])) / (2.0 * h)

    grad_div = np.array([div_grad(0), div_grad(1)])
    return mat.mu * lap + (mat.lam + mat.mu) * grad_div


def linear_field(grad):
    """Displacement x -> grad @ x with the given constant gradient."""
    grad = np.asarray(grad, dtype=float)

    def fn(points):
        return np.asarray(points, dtype=float) @ grad.T

    return fn


def constant_stress_traction(mesh, sigma):
    """Nodal traction sigma . n of a constant stress field, shape (n, 2)."""
    return mesh.normals @ np.asarray(sigma, dtype=float).T
