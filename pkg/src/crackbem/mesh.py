"""Smooth closed boundary curves, their discretization, and nodal fields.

A boundary is a periodic parametrization x(t), t in [0, 2 pi), traversed
counterclockwise so that the normal n = (x2', -x1')/|x'| points outward.
Meshes sample the curve at an even number of equispaced parameter values;
with the trapezoidal weights h |x'(t_j)| this gives spectrally accurate
quadrature for smooth integrands, which the layer-potential assembly relies
on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MeshError
from .kernels import rigid_motion_basis

__all__ = [
    "Disk",
    "Ellipse",
    "FourierStar",
    "BoundaryMesh",
    "BoundaryField",
    "build_mesh",
    "rigid_motion_traces",
    "project_off_rigid_motions",
]


@dataclass(frozen=True)
class Disk:
    """Circle of given radius and center."""

    radius: float = 1.0
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        if self.radius <= 0.0:
            raise MeshError("disk radius must be positive")

    def point(self, t):
        c, s = np.cos(t), np.sin(t)
        return np.stack(
            [self.center[0] + self.radius * c, self.center[1] + self.radius * s],
            axis=-1,
        )

    def derivative(self, t):
        return self.radius * np.stack([-np.sin(t), np.cos(t)], axis=-1)

    def second_derivative(self, t):
        return -self.radius * np.stack([np.cos(t), np.sin(t)], axis=-1)


@dataclass(frozen=True)
class Ellipse:
    """Axis-aligned ellipse (a cos t, b sin t)."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if self.a <= 0.0 or self.b <= 0.0:
            raise MeshError("ellipse semi-axes must be positive")

    def point(self, t):
        return np.stack([self.a * np.cos(t), self.b * np.sin(t)], axis=-1)

    def derivative(self, t):
        return np.stack([-self.a * np.sin(t), self.b * np.cos(t)], axis=-1)

    def second_derivative(self, t):
        return np.stack([-self.a * np.cos(t), -self.b * np.sin(t)], axis=-1)


@dataclass(frozen=True)
class FourierStar:
    """Star-shaped curve R(t) (cos t, sin t) with a trigonometric radius

    R(t) = r0 + sum_k cos_coeffs[k-1] cos(k t) + sin_coeffs[k-1] sin(k t).

    The radius must stay positive; otherwise the parametrization folds over
    itself and the curve is rejected.
    """

    r0: float
    cos_coeffs: tuple = ()
    sin_coeffs: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "cos_coeffs", tuple(float(c) for c in self.cos_coeffs))
        object.__setattr__(self, "sin_coeffs", tuple(float(c) for c in self.sin_coeffs))
        t = np.linspace(0.0, 2.0 * np.pi, 4096, endpoint=False)
        if np.min(self._radius(t)) <= 0.0:
            raise MeshError("fourier curve radius is not positive: curve self-intersects")

    def _k(self) -> np.ndarray:
        n = max(len(self.cos_coeffs), len(self.sin_coeffs))
        return np.arange(1, n + 1)

    def _pad(self, coeffs) -> np.ndarray:
        n = max(len(self.cos_coeffs), len(self.sin_coeffs))
        out = np.zeros(n)
        out[: len(coeffs)] = coeffs
        return out

    def _radius(self, t):
        t = np.asarray(t, dtype=float)
        if not self.cos_coeffs and not self.sin_coeffs:
            return np.full(t.shape, self.r0)
        k = self._k()
        kt = np.multiply.outer(t, k)
        return (
            self.r0
            + np.cos(kt) @ self._pad(self.cos_coeffs)
            + np.sin(kt) @ self._pad(self.sin_coeffs)
        )

    def _radius_d1(self, t):
        t = np.asarray(t, dtype=float)
        if not self.cos_coeffs and not self.sin_coeffs:
            return np.zeros(t.shape)
        k = self._k()
        kt = np.multiply.outer(t, k)
        return -np.sin(kt) @ (k * self._pad(self.cos_coeffs)) + np.cos(kt) @ (
            k * self._pad(self.sin_coeffs)
        )

    def _radius_d2(self, t):
        t = np.asarray(t, dtype=float)
        if not self.cos_coeffs and not self.sin_coeffs:
            return np.zeros(t.shape)
        k = self._k()
        kt = np.multiply.outer(t, k)
        return -np.cos(kt) @ (k * k * self._pad(self.cos_coeffs)) - np.sin(kt) @ (
            k * k * self._pad(self.sin_coeffs)
        )

    def point(self, t):
        r = self._radius(t)
        return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)

    def derivative(self, t):
        r, r1 = self._radius(t), self._radius_d1(t)
        c, s = np.cos(t), np.sin(t)
        return np.stack([r1 * c - r * s, r1 * s + r * c], axis=-1)

    def second_derivative(self, t):
        r, r1, r2 = self._radius(t), self._radius_d1(t), self._radius_d2(t)
        c, s = np.cos(t), np.sin(t)
        return np.stack(
            [(r2 - r) * c - 2.0 * r1 * s, (r2 - r) * s + 2.0 * r1 * c], axis=-1
        )


@dataclass(frozen=True)
class BoundaryMesh:
    """Equispaced-parameter discretization of a closed boundary curve.

    Attributes
    ----------
    shape : curve object with point/derivative/second_derivative methods
    params : (n,) parameter values t_j = 2 pi j / n
    points, first_deriv, second_deriv : (n, 2) samples of x, x', x''
    speed : (n,) arc element |x'|
    normals : (n, 2) outward unit normals (x2', -x1')/|x'|
    weights : (n,) quadrature weights h |x'| with h = 2 pi / n
    """

    shape: object
    n: int
    params: np.ndarray = field(repr=False, default=None)
    points: np.ndarray = field(repr=False, default=None)
    first_deriv: np.ndarray = field(repr=False, default=None)
    second_deriv: np.ndarray = field(repr=False, default=None)
    speed: np.ndarray = field(repr=False, default=None)
    normals: np.ndarray = field(repr=False, default=None)
    weights: np.ndarray = field(repr=False, default=None)
    h: float = 0.0

    def __post_init__(self) -> None:
        n = int(self.n)
        if n < 16 or n % 2 != 0:
            raise MeshError("node count must be even and at least 16")
        t = 2.0 * np.pi * np.arange(n) / n
        pts = np.asarray(self.shape.point(t), dtype=float)
        d1 = np.asarray(self.shape.derivative(t), dtype=float)
        d2 = np.asarray(self.shape.second_derivative(t), dtype=float)
        speed = np.linalg.norm(d1, axis=-1)
        if np.min(speed) <= 0.0:
            raise MeshError("parametrization is degenerate (vanishing speed)")
        normals = np.stack([d1[:, 1], -d1[:, 0]], axis=-1) / speed[:, None]
        h = 2.0 * np.pi / n
        # signed area 1/2 Int (x1 x2' - x2 x1') dt > 0 for counterclockwise
        area = 0.5 * h * np.sum(pts[:, 0] * d1[:, 1] - pts[:, 1] * d1[:, 0])
        if area <= 0.0:
            raise MeshError("curve must be traversed counterclockwise")
        centroid = pts.mean(axis=0)
        if np.min(np.einsum("ij,ij->i", pts - centroid, normals)) <= 0.0:
            raise MeshError("normals do not point outward; curve is invalid")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "params", t)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "first_deriv", d1)
        object.__setattr__(self, "second_deriv", d2)
        object.__setattr__(self, "speed", speed)
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "weights", h * speed)
        object.__setattr__(self, "h", h)

    @property
    def perimeter(self) -> float:
        return float(self.weights.sum())

    def distance_to(self, point) -> float:
        """Distance from an interior point to the sampled boundary nodes."""
        p = np.asarray(point, dtype=float)
        return float(np.min(np.linalg.norm(self.points - p, axis=-1)))


def build_mesh(shape, n_nodes: int) -> BoundaryMesh:
    """Discretize a curve with an even number (>= 16) of nodes."""
    return BoundaryMesh(shape=shape, n=n_nodes)


@dataclass(frozen=True)
class BoundaryField:
    """Vector-valued nodal function on a boundary mesh, values (n, 2)."""

    mesh: BoundaryMesh
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.mesh.n, 2):
            raise MeshError(
                f"field shape {v.shape} incompatible with mesh of {self.mesh.n} nodes"
            )
        object.__setattr__(self, "values", v)

    @classmethod
    def from_flat(cls, mesh: BoundaryMesh, flat: np.ndarray) -> "BoundaryField":
        return cls(mesh, np.asarray(flat, dtype=float).reshape(mesh.n, 2))

    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def dot(self, other: "BoundaryField") -> float:
        """L^2(d sigma) inner product with another field on the same mesh."""
        if other.mesh is not self.mesh and other.mesh.n != self.mesh.n:
            raise MeshError("fields live on different meshes")
        return float(
            np.sum(self.mesh.weights * np.einsum("ij,ij->i", self.values, other.values))
        )

    def rigid_moments(self) -> np.ndarray:
        """Moments Int f . psi d sigma against the three rigid motions."""
        basis = rigid_motion_basis(self.mesh.points)
        return np.einsum("i,ija,ij->a", self.mesh.weights, basis, self.values)

    def is_equilibrated(self, tol: float = 1e-10) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.values))))
        return bool(np.all(np.abs(self.rigid_moments()) <= tol * scale * self.mesh.perimeter))

    def __add__(self, other: "BoundaryField") -> "BoundaryField":
        return BoundaryField(self.mesh, self.values + other.values)

    def __sub__(self, other: "BoundaryField") -> "BoundaryField":
        return BoundaryField(self.mesh, self.values - other.values)


def rigid_motion_traces(mesh: BoundaryMesh) -> np.ndarray:
    """Rigid-motion generators sampled at the nodes, shape (n, 2, 3)."""
    return rigid_motion_basis(mesh.points)


def project_off_rigid_motions(f: BoundaryField) -> BoundaryField:
    """Remove the L^2(d sigma) projection onto the rigid motions.

    The output has vanishing moments against all three generators; fields
    already orthogonal are returned unchanged up to roundoff, and rigid
    traces map to zero.
    """
    basis = rigid_motion_traces(f.mesh)
    w = f.mesh.weights
    gram = np.einsum("i,ija,ijb->ab", w, basis, basis)
    moments = np.einsum("i,ija,ij->a", w, basis, f.values)
    coef = np.linalg.solve(gram, moments)
    return BoundaryField(f.mesh, f.values - basis @ coef)
