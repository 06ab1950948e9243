"""Geometric measurements and error metrics over a point cloud.

Definitions: the numerical diameter is the maximum pairwise distance, the
numerical center is the arithmetic mean of positions, and the occupied
volume is the convex-hull measure (area in 2D).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .cloud import PointCloud
from .errors import DegenerateGeometryError, StructuralError


@dataclass(frozen=True)
class DiagnosticsRecord:
    step: int
    time: float
    centroid: np.ndarray
    diameter: float
    hull_volume: float
    eps_dia: float
    eps_x: float
    eps_V: float


def centroid(cloud: PointCloud) -> np.ndarray:
    if cloud.n == 0:
        raise StructuralError("centroid of an empty cloud")
    return cloud.positions.mean(axis=0)


def _max_pairwise(points: np.ndarray) -> float:
    diff = points[:, None, :] - points[None, :, :]
    return float(np.sqrt(np.einsum("ijk,ijk->ij", diff, diff).max()))


def diameter(cloud: PointCloud) -> float:
    """Maximum pairwise distance; hull vertices only for large clouds."""
    if cloud.n < 2:
        raise StructuralError("diameter needs at least 2 points")
    pts = cloud.positions
    if cloud.n > 1000:
        try:
            pts = pts[ConvexHull(pts).vertices]
        except QhullError:
            pass  # degenerate clouds still have a diameter; fall through
    return _max_pairwise(pts)


def hull_volume(cloud: PointCloud) -> float:
    """Convex-hull measure: polygon area in 2D, polyhedron volume in 3D."""
    if cloud.n < cloud.dim + 1:
        raise DegenerateGeometryError("too few points for a full-dimensional hull")
    try:
        return float(ConvexHull(cloud.positions).volume)
    except QhullError as exc:
        raise DegenerateGeometryError(f"degenerate point set: {exc}") from exc


def eps_dia(cloud: PointCloud, d_exact: float) -> float:
    if d_exact <= 0:
        raise StructuralError("exact diameter must be positive")
    return abs(diameter(cloud) - d_exact)


def eps_x(cloud: PointCloud, x_exact: np.ndarray) -> float:
    return float(np.linalg.norm(centroid(cloud) - np.asarray(x_exact, dtype=float)))


def eps_volume(v0: float, v_end: float) -> float:
    """Relative change of occupied volume between start and end."""
    if v0 <= 0:
        raise StructuralError("initial volume must be positive")
    return abs(v0 - v_end) / v0
