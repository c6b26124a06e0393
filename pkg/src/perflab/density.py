"""Birth-date by lifespan density on a homogeneous mesh."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import DomainError, InvalidResolutionError

INT_TOL = 1e-9


@dataclass(frozen=True)
class MeshSpec:
    a: float
    L_X: int
    U_X: int
    L_Y: int
    U_Y: int
    n_X: int
    n_Y: int

    @property
    def n_nodes(self) -> int:
        return self.n_X * self.n_Y

    def x_centers(self) -> np.ndarray:
        return self.L_X + self.a * np.arange(self.n_X)

    def y_centers(self) -> np.ndarray:
        return self.L_Y + self.a * np.arange(self.n_Y)


@dataclass(frozen=True)
class DensityMesh:
    spec: MeshSpec
    counts: np.ndarray  # shape (n_X, n_Y)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def _node_count(span: int, a: float):
    """span/a + 1 if integral within tolerance, else None."""
    q = span / a
    r = round(q)
    if abs(q - r) > INT_TOL:
        return None
    return int(r) + 1


def _bounds(points):
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise DomainError("at least one point is required")
    if not np.all(np.isfinite(pts)):
        raise DomainError("points must be finite")
    lx, ux = math.floor(pts[:, 0].min()), math.ceil(pts[:, 0].max())
    ly, uy = math.floor(pts[:, 1].min()), math.ceil(pts[:, 1].max())
    return pts, lx, ux, ly, uy


def mesh_spec(points, a: float) -> MeshSpec:
    """Validate spacing ``a`` against the integer-rounded data bounds."""
    _, lx, ux, ly, uy = _bounds(points)
    if not a > 0:
        raise InvalidResolutionError("spacing must be positive")
    if a > (uy - ly) + INT_TOL:
        raise InvalidResolutionError(f"spacing {a} exceeds the lifespan span {uy - ly}")
    nx, ny = _node_count(ux - lx, a), _node_count(uy - ly, a)
    if nx is None or ny is None:
        raise InvalidResolutionError(f"spacing {a} gives a non-integer number of nodes")
    return MeshSpec(float(a), lx, ux, ly, uy, nx, ny)


def _bin(v, lo, a, n):
    idx = np.floor((v - lo) / a + 0.5).astype(int)
    return np.clip(idx, 0, n - 1)


def build_mesh(points, a: float) -> DensityMesh:
    """Count points per node using half-open bins [c - a/2, c + a/2), last bin closed."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    spec = mesh_spec(pts, a)
    ix = _bin(pts[:, 0], spec.L_X, spec.a, spec.n_X)
    iy = _bin(pts[:, 1], spec.L_Y, spec.a, spec.n_Y)
    counts = np.zeros((spec.n_X, spec.n_Y), dtype=np.int64)
    np.add.at(counts, (ix, iy), 1)
    return DensityMesh(spec, counts)


def mesh_entropy(mesh: DensityMesh) -> float:
    """Shannon entropy (bits) of the node occupancy distribution."""
    c = mesh.counts[mesh.counts > 0].astype(float)
    if c.size == 0:
        raise DomainError("empty mesh")
    p = c / c.sum()
    return float(max(0.0, -np.sum(p * np.log2(p))))


@dataclass(frozen=True)
class ResolutionChoice:
    best_a: float
    curve: tuple[tuple[float, float, bool], ...]  # (a, H or nan, valid)


def candidate_spacings(span_y: int, step: float = 0.1) -> np.ndarray:
    k = int(math.floor(span_y / step + INT_TOL))
    return np.round(step * np.arange(1, k + 1), 10)


def select_resolution(points, step: float = 0.1) -> ResolutionChoice:
    """Scan spacings over (0, span_Y] and keep the entropy maximiser (smallest on ties)."""
    pts, *_, ly, uy = _bounds(points)
    if pts.shape[0] < 2:
        raise DomainError("at least two points are required")
    curve = []
    best = None
    for a in candidate_spacings(uy - ly, step):
        try:
            h = mesh_entropy(build_mesh(pts, a))
        except InvalidResolutionError:
            curve.append((float(a), float("nan"), False))
            continue
        curve.append((float(a), h, True))
        if best is None or h > best[1] + 1e-12:
            best = (float(a), h)
    if best is None:
        raise InvalidResolutionError("no valid spacing for these points")
    return ResolutionChoice(best[0], tuple(curve))


def lifespan_gradient(mesh: DensityMesh, window) -> np.ndarray:
    """Mean successive count difference along lifespan, per birth-date column.

    ``window`` is ((x_lo, x_hi), (y_lo, y_hi)) in data units; nodes whose
    centres fall inside it are used.
    """
    (x_lo, x_hi), (y_lo, y_hi) = window
    xc, yc = mesh.spec.x_centers(), mesh.spec.y_centers()
    tol = 1e-9 * mesh.spec.a
    xs = np.nonzero((xc >= x_lo - tol) & (xc <= x_hi + tol))[0]
    ys = np.nonzero((yc >= y_lo - tol) & (yc <= y_hi + tol))[0]
    if ys.size < 2:
        raise DomainError("window needs at least two lifespan nodes")
    if xs.size == 0:
        raise DomainError("window contains no birth-date nodes")
    sub = mesh.counts[np.ix_(xs, ys)].astype(float)
    return np.diff(sub, axis=1).mean(axis=1)


def smooth_counts(mesh: DensityMesh) -> np.ndarray:
    """3x3 moving average of the counts (display only)."""
    return ndimage.uniform_filter(mesh.counts.astype(float), size=3, mode="constant")
