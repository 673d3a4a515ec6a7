"""Certified lower bounds via sector decomposition of the spectra.

A grid containing the spectrum of X splits the attainable band of <X> into
sectors; on each sector the quadratic X^2 - (a+b)X + ab*I under-estimates the
variance, exactly at the band edges and by at most (gap/2)^2 inside.  Taking
the minimal eigenvalue over all sector pairs of X and Y yields a lower bound
for the variance sum whose error is the sum of the two per-operator errors,
and refining the grids drives that error to zero.
"""

from __future__ import annotations

import csv
import heapq
import io
from dataclasses import dataclass

import numpy as np

from .bounds import BoundResult, WeightedPair, weighted_variance_sum
from .errors import DimensionMismatchError, GridCapError, GridCoverageError
from .geometry import JNRPolytope, jnr2d
from .linalg import DensityState, HermitianOperator, as_operator

DEFAULT_GRID_CAP = 4096
_SPECTRUM_MERGE_TOL = 1e-9


@dataclass(frozen=True)
class Grid:
    """A strictly increasing sequence of breakpoints covering a spectrum."""

    points: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        if len(pts) < 2:
            raise ValueError("a grid needs at least two points")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_spectrum(cls, op, merge_tol: float = _SPECTRUM_MERGE_TOL) -> "Grid":
        """Minimal grid: the sorted spectrum with near-duplicates collapsed."""
        w = np.linalg.eigvalsh(as_operator(op).matrix)
        pts = [float(w[0])]
        for v in map(float, w[1:]):
            if v - pts[-1] > merge_tol:
                pts.append(v)
        if len(pts) == 1:
            # Scalar-like operator: a single degenerate eigenvalue still needs
            # one band, so pad with a unit-width sector around it.
            pts = [pts[0], pts[0] + 1.0]
        return cls(tuple(pts))

    @property
    def max_gap(self) -> float:
        return max(b - a for a, b in zip(self.points, self.points[1:]))

    @property
    def delta(self) -> float:
        """Worst-case variance approximation error (max gap / 2)^2."""
        return (self.max_gap / 2.0) ** 2

    def bisect_largest_gap(self) -> "Grid":
        gaps = [b - a for a, b in zip(self.points, self.points[1:])]
        k = int(np.argmax(gaps))
        mid = (self.points[k] + self.points[k + 1]) / 2.0
        return Grid(self.points[: k + 1] + (mid,) + self.points[k + 1 :])


@dataclass(frozen=True)
class SectorDecomposition:
    """Sector operators X_i = X^2 - (x_i + x_{i+1}) X + x_i x_{i+1} I and their error."""

    source: HermitianOperator
    grid: Grid
    sectors: tuple[HermitianOperator, ...]
    delta: float


def sector_decompose(x_op, grid: Grid) -> SectorDecomposition:
    """Build the sector operators of one observable over a covering grid.

    Raises GridCoverageError if some eigenvalue is not a grid point (within
    1e-9); the sector operators are positive semidefinite exactly when the
    grid contains the whole spectrum.
    """
    op = as_operator(x_op)
    w = np.linalg.eigvalsh(op.matrix)
    pts = np.asarray(grid.points)
    for lam in map(float, w):
        if np.min(np.abs(pts - lam)) > 1e-9:
            raise GridCoverageError(
                f"grid does not contain eigenvalue {lam!r} of the operator"
            )
    m = op.matrix
    m2 = m @ m
    eye = np.eye(op.dim)
    sectors = tuple(
        HermitianOperator(m2 - (a + b) * m + (a * b) * eye)
        for a, b in zip(grid.points, grid.points[1:])
    )
    return SectorDecomposition(source=op, grid=grid, sectors=sectors, delta=grid.delta)


def _sector_floors(decomp: SectorDecomposition) -> np.ndarray:
    """Exact minimal eigenvalue of each sector operator.

    Sector operators commute with the source, so their eigenvalues are the
    band quadratic evaluated on the source spectrum; no dense solve needed.
    """
    w = np.linalg.eigvalsh(decomp.source.matrix)
    pts = decomp.grid.points
    floors = np.empty(len(decomp.sectors))
    for i, (a, b) in enumerate(zip(pts, pts[1:])):
        floors[i] = np.min((w - a) * (w - b))
    return floors


def _min_over_sector_pairs(x, y, gx: Grid, gy: Grid):
    """Exact min over sector pairs of lambda_min(X_i + Y_j), by branch and bound.

    Writing the pair operator as B - p_i X - q_j Y + s_ij I with B = X^2 + Y^2,
    p_i and q_j the band endpoint sums and s_ij the endpoint products, the
    eigenvalue part f(p, q) = lambda_min(B - pX - qY) is concave, so its
    minimum over a box of (p, q) values is attained at a corner.  That gives a
    valid lower bound per index box and lets the search skip nearly all pairs.
    """
    mx, my = x.matrix, y.matrix
    base = mx @ mx + my @ my
    px_pts = np.asarray(gx.points)
    py_pts = np.asarray(gy.points)
    p = px_pts[:-1] + px_pts[1:]   # increasing
    q = py_pts[:-1] + py_pts[1:]
    ab = px_pts[:-1] * px_pts[1:]
    cd = py_pts[:-1] * py_pts[1:]
    n, m = len(p), len(q)
    memo: dict[tuple[int, int], float] = {}
    evaluated = 0

    def f(i: int, j: int) -> float:
        nonlocal evaluated
        key = (i, j)
        val = memo.get(key)
        if val is None:
            val = float(np.linalg.eigvalsh(base - p[i] * mx - q[j] * my)[0])
            memo[key] = val
            evaluated += 1
        return val

    def pair_value(i: int, j: int) -> float:
        return f(i, j) + float(ab[i] + cd[j])

    # Warm start: the pair of central bands (any pair works; the bound only
    # tightens as better pairs are found).
    best = pair_value(n // 2, m // 2)
    best_pair = (n // 2, m // 2)
    stack = [(0, n - 1, 0, m - 1)]
    while stack:
        i0, i1, j0, j1 = stack.pop()
        if i0 == i1 and j0 == j1:
            val = pair_value(i0, j0)
            if val < best:
                best, best_pair = val, (i0, j0)
            continue
        corners = min(f(i0, j0), f(i0, j1), f(i1, j0), f(i1, j1))
        node_bound = corners + float(np.min(ab[i0 : i1 + 1]) + np.min(cd[j0 : j1 + 1]))
        if node_bound >= best:
            continue
        if i1 - i0 >= j1 - j0:
            mid = (i0 + i1) // 2
            stack.append((mid + 1, i1, j0, j1))
            stack.append((i0, mid, j0, j1))
        else:
            mid = (j0 + j1) // 2
            stack.append((i0, i1, mid + 1, j1))
            stack.append((i0, i1, j0, mid))
    return best, best_pair, evaluated


def certified_bound(x_op, y_op, grid_x: Grid | None = None, grid_y: Grid | None = None,
                    ) -> BoundResult:
    """min over sector pairs of lambda_min(X_i + Y_j), with error delta_X + delta_Y.

    The true variance-sum bound lies in [value, value + error].
    """
    x = as_operator(x_op)
    y = as_operator(y_op)
    if x.dim != y.dim:
        raise DimensionMismatchError(f"operator dims differ: {x.dim} != {y.dim}")
    gx = grid_x or Grid.from_spectrum(x)
    gy = grid_y or Grid.from_spectrum(y)
    dx = sector_decompose(x, gx)
    dy = sector_decompose(y, gy)
    best, best_pair, evaluated = _min_over_sector_pairs(x, y, gx, gy)
    i, j = best_pair
    w, v = np.linalg.eigh(dx.sectors[i].matrix + dy.sectors[j].matrix)
    witness = DensityState.pure(v[:, 0])
    psi = v[:, 0]
    mx_x = float(np.real(psi.conj() @ (x.matrix @ psi)))
    mx_y = float(np.real(psi.conj() @ (y.matrix @ psi)))
    return BoundResult(
        value=best,
        minimizer=(mx_x, mx_y),
        witness=witness,
        method="certified",
        error=dx.delta + dy.delta,
        diagnostics={
            "delta_x": dx.delta,
            "delta_y": dy.delta,
            "grid_sizes": (len(gx.points), len(gy.points)),
            "pairs_evaluated": evaluated,
            "best_pair": (i, j),
        },
    )


def _refine_grids(gx: Grid, gy: Grid, tol: float, grid_cap: int):
    """Bisect largest gaps (of the grid with larger delta; ties refine X first,
    equal gaps leftmost first) until delta_x + delta_y <= tol.

    Equivalent to repeated Grid.bisect_largest_gap but runs on gap heaps, so
    the cost is O(total points * log) instead of quadratic.
    """
    heaps = []
    counts = []
    for g in (gx, gy):
        h = [(a - b, a) for a, b in zip(g.points, g.points[1:])]  # (-gap, left)
        heapq.heapify(h)
        heaps.append(h)
        counts.append(len(g.points))
    refinements = {"X": 0, "Y": 0}
    def delta(h):
        return (-h[0][0] / 2.0) ** 2
    while delta(heaps[0]) + delta(heaps[1]) > tol:
        target = 0 if delta(heaps[0]) >= delta(heaps[1]) else 1
        if counts[target] >= grid_cap:
            err = delta(heaps[0]) + delta(heaps[1])
            raise GridCapError(
                f"grid cap {grid_cap} reached with error {err:.3e} > tol {tol:.3e}",
                achieved_error=err,
            )
        neg_gap, left = heapq.heappop(heaps[target])
        half = -neg_gap / 2.0
        heapq.heappush(heaps[target], (-half, left))
        heapq.heappush(heaps[target], (-half, left + half))
        counts[target] += 1
        refinements["X" if target == 0 else "Y"] += 1
    grids = []
    for g, h in zip((gx, gy), heaps):
        pts = sorted(left for _, left in h)
        pts.append(g.points[-1])
        grids.append(Grid(tuple(pts)))
    return grids[0], grids[1], refinements


def certified_bound_auto(x_op, y_op, tol: float, *, grid_cap: int = DEFAULT_GRID_CAP,
                         ) -> BoundResult:
    """Refine grids until delta_X + delta_Y <= tol, then run certified_bound.

    Refinement bisects the largest gap of whichever grid dominates the error;
    on exact ties the X grid goes first (recorded in the diagnostics).  Raises
    GridCapError when a grid would exceed grid_cap points.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    x = as_operator(x_op)
    y = as_operator(y_op)
    gx, gy, refinements = _refine_grids(Grid.from_spectrum(x), Grid.from_spectrum(y),
                                        tol, grid_cap)
    result = certified_bound(x, y, gx, gy)
    result.diagnostics["refinements"] = refinements
    result.diagnostics["tie_rule"] = "X-first"
    result.diagnostics["tol"] = tol
    return result


@dataclass(frozen=True)
class UncertaintyRegionApprox:
    """Union of sector-pair numerical ranges: a lower approximation of the
    attainable (Var X, Var Y) region.

    Every attainable variance pair lies in the Minkowski sum of the cell union
    with the error box [0, delta_x] x [0, delta_y].
    """

    cells: tuple[JNRPolytope, ...]
    delta_x: float
    delta_y: float

    def to_json_dict(self) -> dict:
        return {
            "cells": [[[float(px), float(py)] for px, py in cell.points]
                      for cell in self.cells],
            "delta": [self.delta_x, self.delta_y],
        }

    def to_csv(self) -> str:
        """One polygon per block, blank-line separated, rows 'x,y'."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for k, cell in enumerate(self.cells):
            if k:
                buf.write("\n")
            for px, py in cell.points:
                writer.writerow([f"{px:.17g}", f"{py:.17g}"])
        return buf.getvalue()


def uncertainty_range_approx(x_op, y_op, grid_x: Grid | None = None,
                             grid_y: Grid | None = None, directions: int = 64,
                             ) -> UncertaintyRegionApprox:
    """Sample one 2D numerical-range polygon per sector pair (X_i, Y_j)."""
    if directions < 8:
        raise ValueError(f"directions must be >= 8, got {directions}")
    x = as_operator(x_op)
    y = as_operator(y_op)
    if x.dim != y.dim:
        raise DimensionMismatchError(f"operator dims differ: {x.dim} != {y.dim}")
    dx = sector_decompose(x, grid_x or Grid.from_spectrum(x))
    dy = sector_decompose(y, grid_y or Grid.from_spectrum(y))
    cells = tuple(
        jnr2d(si, sj, directions)
        for si in dx.sectors for sj in dy.sectors
    )
    for cell in cells:
        low = float(np.min(cell.points)) if cell.points.size else 0.0
        if low < -1e-9:
            raise ValueError(f"sector-pair cell has negative coordinate {low:.3e}")
    return UncertaintyRegionApprox(cells=cells, delta_x=dx.delta, delta_y=dy.delta)


def variance_pair_in_approx(approx: UncertaintyRegionApprox, var_x: float, var_y: float,
                            slack: float = 1e-9) -> bool:
    """Membership test: does (var_x, var_y) lie in (cell union) + error box?

    Equivalent form: some cell polygon intersects the rectangle
    [var_x - delta_x, var_x] x [var_y - delta_y, var_y] (inflated by slack).
    """
    lox, hix = var_x - approx.delta_x - slack, var_x + slack
    loy, hiy = var_y - approx.delta_y - slack, var_y + slack
    halfplanes = [(1.0, 0.0, hix), (-1.0, 0.0, -lox), (0.0, 1.0, hiy), (0.0, -1.0, -loy)]
    for cell in approx.cells:
        poly = [tuple(map(float, p)) for p in cell.points]
        if len(poly) == 0:
            continue
        for nx, ny, c in halfplanes:
            poly = _clip(poly, nx, ny, c)
            if not poly:
                break
        if poly:
            return True
    return False


def _clip(points, nx, ny, c):
    """Sutherland-Hodgman clip of a convex polygon by n.p <= c."""
    if len(points) == 1:
        px, py = points[0]
        return points if nx * px + ny * py <= c else []
    out = []
    n = len(points)
    for k in range(n):
        ax, ay = points[k]
        bx, by = points[(k + 1) % n]
        da = nx * ax + ny * ay - c
        db = nx * bx + ny * by - c
        if da <= 0:
            out.append((ax, ay))
        if (da < 0 < db) or (db < 0 < da):
            t = da / (da - db)
            out.append((ax + t * (bx - ax), ay + t * (by - ay)))
    return out
