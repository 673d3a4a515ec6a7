"""Sampling of joint numerical ranges (2D and 3D) and their dual sets.

The boundary of the joint numerical range of Hermitian observables in a given
direction is the image of a maximal eigenvector of the direction-weighted
operator, so a direction sweep yields boundary points directly.  Flat faces in
2D (degenerate maximal eigenspaces) are resolved by a secondary optimization
of the tangential coordinate inside the eigenspace.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, OriginNotInteriorError
from .linalg import as_operator

_DEGENERACY_RTOL = 1e-10


@dataclass(frozen=True)
class JNRPolytope:
    """Sampled boundary of a joint numerical range.

    points[k] is the expectation-value tuple produced by a maximal eigenvector
    of directions[k] . (F_1, ..., F_k); shades carries the variance-sum value
    z - x^2 - y^2 for the 3D variance surface, else None.
    """

    dimension: int
    points: np.ndarray
    directions: np.ndarray
    shades: np.ndarray | None = None


@dataclass(frozen=True)
class DualCurve:
    """Sampled dual set of a 2D numerical range, around the origin.

    Points satisfy det(v_x X + v_y Y - I) = 0 for the traceless-shifted
    operators; shift records the subtracted (tr X / d, tr Y / d) so callers can
    map back to the original pair.
    """

    points: np.ndarray
    shift: tuple[float, float]


def circle_directions(n: int) -> np.ndarray:
    """n unit vectors at uniformly spaced angles on [0, 2pi)."""
    theta = 2.0 * np.pi * np.arange(n) / n
    return np.column_stack([np.cos(theta), np.sin(theta)])


def fibonacci_sphere(n: int) -> np.ndarray:
    """Deterministic near-uniform unit directions on the 2-sphere."""
    k = np.arange(n)
    z = 1.0 - 2.0 * (k + 0.5) / n
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = math.pi * (3.0 - math.sqrt(5.0)) * k
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def _top_eigenspace(w: np.ndarray, v: np.ndarray) -> np.ndarray:
    scale = max(1.0, float(abs(w[-1])), float(abs(w[0])))
    mask = w >= w[-1] - _DEGENERACY_RTOL * scale
    return v[:, mask]


def _expect(m: np.ndarray, psi: np.ndarray) -> float:
    return float(np.real(psi.conj() @ (m @ psi)))


def jnr2d(f1, f2, n_directions: int) -> JNRPolytope:
    """Boundary sweep of the 2D joint numerical range W(F1, F2).

    For each angle the maximal eigenvector of cos(t) F1 + sin(t) F2 is mapped
    to (<F1>, <F2>).  A degenerate maximal eigenspace signals a flat face; its
    two extreme points are found by optimizing the tangential coordinate
    within the eigenspace, and both are emitted.
    """
    m1 = as_operator(f1).matrix
    m2 = as_operator(f2).matrix
    if m1.shape != m2.shape:
        raise DimensionMismatchError("observables must share a dimension")
    if n_directions < 3:
        raise ValueError(f"need at least 3 directions, got {n_directions}")
    dirs = circle_directions(n_directions)
    out_points: list[tuple[float, float]] = []
    out_dirs: list[tuple[float, float]] = []
    for cx, cy in dirs:
        h = cx * m1 + cy * m2
        w, v = np.linalg.eigh(h)
        space = _top_eigenspace(w, v)
        if space.shape[1] == 1:
            psi = space[:, 0]
            out_points.append((_expect(m1, psi), _expect(m2, psi)))
            out_dirs.append((cx, cy))
        else:
            tangent = -cy * m1 + cx * m2
            s = space.conj().T @ (tangent @ space)
            tw, tv = np.linalg.eigh((s + s.conj().T) / 2)
            lo = space @ tv[:, 0]
            hi = space @ tv[:, -1]
            for psi in (lo, hi):
                out_points.append((_expect(m1, psi), _expect(m2, psi)))
                out_dirs.append((cx, cy))
    return JNRPolytope(
        dimension=2,
        points=np.asarray(out_points),
        directions=np.asarray(out_dirs),
    )


def jnr_xx2(x_op) -> JNRPolytope:
    """Exact polygon W(X, X^2): the convex hull of (lambda_i, lambda_i^2).

    The two operators commute, so no sweep is needed; every distinct
    eigenvalue contributes a hull vertex of the parabola chain.
    """
    op = as_operator(x_op)
    w = np.linalg.eigvalsh(op.matrix)
    lams: list[float] = []
    for lam in map(float, w):
        if not lams or lam - lams[-1] > 1e-12:
            lams.append(lam)
    pts = np.array([[lam, lam * lam] for lam in lams])
    dirs = _vertex_support_directions(pts)
    return JNRPolytope(dimension=2, points=pts, directions=dirs)


def _vertex_support_directions(pts: np.ndarray) -> np.ndarray:
    """A supporting unit direction per vertex of a convex polygon given in
    boundary order (bisector of the adjacent outward edge normals)."""
    n = len(pts)
    if n == 1:
        return np.array([[1.0, 0.0]])
    if n == 2:
        d = pts[1] - pts[0]
        d = d / np.linalg.norm(d)
        return np.array([-d, d])
    dirs = np.empty_like(pts)
    for k in range(n):
        prev_edge = pts[k] - pts[(k - 1) % n]
        next_edge = pts[(k + 1) % n] - pts[k]
        n1 = np.array([prev_edge[1], -prev_edge[0]])
        n2 = np.array([next_edge[1], -next_edge[0]])
        n1 /= np.linalg.norm(n1)
        n2 /= np.linalg.norm(n2)
        b = n1 + n2
        norm = np.linalg.norm(b)
        dirs[k] = b / norm if norm > 1e-12 else n1
    return dirs


def jnr3d_variance_surface(x_op, y_op, n_directions: int) -> JNRPolytope:
    """Boundary cloud of W(X, Y, X^2 + Y^2) over a Fibonacci direction lattice.

    Each point carries the shade value z - x^2 - y^2, the variance sum of the
    maximizing eigenvector; shades are non-negative up to 1e-9.
    """
    mx = as_operator(x_op).matrix
    my = as_operator(y_op).matrix
    if mx.shape != my.shape:
        raise DimensionMismatchError("observables must share a dimension")
    if n_directions < 32:
        raise ValueError(f"need at least 32 sphere directions, got {n_directions}")
    m3 = mx @ mx + my @ my
    dirs = fibonacci_sphere(n_directions)
    points = np.empty((n_directions, 3))
    shades = np.empty(n_directions)
    for k, (u1, u2, u3) in enumerate(dirs):
        h = u1 * mx + u2 * my + u3 * m3
        w, v = np.linalg.eigh(h)
        psi = v[:, -1]
        px = _expect(mx, psi)
        py = _expect(my, psi)
        pz = _expect(m3, psi)
        points[k] = (px, py, pz)
        shades[k] = pz - px * px - py * py
    if float(shades.min()) < -1e-9:
        raise ValueError(f"negative variance shade {shades.min():.3e}")
    return JNRPolytope(dimension=3, points=points, directions=dirs, shades=shades)


def dual2d(x_op, y_op, n_directions: int) -> DualCurve:
    """Dual set samples of W(X, Y) after shifting both operators traceless.

    For each direction the dual radius is the inverse of the maximal
    eigenvalue; the resulting points form the minimal-radius cell around the
    origin.  Raises OriginNotInteriorError when some direction has
    non-positive maximal eigenvalue (origin on or outside the boundary).
    """
    mx = as_operator(x_op).matrix
    my = as_operator(y_op).matrix
    if mx.shape != my.shape:
        raise DimensionMismatchError("observables must share a dimension")
    if n_directions < 3:
        raise ValueError(f"need at least 3 directions, got {n_directions}")
    d = mx.shape[0]
    shift_x = float(np.trace(mx).real) / d
    shift_y = float(np.trace(my).real) / d
    mx0 = mx - shift_x * np.eye(d)
    my0 = my - shift_y * np.eye(d)
    dirs = circle_directions(n_directions)
    points = np.empty((n_directions, 2))
    for k, (cx, cy) in enumerate(dirs):
        top = float(np.linalg.eigvalsh(cx * mx0 + cy * my0)[-1])
        if top <= 1e-12:
            raise OriginNotInteriorError(
                f"direction ({cx:.6f}, {cy:.6f}) has maximal eigenvalue {top:.3e};"
                " the origin is not interior to the numerical range"
            )
        points[k] = (cx / top, cy / top)
    return DualCurve(points=points, shift=(shift_x, shift_y))


# ---------------------------------------------------------------------------
# export helpers


def polytope_to_csv(poly: JNRPolytope) -> str:
    """One point per row: direction components, coordinates, shade (3D)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if poly.dimension == 2:
        writer.writerow(["d1", "d2", "x", "y"])
        for d, p in zip(poly.directions, poly.points):
            writer.writerow([f"{v:.17g}" for v in (*d, *p)])
    else:
        writer.writerow(["d1", "d2", "d3", "x", "y", "z", "shade"])
        shades = poly.shades if poly.shades is not None else np.zeros(len(poly.points))
        for d, p, s in zip(poly.directions, poly.points, shades):
            writer.writerow([f"{v:.17g}" for v in (*d, *p, s)])
    return buf.getvalue()


def polytope_to_json_dict(poly: JNRPolytope) -> dict:
    out = {
        "dimension": poly.dimension,
        "points": [[float(v) for v in p] for p in poly.points],
        "directions": [[float(v) for v in d] for d in poly.directions],
    }
    if poly.shades is not None:
        out["shades"] = [float(s) for s in poly.shades]
    return out


def dual_to_csv(curve: DualCurve) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["vx", "vy"])
    for vx, vy in curve.points:
        writer.writerow([f"{vx:.17g}", f"{vy:.17g}"])
    return buf.getvalue()


def dual_to_json_dict(curve: DualCurve) -> dict:
    return {
        "points": [[float(vx), float(vy)] for vx, vy in curve.points],
        "shift": [curve.shift[0], curve.shift[1]],
    }


def gnuplot_pair(basename: str, kind: str, data: str, *, title: str = "") -> dict[str, str]:
    """Return {filename: contents} for a ready-to-plot data + script pair.

    kind: 'curve2d' (line plot of x,y columns), 'cloud3d' (splot with shade
    palette), or 'cells' (blank-line separated polygons).
    """
    dat = f"{basename}.dat"
    gp = f"{basename}.gp"
    if kind == "curve2d":
        script = (
            f'set size ratio -1\nset key off\nset title "{title}"\n'
            f'plot "{dat}" using 1:2 with linespoints pt 7 ps 0.4\npause -1\n'
        )
    elif kind == "cloud3d":
        script = (
            f'set view equal xyz\nset key off\nset title "{title}"\n'
            f'splot "{dat}" using 1:2:3:4 with points pt 7 ps 0.5 palette\npause -1\n'
        )
    elif kind == "cells":
        script = (
            f'set size ratio -1\nset key off\nset title "{title}"\n'
            f'plot "{dat}" using 1:2 with filledcurves closed fs transparent solid 0.25\n'
            "pause -1\n"
        )
    else:
        raise ValueError(f"unknown gnuplot kind {kind!r}")
    return {dat: data, gp: script}
