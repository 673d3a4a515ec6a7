import numpy as np
import pytest

from varbound import (
    HermitianOperator,
    OriginNotInteriorError,
    angular_momentum,
    dual2d,
    jnr2d,
    jnr3d_variance_surface,
    jnr_xx2,
    random_hermitian,
    random_state,
)
from varbound.geometry import (
    circle_directions,
    dual_to_csv,
    dual_to_json_dict,
    fibonacci_sphere,
    gnuplot_pair,
    polytope_to_csv,
    polytope_to_json_dict,
)


def _pauli_pair():
    jx, jy, _ = angular_momentum("1/2")
    return (
        HermitianOperator(2 * jx.matrix),
        HermitianOperator(2 * jy.matrix),
    )


def test_jnr2d_unit_circle():
    sx, sy = _pauli_pair()
    poly = jnr2d(sx, sy, 48)
    radii = np.linalg.norm(poly.points, axis=1)
    assert np.max(np.abs(radii - 1.0)) <= 1e-10


def test_jnr2d_commuting_diagonals_hull():
    x = HermitianOperator(np.diag([0.0, 1.0, 3.0]))
    y = HermitianOperator(np.diag([2.0, -1.0, 0.5]))
    poly = jnr2d(x, y, 256)
    # oracle: the range is the convex hull of the joint eigenvalue pairs
    pairs = np.array([[0.0, 2.0], [1.0, -1.0], [3.0, 0.5]])  # a CCW triangle
    for d, p in zip(poly.directions, poly.points):
        assert d @ p == pytest.approx(np.max(pairs @ d), abs=1e-9)
    for p in poly.points:
        for k in range(3):
            a, b = pairs[k], pairs[(k + 1) % 3]
            cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
            assert cross >= -1e-9


def test_jnr2d_identical_operators_give_segment():
    x = random_hermitian(4, 2)
    poly = jnr2d(x, x, 64)
    w = np.linalg.eigvalsh(x.matrix)
    for px, py in poly.points:
        assert px == pytest.approx(py, abs=1e-10)
        assert w[0] - 1e-9 <= px <= w[-1] + 1e-9
    spans = poly.points[:, 0]
    assert spans.min() == pytest.approx(w[0], abs=1e-9)
    assert spans.max() == pytest.approx(w[-1], abs=1e-9)


def test_jnr2d_support_consistency_random():
    for seed in range(10):
        f1 = random_hermitian(4, 2000 + seed)
        f2 = random_hermitian(4, 2100 + seed)
        poly = jnr2d(f1, f2, 64)
        for k, d in enumerate(poly.directions):
            along = poly.points @ d
            assert d @ poly.points[k] >= along.max() - 1e-10


def test_jnr2d_membership_of_random_states():
    f1 = random_hermitian(3, 31)
    f2 = random_hermitian(3, 32)
    n = 96
    poly = jnr2d(f1, f2, n)
    scale = np.linalg.norm(f1.matrix, 2) + np.linalg.norm(f2.matrix, 2)
    slack = scale * (1 - np.cos(np.pi / n)) + 1e-9
    for seed in range(300):
        rho = random_state(3, 5000 + seed).matrix
        p = np.array(
            [np.trace(rho @ f1.matrix).real, np.trace(rho @ f2.matrix).real]
        )
        for d in circle_directions(n):
            support = np.max(poly.points @ d)
            assert d @ p <= support + slack


def test_jnr_xx2_three_level():
    x = HermitianOperator(np.diag([-1.0, 0.0, 1.0]))
    poly = jnr_xx2(x)
    assert np.allclose(poly.points, [[-1, 1], [0, 0], [1, 1]])


def test_jnr_xx2_identity_single_point():
    poly = jnr_xx2(HermitianOperator.identity(3))
    assert np.allclose(poly.points, [[1.0, 1.0]])


def test_jnr_xx2_two_point_chord():
    x = HermitianOperator(np.diag([0.0, 2.0]))
    poly = jnr_xx2(x)
    assert np.allclose(poly.points, [[0, 0], [2, 4]])


def test_jnr3d_spin_three_half_min_shade(spin_three_half):
    jx, jy, _ = spin_three_half
    surf = jnr3d_variance_surface(jx, jy, 2048)
    assert surf.shades.min() == pytest.approx(0.6009, abs=2e-3)
    assert surf.shades.min() >= -1e-9


def test_jnr3d_dim_one_single_point():
    x = HermitianOperator([[2.0]])
    y = HermitianOperator([[3.0]])
    surf = jnr3d_variance_surface(x, y, 64)
    assert np.allclose(surf.points, np.tile([2.0, 3.0, 13.0], (64, 1)))
    assert np.allclose(surf.shades, 0.0, atol=1e-12)


def test_jnr3d_skew_pair_min_shade(skew_pair):
    x, y = skew_pair
    surf = jnr3d_variance_surface(x, y, 4096)
    assert surf.shades.min() == pytest.approx(15 / 32, abs=1e-3)


def test_jnr3d_rejects_sparse_sweeps():
    x = random_hermitian(2, 1)
    with pytest.raises(ValueError):
        jnr3d_variance_surface(x, x, 16)


def test_dual2d_self_dual_disk():
    sx, sy = _pauli_pair()
    curve = dual2d(sx, sy, 64)
    radii = np.linalg.norm(curve.points, axis=1)
    assert np.max(np.abs(radii - 1.0)) <= 1e-10
    assert curve.shift == (0.0, 0.0)


def test_dual2d_scaling():
    sx, sy = _pauli_pair()
    doubled = HermitianOperator(2 * sx.matrix)
    base = dual2d(sx, sy, 8)
    scaled = dual2d(doubled, sy, 8)
    # along the +x direction the dual radius halves when X doubles
    assert scaled.points[0][0] == pytest.approx(base.points[0][0] / 2, abs=1e-12)


def test_dual2d_det_residual(spin_one):
    jx, jy, _ = spin_one
    curve = dual2d(jx, jy, 72)
    d = jx.dim
    mx = jx.matrix - np.trace(jx.matrix).real / d * np.eye(d)
    my = jy.matrix - np.trace(jy.matrix).real / d * np.eye(d)
    for vx, vy in curve.points:
        w = np.linalg.eigvalsh(vx * mx + vy * my)
        assert np.min(np.abs(w - 1.0)) <= 1e-8  # det(vX + vY - I) = 0, relative form


def test_dual2d_origin_not_interior():
    # scalar operators shift to zero, so the range degenerates to the origin
    y = HermitianOperator(np.diag([1.0, 1.0]))
    with pytest.raises(OriginNotInteriorError):
        dual2d(y, y, 16)


def test_dual_primal_pairing(spin_one):
    jx, jy, _ = spin_one
    d = jx.dim
    mx = jx.matrix - np.trace(jx.matrix).real / d * np.eye(d)
    my = jy.matrix - np.trace(jy.matrix).real / d * np.eye(d)
    shifted_x = HermitianOperator(mx)
    shifted_y = HermitianOperator(my)
    primal = jnr2d(shifted_x, shifted_y, 48)
    dual = dual2d(jx, jy, 48)
    for v in dual.points:
        assert np.max(primal.points @ v) <= 1 + 1e-8


def test_direction_generators():
    c = circle_directions(7)
    assert np.allclose(np.linalg.norm(c, axis=1), 1.0)
    s = fibonacci_sphere(50)
    assert np.allclose(np.linalg.norm(s, axis=1), 1.0)
    assert len(np.unique(np.round(s, 6), axis=0)) == 50


def test_exports(tmp_path):
    sx, sy = _pauli_pair()
    poly = jnr2d(sx, sy, 12)
    csv_text = polytope_to_csv(poly)
    assert csv_text.splitlines()[0] == "d1,d2,x,y"
    assert len(csv_text.splitlines()) == 13
    blob = polytope_to_json_dict(poly)
    assert blob["dimension"] == 2 and len(blob["points"]) == 12

    surf = jnr3d_variance_surface(sx, sy, 64)
    blob3 = polytope_to_json_dict(surf)
    assert len(blob3["shades"]) == 64
    assert polytope_to_csv(surf).splitlines()[0] == "d1,d2,d3,x,y,z,shade"

    curve = dual2d(sx, sy, 12)
    assert len(dual_to_json_dict(curve)["points"]) == 12
    assert dual_to_csv(curve).splitlines()[0] == "vx,vy"

    files = gnuplot_pair("probe", "curve2d", "0 0\n1 1\n")
    assert set(files) == {"probe.dat", "probe.gp"}
    assert "plot" in files["probe.gp"]
    with pytest.raises(ValueError):
        gnuplot_pair("probe", "nope", "")
