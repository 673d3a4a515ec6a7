import numpy as np
import pytest

from varbound import (
    Grid,
    GridCapError,
    GridCoverageError,
    HermitianOperator,
    WeightedPair,
    angular_momentum,
    bound_numeric,
    certified_bound,
    certified_bound_auto,
    random_hermitian,
    random_state,
    sector_decompose,
    uncertainty_range_approx,
    variance_sum_at_state,
)
from varbound.sectors import _sector_floors, variance_pair_in_approx


@pytest.fixture
def diag_op():
    return HermitianOperator(np.diag([-1.0, 0.0, 1.0]))


def test_sector_decompose_minimal_grid(diag_op):
    d = sector_decompose(diag_op, Grid((-1.0, 0.0, 1.0)))
    assert np.allclose(d.sectors[0].matrix, np.diag([0.0, 0.0, 2.0]))
    assert np.allclose(d.sectors[1].matrix, np.diag([2.0, 0.0, 0.0]))
    assert d.delta == 0.25


def test_sector_decompose_two_point_spectrum():
    x = HermitianOperator(np.diag([0.0, 1.0]))
    d = sector_decompose(x, Grid((0.0, 1.0)))
    assert np.allclose(d.sectors[0].matrix, x.matrix @ x.matrix - x.matrix)
    assert d.delta == 0.25


def test_sector_decompose_refined_grid(diag_op):
    d = sector_decompose(diag_op, Grid((-1.0, -0.5, 0.0, 0.5, 1.0)))
    assert d.delta == pytest.approx(1 / 16)


def test_sector_decompose_rejects_uncovered_spectrum(diag_op):
    with pytest.raises(GridCoverageError, match="eigenvalue"):
        sector_decompose(diag_op, Grid((-1.0, 1.0)))


def test_sector_operators_are_psd_on_spectrum():
    for seed in range(20):
        x = random_hermitian(5, 1300 + seed)
        d = sector_decompose(x, Grid.from_spectrum(x))
        assert _sector_floors(d).min() >= -1e-12


def test_delta_formula_exact():
    g = Grid((0.0, 0.25, 1.0, 1.5))
    assert g.delta == (0.75 / 2) ** 2


def test_certified_bound_spin_one_sandwich(spin_one):
    jx, jy, _ = spin_one
    r = certified_bound(jx, jy)
    assert r.method == "certified"
    assert r.error == pytest.approx(0.5)
    assert r.value >= -1e-9
    assert r.value <= 7 / 16 <= r.value + r.error
    # independent oracle: direct minimum over the four sector pairs
    gx = Grid((-1.0, 0.0, 1.0))
    dx = sector_decompose(jx, gx)
    dy = sector_decompose(jy, gx)
    brute = min(
        float(np.linalg.eigvalsh(si.matrix + sj.matrix)[0])
        for si in dx.sectors
        for sj in dy.sectors
    )
    assert r.value == pytest.approx(brute, abs=1e-12)


def test_certified_bound_commuting_diagonal(diag_op):
    r = certified_bound(diag_op, diag_op)
    assert r.value == pytest.approx(0.0, abs=1e-12)
    assert r.value >= -1e-9


def test_certified_bound_spin_two_refined():
    jx, jy, _ = angular_momentum(2)
    pts = tuple(np.arange(-2.0, 2.0 + 1e-9, 0.125))
    r = certified_bound(jx, jy, Grid(pts), Grid(pts))
    assert abs(r.value - 0.7496) <= 2 * (0.125 / 2) ** 2 + 1e-3
    assert r.error == pytest.approx(2 * (0.125 / 2) ** 2)


def test_certified_auto_spin_one(spin_one):
    jx, jy, _ = spin_one
    r = certified_bound_auto(jx, jy, 1e-3)
    assert 7 / 16 - 1e-3 <= r.value <= 7 / 16 + 1e-12
    assert r.error <= 1e-3
    assert r.diagnostics["tie_rule"] == "X-first"


def test_certified_auto_loose_tol_matches_minimal(spin_one):
    jx, jy, _ = spin_one
    base = certified_bound(jx, jy)
    loose = certified_bound_auto(jx, jy, tol=10.0)
    assert loose.value == pytest.approx(base.value, abs=1e-12)
    assert loose.diagnostics["refinements"] == {"X": 0, "Y": 0}


def test_certified_auto_skew_pair(skew_pair):
    x, y = skew_pair
    r = certified_bound_auto(x, y, 1e-4)
    assert 15 / 32 - 1e-4 <= r.value <= 15 / 32 + 1e-12


def test_certified_auto_grid_cap():
    x = random_hermitian(3, 77)
    y = random_hermitian(3, 78)
    with pytest.raises(GridCapError) as err:
        certified_bound_auto(x, y, 1e-12, grid_cap=32)
    assert err.value.achieved_error is not None


def test_refinement_monotonicity(spin_one):
    jx, jy, _ = spin_one
    gx = Grid((-1.0, 0.0, 1.0))
    gy = Grid((-1.0, 0.0, 1.0))
    prev = certified_bound(jx, jy, gx, gy).value
    for _ in range(6):
        gx = gx.bisect_largest_gap()
        cur = certified_bound(jx, jy, gx, gy).value
        assert cur >= prev - 1e-12
        prev = cur
        gy = gy.bisect_largest_gap()
        cur = certified_bound(jx, jy, gx, gy).value
        assert cur >= prev - 1e-12
        prev = cur


def test_sandwich_random_pairs():
    for seed in range(25):
        dim = 2 + seed % 5
        x = random_hermitian(dim, 1500 + seed)
        y = random_hermitian(dim, 1600 + seed)
        num = bound_numeric(WeightedPair(x, y)).value
        cer = certified_bound(x, y)
        assert cer.value <= num + 1e-7
        assert num <= cer.value + cer.error + 1e-7


def test_per_sector_lower_bound_property(spin_one):
    jx, _, _ = spin_one
    d = sector_decompose(jx, Grid.from_spectrum(jx))
    for seed in range(1000):
        rho = random_state(3, 3000 + seed)
        var = variance_sum_at_state(jx, jx, rho) / 2
        floor = min(
            float(np.real(np.trace(rho.matrix @ s.matrix))) for s in d.sectors
        )
        assert floor <= var + 1e-9
        assert var <= floor + d.delta + 1e-9


def test_urange_commuting_contains_origin():
    x = HermitianOperator(np.diag([-1.0, 0.0, 1.0]))
    y = HermitianOperator(np.diag([0.5, -0.5, 1.5]))
    approx = uncertainty_range_approx(x, y, directions=32)
    assert variance_pair_in_approx(approx, 0.0, 0.0)


def test_urange_cells_nonnegative_and_membership(spin_one):
    jx, jy, _ = spin_one
    approx = uncertainty_range_approx(jx, jy, directions=64)
    assert len(approx.cells) == 4
    for cell in approx.cells:
        assert cell.points.min() >= -1e-9
    for seed in range(500):
        rho = random_state(3, 4000 + seed)
        vx = variance_sum_at_state(jx, jx, rho) / 2
        vy = variance_sum_at_state(jy, jy, rho) / 2
        assert variance_pair_in_approx(approx, vx, vy, slack=1e-9)


def test_urange_excludes_unattainable_pairs(spin_one):
    # containment is one-sided: pairs far outside the attainable region must
    # not creep into the union + error box
    jx, jy, _ = spin_one
    approx = uncertainty_range_approx(jx, jy, directions=96)
    assert not variance_pair_in_approx(approx, 5.0, 5.0)
    assert not variance_pair_in_approx(approx, -1.0, 0.5)
    # with refined grids the error box shrinks and pairs below the tight
    # bound are excluded as well
    pts = tuple(np.arange(-1.0, 1.0 + 1e-9, 0.125))
    fine = uncertainty_range_approx(jx, jy, Grid(pts), Grid(pts), directions=96)
    assert not variance_pair_in_approx(fine, 0.1, 0.1)


def test_urange_exports(tmp_path, spin_one):
    jx, jy, _ = spin_one
    approx = uncertainty_range_approx(jx, jy, directions=16)
    blob = approx.to_json_dict()
    assert blob["delta"] == [approx.delta_x, approx.delta_y]
    assert len(blob["cells"]) == 4
    csv_text = approx.to_csv()
    blocks = csv_text.strip().split("\n\n")
    assert len(blocks) == 4


def test_urange_direction_floor():
    x = random_hermitian(3, 1)
    with pytest.raises(ValueError):
        uncertainty_range_approx(x, x, directions=4)


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid((1.0, 1.0))
    with pytest.raises(ValueError):
        Grid((2.0,))
    g = Grid.from_spectrum(HermitianOperator(np.eye(3)))
    assert len(g.points) == 2
