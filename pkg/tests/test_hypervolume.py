import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobopc.errors import ContractError, InvalidDataError
from mobopc.hypervolume import (
    ImprovementTables,
    ParetoArchive,
    build_cells,
    dominant_indices,
    dominant_subset,
    hypervolume,
    weighted_expected_hv,
)
from oracles import hv_inclusion_exclusion, weighted_hv_enumeration


def brute_dominant(points):
    keep = []
    for i, p in enumerate(points):
        dominated = any(np.all(q >= p) and np.any(q > p) for q in points)
        earlier_dup = any(np.array_equal(points[j], p) for j in range(i))
        if not dominated and not earlier_dup:
            keep.append(i)
    return keep


def test_single_box():
    assert hypervolume([[2.0, 3.0]], [0.0, 0.0]) == 6.0


def test_two_points_2d():
    assert hypervolume([[1.0, 3.0], [3.0, 1.0]], [0.0, 0.0]) == pytest.approx(5.0)


def test_points_not_above_reference_ignored():
    assert hypervolume([[1.0, -1.0]], [0.0, 0.0]) == 0.0
    assert hypervolume([[0.0, 5.0]], [0.0, 0.0]) == 0.0
    grid = build_cells([[1.0, -1.0], [2.0, 2.0]], [0.0, 0.0])
    assert grid.excluded == 1


def test_warning_on_excluded_points():
    with pytest.warns(UserWarning):
        build_cells([[-1.0, 1.0]], [0.0, 0.0], warn=True)


def test_empty_set():
    assert hypervolume(np.zeros((0, 2)), [0.0, 0.0]) == 0.0


def test_non_finite_rejected():
    with pytest.raises(InvalidDataError):
        hypervolume([[np.nan, 1.0]], [0.0, 0.0])


def test_cells_tile_the_box():
    rng = np.random.default_rng(0)
    pts = rng.uniform(0, 1, size=(5, 3))
    grid = build_cells(pts, np.zeros(3))
    assert grid.volumes.sum() == pytest.approx(np.prod(pts.max(axis=0)))


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), n=st.integers(1, 6), m=st.integers(1, 3))
def test_matches_inclusion_exclusion(seed, n, m):
    rng = np.random.default_rng(seed)
    pts = rng.integers(0, 5, size=(n, m)).astype(float)
    z = np.full(m, -0.5)
    assert hypervolume(pts, z) == pytest.approx(hv_inclusion_exclusion(pts, z), abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), n=st.integers(1, 8), m=st.integers(1, 4))
def test_dominant_indices_match_brute_force(seed, n, m):
    rng = np.random.default_rng(seed)
    pts = rng.integers(0, 3, size=(n, m)).astype(float)
    assert list(dominant_indices(pts)) == brute_dominant(pts)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), n=st.integers(1, 7))
def test_dominated_points_do_not_change_hv(seed, n):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0, 1, size=(n, 3))
    z = np.zeros(3)
    assert hypervolume(dominant_subset(pts), z) == pytest.approx(hypervolume(pts, z), rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), n=st.integers(1, 6))
def test_hv_monotone_under_insertion(seed, n):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0, 1, size=(n + 1, 2))
    assert hypervolume(pts, [0, 0]) >= hypervolume(pts[:-1], [0, 0]) - 1e-12


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), n=st.integers(1, 6), m=st.integers(1, 3))
def test_weighted_hv_matches_enumeration(seed, n, m):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0, 1, size=(n, m))
    probs = rng.choice([0.0, 1.0, 0.3, 0.77], size=n)
    z = np.zeros(m)
    got = weighted_expected_hv(ParetoArchive(np.zeros((n, 1)), pts, z, probs))
    assert got == pytest.approx(weighted_hv_enumeration(pts, probs, z), rel=1e-12, abs=1e-15)


def test_weighted_hv_with_unit_probs_is_hv():
    rng = np.random.default_rng(4)
    pts = rng.uniform(0, 1, size=(6, 3))
    arch = ParetoArchive(np.zeros((6, 1)), pts, np.zeros(3), np.ones(6))
    assert weighted_expected_hv(arch) == pytest.approx(hypervolume(pts, np.zeros(3)), rel=1e-12)


def test_archive_validation():
    with pytest.raises(ContractError):
        ParetoArchive(np.zeros((2, 1)), np.ones((2, 2)), np.zeros(2), [0.5])
    with pytest.raises(ContractError):
        ParetoArchive(np.zeros((1, 1)), np.ones((1, 2)), np.zeros(2), [1.5])
    with pytest.raises(ContractError):
        weighted_expected_hv(ParetoArchive(np.zeros((1, 1)), np.ones((1, 2)), np.zeros(2)))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), n=st.integers(0, 5), m=st.integers(1, 3))
def test_improvement_tables_match_direct_difference(seed, n, m):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0, 1, size=(n, m))
    z = np.zeros(m)
    tables = ImprovementTables(pts, np.zeros(n), z)
    ys = rng.uniform(-0.2, 1.3, size=(20, m))
    got = tables(ys)
    base = hypervolume(pts, z) if n else 0.0
    ref = [hypervolume(np.vstack([pts, y]), z) - base for y in ys]
    np.testing.assert_allclose(got, ref, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), n=st.integers(1, 5), m=st.integers(1, 3))
def test_weighted_tables_match_cell_sum(seed, n, m):
    # cell-by-cell sum over a grid rebuilt with the query point
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0, 1, size=(n, m))
    probs = rng.uniform(0, 1, size=n)
    z = np.zeros(m)
    tables = ImprovementTables(pts, 1.0 - probs, z)
    for y in rng.uniform(0.01, 1.2, size=(5, m)):
        grid = build_cells(np.vstack([pts, y]), z)
        upper = grid.upper_corners
        vol = grid.volumes.reshape(-1)
        ref = 0.0
        for k in range(len(vol)):
            if np.all(y >= upper[k]):
                ref += vol[k] * np.prod(1.0 - probs[np.all(pts >= upper[k], axis=1)])
        assert tables(y[None, :])[0] == pytest.approx(ref, rel=1e-12, abs=1e-14)


def test_too_many_objectives():
    with pytest.raises(ContractError):
        ImprovementTables(np.ones((1, 9)), np.zeros(1), np.zeros(9))
