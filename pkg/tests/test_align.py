"""Tests for DTW alignment and MCD against brute-force enumeration."""

import math

import numpy as np
import pytest

from indicvox.dsp.align import (
    DtwPath,
    EmptyTrackError,
    OrderMismatchError,
    dtw_align,
    mcd,
    mcd_frame_distance,
)
from indicvox.dsp.mel import McepTrack

from oracles import brute_mcd, brute_min_cost


def track(array):
    array = np.asarray(array, dtype=np.float64)
    return McepTrack(array, array.shape[1] - 1)


# ---------------------------------------------------------------------------
# DTW

def test_identical_tracks_diagonal():
    frames = np.arange(10.0).reshape(5, 2)
    path, cost = dtw_align(frames, frames)
    assert path.steps == tuple((i, i) for i in range(5))
    assert cost == 0.0


def test_single_cell():
    path, cost = dtw_align(np.array([[1.0]]), np.array([[4.0]]))
    assert path.steps == ((0, 0),)
    assert cost == 3.0


def test_empty_track_rejected():
    with pytest.raises(EmptyTrackError):
        dtw_align(np.zeros((0, 2)), np.zeros((3, 2)))


def test_path_validation():
    with pytest.raises(Exception):
        DtwPath(((0, 0), (2, 0)))
    with pytest.raises(Exception):
        DtwPath(((1, 0), (2, 0)))


def test_cost_bounded_by_diagonal():
    rng = np.random.default_rng(0)
    for _ in range(50):
        a = rng.normal(size=(6, 3))
        b = rng.normal(size=(6, 3))
        _, cost = dtw_align(a, b)
        diagonal = sum(float(np.linalg.norm(a[i] - b[i])) for i in range(6))
        assert 0.0 <= cost <= diagonal + 1e-12


def test_dtw_matches_exhaustive_enumeration_100_seeds():
    for seed in range(100):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(6, 2))
        b = rng.normal(size=(6, 2))
        local = [
            [float(np.linalg.norm(a[i] - b[j])) for j in range(6)] for i in range(6)
        ]
        path, cost = dtw_align(a, b)
        assert cost == pytest.approx(brute_min_cost(local), abs=1e-9)
        # The returned path really accumulates to the returned cost.
        along = sum(local[i][j] for i, j in path.steps)
        assert along == pytest.approx(cost, abs=1e-9)


def test_tie_breaking_prefers_diagonal():
    # All-zero distances: every path costs 0; the preferred path is the
    # pure diagonal.
    path, cost = dtw_align(np.zeros((4, 1)), np.zeros((4, 1)))
    assert cost == 0.0
    assert path.steps == ((0, 0), (1, 1), (2, 2), (3, 3))


def test_tie_breaking_prefers_ref_step_next():
    # Zero distances on a 3x2 grid.  Backtracking from (2,1) prefers the
    # diagonal predecessor (1,0), whose only way back is a (1,0) step.
    path, _ = dtw_align(np.zeros((3, 1)), np.zeros((2, 1)))
    assert path.steps == ((0, 0), (1, 0), (2, 1))


# ---------------------------------------------------------------------------
# MCD

def test_mcd_identical_zero():
    rng = np.random.default_rng(3)
    frames = rng.normal(size=(12, 5))
    assert mcd(track(frames), track(frames)) == 0.0


def test_mcd_unit_difference_closed_form():
    ref = track(np.array([[7.0, 1.0]]))
    syn = track(np.array([[-3.0, 0.0]]))  # c_0 differs too; must be ignored
    value = mcd(ref, syn)
    assert value == pytest.approx((10.0 / math.log(10.0)) * math.sqrt(2.0), abs=1e-12)
    assert value == pytest.approx(6.1419, abs=1e-3)


def test_mcd_order_mismatch():
    with pytest.raises(OrderMismatchError):
        mcd(track(np.zeros((2, 3))), track(np.zeros((2, 4))))


def test_mcd_matches_brute_force_oracle():
    rng = np.random.default_rng(11)
    for _ in range(60):
        n, m = rng.integers(1, 9), rng.integers(1, 9)
        order = int(rng.integers(1, 5))
        ref = rng.normal(size=(n, order + 1))
        syn = rng.normal(size=(m, order + 1))
        got = mcd(track(ref), track(syn))
        expected = brute_mcd(ref.tolist(), syn.tolist())
        assert got == pytest.approx(expected, abs=1e-9)


def test_mcd_symmetric_on_random_tracks():
    rng = np.random.default_rng(21)
    for _ in range(20):
        a = track(rng.normal(size=(rng.integers(2, 8), 4)))
        b = track(rng.normal(size=(rng.integers(2, 8), 4)))
        assert mcd(a, b) == pytest.approx(mcd(b, a), abs=1e-9)


def test_frame_distance_excludes_c0():
    a = np.array([100.0, 1.0, 2.0])
    b = np.array([-100.0, 1.0, 2.0])
    assert mcd_frame_distance(a, b) == 0.0
