"""Dynamic time warping and mel-cepstral distortion.

The DTW lattice allows steps (1,0), (0,1) and (1,1); cost ties during
backtracking are broken by preferring the diagonal, then the reference
step (1,0).  MCD uses the per-frame distance

    (10 / ln 10) * sqrt(2 * sum_{d=1..D} (c_d - c'_d)^2)

with c_0 excluded, averaged over the steps of the minimum-cost path (not
over reference frames; published values differ by convention).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from indicvox.dsp.mel import McepTrack


class AlignError(ValueError):
    """Base class for alignment failures."""


class EmptyTrackError(AlignError):
    """DTW inputs must contain at least one frame."""


class OrderMismatchError(AlignError):
    """MCD requires equal cepstral order on both tracks."""


MCD_SCALE = 10.0 / math.log(10.0)


@dataclass(frozen=True)
class DtwPath:
    """Monotonic alignment from (0,0) to (n-1, m-1), no gaps."""

    steps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.steps or self.steps[0] != (0, 0):
            raise AlignError("path must start at (0,0)")
        for (i0, j0), (i1, j1) in zip(self.steps, self.steps[1:]):
            di, dj = i1 - i0, j1 - j0
            if (di, dj) not in ((1, 0), (0, 1), (1, 1)):
                raise AlignError(f"illegal step ({di},{dj})")


def euclidean(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))


def dtw_align(
    ref: np.ndarray | McepTrack,
    syn: np.ndarray | McepTrack,
    distance: Callable[[np.ndarray, np.ndarray], float] = euclidean,
) -> tuple[DtwPath, float]:
    """Minimum-cost monotonic alignment; returns the path and its cost.

    Cost of a path is the sum of distance(ref[i], syn[j]) over every cell
    the path visits, including (0,0).
    """
    ref = ref.frames if isinstance(ref, McepTrack) else np.asarray(ref, dtype=np.float64)
    syn = syn.frames if isinstance(syn, McepTrack) else np.asarray(syn, dtype=np.float64)
    if ref.ndim == 1:
        ref = ref[:, None]
    if syn.ndim == 1:
        syn = syn[:, None]
    n, m = len(ref), len(syn)
    if n == 0 or m == 0:
        raise EmptyTrackError("both tracks must be non-empty")

    local = np.empty((n, m))
    for i in range(n):
        for j in range(m):
            local[i, j] = distance(ref[i], syn[j])

    total = np.full((n, m), np.inf)
    total[0, 0] = local[0, 0]
    for i in range(n):
        for j in range(m):
            if i == j == 0:
                continue
            best = np.inf
            if i > 0 and j > 0:
                best = total[i - 1, j - 1]
            if i > 0:
                best = min(best, total[i - 1, j])
            if j > 0:
                best = min(best, total[i, j - 1])
            total[i, j] = local[i, j] + best

    # Backtrack, preferring (1,1), then (1,0), then (0,1) on ties.
    path = [(n - 1, m - 1)]
    i, j = n - 1, m - 1
    while (i, j) != (0, 0):
        candidates = []
        if i > 0 and j > 0:
            candidates.append((total[i - 1, j - 1], (i - 1, j - 1)))
        if i > 0:
            candidates.append((total[i - 1, j], (i - 1, j)))
        if j > 0:
            candidates.append((total[i, j - 1], (i, j - 1)))
        best_cost = min(c for c, _ in candidates)
        i, j = next(cell for cost, cell in candidates if cost == best_cost)
        path.append((i, j))
    path.reverse()
    return DtwPath(tuple(path)), float(total[n - 1, m - 1])


def mcd_frame_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Per-frame MCD in dB over coefficients c_1..c_D (c_0 excluded)."""
    diff = np.asarray(a, dtype=np.float64)[1:] - np.asarray(b, dtype=np.float64)[1:]
    return MCD_SCALE * math.sqrt(2.0 * float(diff @ diff))


def mcd(ref: McepTrack, syn: McepTrack) -> float:
    """DTW-aligned mel-cepstral distortion in dB (mean over path steps)."""
    if ref.order != syn.order:
        raise OrderMismatchError(f"orders differ: {ref.order} vs {syn.order}")
    path, cost = dtw_align(ref, syn, distance=mcd_frame_distance)
    return cost / len(path.steps)
