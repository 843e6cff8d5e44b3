"""Location-sensitive attention with manual gradients, and guided attention.

The attention step scores each encoder state against the decoder query plus
location features convolved from the previous alignment:

    f[j]   = kernel * prevAlignment        (zero-padded, same length)
    e[j]   = v . tanh(Wq q + Wm h[j] + Wl f[j] + b)
    alpha  = softmax(e)
    context = sum_j alpha[j] h[j]

Gradients are derived by hand and validated against central finite
differences through a scalar head: sum(context) plus the guided-attention
loss on the produced alignment treated as a one-row matrix.

Guided attention penalizes off-diagonal mass with
W(n, t) = 1 - exp(-((n/N - t/T)^2) / (2 g^2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_G = 0.2
_REL_ERROR_FLOOR = 1e-5


# ---------------------------------------------------------------------------
# errors

class AttentionError(ValueError):
    """Base class for attention failures."""


class IndexOutOfRangeError(AttentionError):
    """Guided-attention position outside [0, N) x [0, T)."""


class DimensionMismatchError(AttentionError):
    """Operand shapes disagree with the parameter shapes."""


# ---------------------------------------------------------------------------
# guided attention

@dataclass(frozen=True)
class AlignmentMatrix:
    """[T x N] decoder-step by encoder-step attention weights."""

    weights: np.ndarray

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=np.float64)
        if weights.ndim != 2 or weights.shape[0] < 1 or weights.shape[1] < 1:
            raise DimensionMismatchError("alignment must be [T x N] with T, N >= 1")
        if (weights < 0).any() or (weights > 1).any():
            raise AttentionError("alignment entries must lie in [0, 1]")
        sums = weights.sum(axis=1)
        if not np.allclose(sums, 1.0, atol=1e-6):
            raise AttentionError("alignment rows must each sum to 1")
        object.__setattr__(self, "weights", weights)


def guided_attention_weight(
    n: int, big_n: int, t: int, big_t: int, g: float = DEFAULT_G
) -> float:
    """Penalty weight for encoder position n at decoder step t."""
    if big_n < 1 or big_t < 1:
        raise IndexOutOfRangeError("N and T must be >= 1")
    if not 0 <= n < big_n or not 0 <= t < big_t:
        raise IndexOutOfRangeError(f"position ({n}, {t}) outside [0,{big_n}) x [0,{big_t})")
    if g <= 0:
        raise AttentionError("g must be positive")
    delta = n / big_n - t / big_t
    return 1.0 - math.exp(-(delta * delta) / (2.0 * g * g))


def guided_attention_loss(
    alignment: AlignmentMatrix | np.ndarray, g: float = DEFAULT_G
) -> float:
    """Mean of alignment[t, n] * W(n, t) over the whole T x N grid."""
    if not isinstance(alignment, AlignmentMatrix):
        alignment = AlignmentMatrix(alignment)
    weights = alignment.weights
    big_t, big_n = weights.shape
    penalty = _guided_weight_grid(big_n, big_t, g)
    return float((weights * penalty).mean())


def _guided_weight_grid(big_n: int, big_t: int, g: float) -> np.ndarray:
    positions_n = np.arange(big_n) / big_n
    positions_t = np.arange(big_t) / big_t
    delta = positions_n[None, :] - positions_t[:, None]
    return 1.0 - np.exp(-(delta * delta) / (2.0 * g * g))


# ---------------------------------------------------------------------------
# location-sensitive attention

@dataclass(frozen=True)
class AttentionParams:
    """Projection matrices for one attention head.

    query_projection [A x Dq], memory_projection [A x Dh],
    location_projection [A x K], location_kernel [K x W],
    score_vector [A], bias [A].
    """

    query_projection: np.ndarray
    memory_projection: np.ndarray
    location_projection: np.ndarray
    location_kernel: np.ndarray
    score_vector: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        arrays = {
            name: np.asarray(getattr(self, name), dtype=np.float64)
            for name in self.field_names()
        }
        for name, arr in arrays.items():
            expected_ndim = 1 if name in ("score_vector", "bias") else 2
            if arr.ndim != expected_ndim:
                raise DimensionMismatchError(f"{name} must be {expected_ndim}-dimensional")
            if not np.isfinite(arr).all():
                raise AttentionError(f"non-finite values in {name}")
        attn_dim = arrays["score_vector"].shape[0]
        for name in ("query_projection", "memory_projection", "location_projection"):
            if arrays[name].shape[0] != attn_dim:
                raise DimensionMismatchError(
                    f"{name} has {arrays[name].shape[0]} rows, score_vector has {attn_dim}"
                )
        if arrays["bias"].shape[0] != attn_dim:
            raise DimensionMismatchError("bias length must match score_vector")
        if arrays["location_kernel"].shape[0] != arrays["location_projection"].shape[1]:
            raise DimensionMismatchError(
                "location_kernel rows must match location_projection columns"
            )
        for name, arr in arrays.items():
            object.__setattr__(self, name, arr)

    @staticmethod
    def field_names() -> tuple[str, ...]:
        return (
            "query_projection",
            "memory_projection",
            "location_projection",
            "location_kernel",
            "score_vector",
            "bias",
        )


def random_params(
    query_dim: int,
    memory_dim: int,
    attn_dim: int,
    n_filters: int,
    kernel_width: int,
    *,
    seed: int = 0,
    scale: float = 0.5,
) -> AttentionParams:
    rng = np.random.default_rng(seed)
    return AttentionParams(
        query_projection=rng.normal(0, scale, (attn_dim, query_dim)),
        memory_projection=rng.normal(0, scale, (attn_dim, memory_dim)),
        location_projection=rng.normal(0, scale, (attn_dim, n_filters)),
        location_kernel=rng.normal(0, scale, (n_filters, kernel_width)),
        score_vector=rng.normal(0, scale, attn_dim),
        bias=rng.normal(0, scale, attn_dim),
    )


def _location_features(prev_alignment: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """[N x K] same-length correlation of the alignment with each filter."""
    n = len(prev_alignment)
    n_filters, width = kernel.shape
    center = (width - 1) // 2
    features = np.zeros((n, n_filters))
    for w in range(width):
        shift = w - center
        lo, hi = max(0, -shift), min(n, n - shift)
        if lo < hi:
            features[lo:hi] += np.outer(prev_alignment[lo + shift : hi + shift], kernel[:, w])
    return features


def _forward(query, memory, prev_alignment, params):
    features = _location_features(prev_alignment, params.location_kernel)
    pre_activation = (
        params.query_projection @ query
        + memory @ params.memory_projection.T
        + features @ params.location_projection.T
        + params.bias
    )
    activated = np.tanh(pre_activation)
    energies = activated @ params.score_vector
    shifted = np.exp(energies - energies.max())
    alignment = shifted / shifted.sum()
    context = alignment @ memory
    return context, alignment, activated, features


def location_sensitive_attention(
    query: np.ndarray,
    memory: np.ndarray,
    prev_alignment: np.ndarray,
    params: AttentionParams,
) -> tuple[np.ndarray, np.ndarray]:
    """One attention step: (context [Dh], alignment [N])."""
    query = np.asarray(query, dtype=np.float64)
    memory = np.asarray(memory, dtype=np.float64)
    prev_alignment = np.asarray(prev_alignment, dtype=np.float64)
    if query.ndim != 1 or query.shape[0] != params.query_projection.shape[1]:
        raise DimensionMismatchError(
            f"query must have {params.query_projection.shape[1]} components"
        )
    if memory.ndim != 2 or memory.shape[1] != params.memory_projection.shape[1]:
        raise DimensionMismatchError(
            f"memory must be [N x {params.memory_projection.shape[1]}]"
        )
    if prev_alignment.shape != (memory.shape[0],):
        raise DimensionMismatchError("prev_alignment length must match memory rows")
    if not math.isclose(prev_alignment.sum(), 1.0, abs_tol=1e-6):
        raise AttentionError("prev_alignment must sum to 1")
    context, alignment, _, _ = _forward(query, memory, prev_alignment, params)
    return context, alignment


# ---------------------------------------------------------------------------
# scalar head and manual gradients

def attention_head_loss(
    query: np.ndarray,
    memory: np.ndarray,
    prev_alignment: np.ndarray,
    params: AttentionParams,
    g: float = DEFAULT_G,
) -> float:
    """sum(context) + guided loss on the alignment as a one-row matrix."""
    context, alignment = location_sensitive_attention(
        query, memory, prev_alignment, params
    )
    return float(context.sum()) + guided_attention_loss(alignment[None, :], g)


def analytic_gradients(
    query: np.ndarray,
    memory: np.ndarray,
    prev_alignment: np.ndarray,
    params: AttentionParams,
    g: float = DEFAULT_G,
) -> dict[str, np.ndarray]:
    """Hand-derived parameter gradients of attention_head_loss."""
    query = np.asarray(query, dtype=np.float64)
    memory = np.asarray(memory, dtype=np.float64)
    prev_alignment = np.asarray(prev_alignment, dtype=np.float64)
    _, alignment, activated, features = _forward(query, memory, prev_alignment, params)
    n = memory.shape[0]

    # dL/d alpha: context head contributes row sums of memory, guided loss
    # contributes its penalty row divided by the grid size (T=1).
    d_alignment = memory.sum(axis=1) + _guided_weight_grid(n, 1, g)[0] / n
    # softmax Jacobian applied to the upstream alignment gradient
    d_energy = alignment * (d_alignment - alignment @ d_alignment)

    d_score_vector = d_energy @ activated
    d_activated = np.outer(d_energy, params.score_vector)
    d_pre = d_activated * (1.0 - activated * activated)

    d_query_projection = np.outer(d_pre.sum(axis=0), query)
    d_memory_projection = d_pre.T @ memory
    d_location_projection = d_pre.T @ features
    d_bias = d_pre.sum(axis=0)

    d_features = d_pre @ params.location_projection
    n_filters, width = params.location_kernel.shape
    center = (width - 1) // 2
    d_kernel = np.zeros((n_filters, width))
    for w in range(width):
        shift = w - center
        lo, hi = max(0, -shift), min(n, n - shift)
        if lo < hi:
            d_kernel[:, w] = d_features[lo:hi].T @ prev_alignment[lo + shift : hi + shift]

    return {
        "query_projection": d_query_projection,
        "memory_projection": d_memory_projection,
        "location_projection": d_location_projection,
        "location_kernel": d_kernel,
        "score_vector": d_score_vector,
        "bias": d_bias,
    }


def finite_difference_gradients(
    query: np.ndarray,
    memory: np.ndarray,
    prev_alignment: np.ndarray,
    params: AttentionParams,
    g: float = DEFAULT_G,
    eps: float = 1e-5,
) -> dict[str, np.ndarray]:
    """Central differences of attention_head_loss over every param entry."""
    gradients: dict[str, np.ndarray] = {}
    arrays = {name: getattr(params, name).copy() for name in AttentionParams.field_names()}
    for name in AttentionParams.field_names():
        grad = np.zeros_like(arrays[name])
        for index in np.ndindex(grad.shape):
            for sign in (+1, -1):
                perturbed = {k: v.copy() for k, v in arrays.items()}
                perturbed[name][index] += sign * eps
                loss = attention_head_loss(
                    query, memory, prev_alignment, AttentionParams(**perturbed), g
                )
                grad[index] += sign * loss
        gradients[name] = grad / (2.0 * eps)
    return gradients


def max_relative_error(
    analytic: dict[str, np.ndarray], numeric: dict[str, np.ndarray]
) -> float:
    """max |a - n| / max(|a| + |n|, floor) over all parameter entries."""
    worst = 0.0
    for name, a in analytic.items():
        n = numeric[name]
        rel = np.abs(a - n) / np.maximum(np.abs(a) + np.abs(n), _REL_ERROR_FLOOR)
        worst = max(worst, float(rel.max()))
    return worst


def attention_grad_check(
    seed: int = 0, eps: float = 1e-5, *, corrupt: bool = False
) -> float:
    """Max relative error of analytic vs numeric gradients on a seeded instance.

    corrupt=True doubles the largest analytic gradient entry first, as a
    sensitivity control: the check must then report a large error.
    """
    rng = np.random.default_rng(seed)
    n, memory_dim, query_dim, attn_dim = 4, 3, 2, 3
    params = random_params(query_dim, memory_dim, attn_dim, 2, 3, seed=seed + 1)
    query = rng.normal(0, 0.5, query_dim)
    memory = rng.normal(0, 0.5, (n, memory_dim))
    prev = rng.random(n)
    prev /= prev.sum()

    analytic = analytic_gradients(query, memory, prev, params)
    if corrupt:
        largest_name, largest_index, largest_value = "", (), 0.0
        for name, grad in analytic.items():
            index = np.unravel_index(np.abs(grad).argmax(), grad.shape)
            if abs(grad[index]) > abs(largest_value):
                largest_name, largest_index, largest_value = name, index, grad[index]
        analytic[largest_name] = analytic[largest_name].copy()
        analytic[largest_name][largest_index] *= 2.0
    numeric = finite_difference_gradients(query, memory, prev, params, eps=eps)
    return max_relative_error(analytic, numeric)
