import math

import numpy as np
import pytest

from indicvox.attention import (
    AlignmentMatrix,
    AttentionError,
    AttentionParams,
    DimensionMismatchError,
    IndexOutOfRangeError,
    analytic_gradients,
    attention_grad_check,
    attention_head_loss,
    finite_difference_gradients,
    guided_attention_loss,
    guided_attention_weight,
    location_sensitive_attention,
    max_relative_error,
    random_params,
)


def loop_guided_loss(weights, g):
    """Independent oracle: scalar double loop over the published formula."""
    big_t, big_n = weights.shape
    total = 0.0
    for t in range(big_t):
        for n in range(big_n):
            delta = n / big_n - t / big_t
            total += weights[t][n] * (1.0 - math.exp(-(delta**2) / (2 * g * g)))
    return total / (big_t * big_n)


def loop_attention(query, memory, prev, params):
    """Independent oracle: attention forward pass written as scalar loops."""
    n_states, _ = memory.shape
    n_filters, width = params.location_kernel.shape
    center = (width - 1) // 2
    energies = []
    for j in range(n_states):
        features = np.zeros(n_filters)
        for k in range(n_filters):
            for w in range(width):
                src = j + w - center
                if 0 <= src < n_states:
                    features[k] += params.location_kernel[k][w] * prev[src]
        pre = (
            params.query_projection @ query
            + params.memory_projection @ memory[j]
            + params.location_projection @ features
            + params.bias
        )
        energies.append(float(params.score_vector @ np.tanh(pre)))
    exps = [math.exp(e - max(energies)) for e in energies]
    alignment = np.array([e / sum(exps) for e in exps])
    context = sum(alignment[j] * memory[j] for j in range(n_states))
    return context, alignment


class TestGuidedWeight:
    def test_reference_value(self):
        # delta = 0.2 with g = 0.2 gives 1 - exp(-1/2)
        assert guided_attention_weight(2, 10, 0, 1) == pytest.approx(
            0.393469, abs=1e-6
        )

    def test_diagonal_is_zero(self):
        for n in range(6):
            assert guided_attention_weight(n, 6, n, 6) == 0.0

    def test_symmetric_when_square(self):
        for n in range(5):
            for t in range(5):
                assert guided_attention_weight(n, 5, t, 5) == pytest.approx(
                    guided_attention_weight(t, 5, n, 5)
                )

    def test_larger_g_is_more_tolerant(self):
        weights = [guided_attention_weight(4, 10, 0, 10, g) for g in (0.1, 0.2, 0.4)]
        assert weights[0] > weights[1] > weights[2]

    def test_out_of_range_positions(self):
        with pytest.raises(IndexOutOfRangeError):
            guided_attention_weight(5, 5, 0, 5)
        with pytest.raises(IndexOutOfRangeError):
            guided_attention_weight(0, 5, -1, 5)
        with pytest.raises(IndexOutOfRangeError):
            guided_attention_weight(0, 0, 0, 5)


class TestGuidedLoss:
    def test_matches_loop_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            big_t = int(rng.integers(1, 7))
            big_n = int(rng.integers(1, 7))
            raw = rng.random((big_t, big_n)) + 0.01
            weights = raw / raw.sum(axis=1, keepdims=True)
            for g in (0.1, 0.2, 0.4):
                assert guided_attention_loss(weights, g) == pytest.approx(
                    loop_guided_loss(weights, g), abs=1e-12
                )

    def test_single_position_is_zero(self):
        assert guided_attention_loss(np.array([[1.0]])) == 0.0

    def test_diagonal_beats_antidiagonal(self):
        diagonal = np.eye(8)
        antidiagonal = np.eye(8)[::-1]
        assert guided_attention_loss(diagonal) < guided_attention_loss(antidiagonal)

    def test_loss_decreases_with_g(self):
        alignment = np.eye(8)[::-1]
        losses = [guided_attention_loss(alignment, g) for g in (0.1, 0.2, 0.4)]
        assert losses[0] > losses[1] > losses[2]

    def test_alignment_rows_must_sum_to_one(self):
        with pytest.raises(AttentionError):
            AlignmentMatrix(np.full((2, 3), 0.5))

    def test_alignment_entries_must_be_probabilities(self):
        with pytest.raises(AttentionError):
            AlignmentMatrix(np.array([[1.5, -0.5]]))

    def test_alignment_must_be_2d(self):
        with pytest.raises(DimensionMismatchError):
            AlignmentMatrix(np.ones(3))


class TestForward:
    def test_matches_loop_oracle(self):
        rng = np.random.default_rng(1)
        for seed in range(10):
            n, memory_dim, query_dim, attn_dim = (
                int(rng.integers(1, 7)),
                int(rng.integers(1, 5)),
                int(rng.integers(1, 5)),
                int(rng.integers(1, 5)),
            )
            params = random_params(query_dim, memory_dim, attn_dim, 2, 3, seed=seed)
            query = rng.normal(0, 1, query_dim)
            memory = rng.normal(0, 1, (n, memory_dim))
            prev = rng.random(n)
            prev /= prev.sum()
            context, alignment = location_sensitive_attention(
                query, memory, prev, params
            )
            oracle_context, oracle_alignment = loop_attention(
                query, memory, prev, params
            )
            np.testing.assert_allclose(alignment, oracle_alignment, atol=1e-12)
            np.testing.assert_allclose(context, oracle_context, atol=1e-12)

    def test_alignment_is_distribution(self):
        params = random_params(2, 3, 4, 2, 3, seed=5)
        rng = np.random.default_rng(5)
        prev = np.full(6, 1 / 6)
        _, alignment = location_sensitive_attention(
            rng.normal(0, 1, 2), rng.normal(0, 1, (6, 3)), prev, params
        )
        assert alignment.sum() == pytest.approx(1.0, abs=1e-12)
        assert (alignment >= 0).all()

    def test_context_is_convex_combination(self):
        # every context component must lie inside its memory column's range
        params = random_params(2, 3, 4, 2, 3, seed=9)
        rng = np.random.default_rng(9)
        memory = rng.normal(0, 2, (8, 3))
        prev = np.full(8, 1 / 8)
        context, _ = location_sensitive_attention(
            rng.normal(0, 1, 2), memory, prev, params
        )
        for d in range(3):
            assert memory[:, d].min() - 1e-12 <= context[d] <= memory[:, d].max() + 1e-12

    def test_zero_params_give_uniform_alignment(self):
        params = AttentionParams(
            query_projection=np.zeros((3, 2)),
            memory_projection=np.zeros((3, 4)),
            location_projection=np.zeros((3, 2)),
            location_kernel=np.zeros((2, 3)),
            score_vector=np.zeros(3),
            bias=np.zeros(3),
        )
        memory = np.random.default_rng(0).normal(0, 1, (5, 4))
        context, alignment = location_sensitive_attention(
            np.zeros(2), memory, np.full(5, 0.2), params
        )
        np.testing.assert_allclose(alignment, np.full(5, 0.2), atol=1e-15)
        np.testing.assert_allclose(context, memory.mean(axis=0), atol=1e-12)

    def test_single_state_memory(self):
        params = random_params(2, 3, 4, 2, 3, seed=1)
        memory = np.array([[1.0, 2.0, 3.0]])
        context, alignment = location_sensitive_attention(
            np.zeros(2), memory, np.array([1.0]), params
        )
        np.testing.assert_allclose(alignment, [1.0])
        np.testing.assert_allclose(context, memory[0])

    def test_query_dimension_checked(self):
        params = random_params(2, 3, 4, 2, 3, seed=1)
        with pytest.raises(DimensionMismatchError):
            location_sensitive_attention(
                np.zeros(5), np.zeros((4, 3)), np.full(4, 0.25), params
            )

    def test_memory_dimension_checked(self):
        params = random_params(2, 3, 4, 2, 3, seed=1)
        with pytest.raises(DimensionMismatchError):
            location_sensitive_attention(
                np.zeros(2), np.zeros((4, 9)), np.full(4, 0.25), params
            )

    def test_prev_alignment_length_checked(self):
        params = random_params(2, 3, 4, 2, 3, seed=1)
        with pytest.raises(DimensionMismatchError):
            location_sensitive_attention(
                np.zeros(2), np.zeros((4, 3)), np.full(3, 1 / 3), params
            )

    def test_prev_alignment_must_sum_to_one(self):
        params = random_params(2, 3, 4, 2, 3, seed=1)
        with pytest.raises(AttentionError):
            location_sensitive_attention(
                np.zeros(2), np.zeros((4, 3)), np.full(4, 0.5), params
            )

    def test_params_shape_consistency_checked(self):
        with pytest.raises(DimensionMismatchError):
            AttentionParams(
                query_projection=np.zeros((3, 2)),
                memory_projection=np.zeros((4, 4)),
                location_projection=np.zeros((3, 2)),
                location_kernel=np.zeros((2, 3)),
                score_vector=np.zeros(3),
                bias=np.zeros(3),
            )


class TestGradients:
    def test_twenty_seeds_under_tolerance(self):
        for seed in range(20):
            assert attention_grad_check(seed) < 1e-4

    def test_zero_params_agree(self):
        params = AttentionParams(
            query_projection=np.zeros((3, 2)),
            memory_projection=np.zeros((3, 3)),
            location_projection=np.zeros((3, 2)),
            location_kernel=np.zeros((2, 3)),
            score_vector=np.zeros(3),
            bias=np.zeros(3),
        )
        rng = np.random.default_rng(4)
        query = rng.normal(0, 1, 2)
        memory = rng.normal(0, 1, (4, 3))
        prev = np.full(4, 0.25)
        analytic = analytic_gradients(query, memory, prev, params)
        numeric = finite_difference_gradients(query, memory, prev, params)
        assert max_relative_error(analytic, numeric) < 1e-6

    def test_corrupted_gradient_is_caught(self):
        for seed in range(5):
            assert attention_grad_check(seed, corrupt=True) > 1e-2

    def test_gradient_shapes_match_params(self):
        params = random_params(2, 3, 4, 2, 3, seed=2)
        rng = np.random.default_rng(2)
        grads = analytic_gradients(
            rng.normal(0, 1, 2),
            rng.normal(0, 1, (5, 3)),
            np.full(5, 0.2),
            params,
        )
        for name in AttentionParams.field_names():
            assert grads[name].shape == getattr(params, name).shape

    def test_head_loss_is_finite(self):
        params = random_params(2, 3, 4, 2, 3, seed=3)
        rng = np.random.default_rng(3)
        loss = attention_head_loss(
            rng.normal(0, 1, 2), rng.normal(0, 1, (5, 3)), np.full(5, 0.2), params
        )
        assert math.isfinite(loss)
