import numpy as np
import pytest

from optfalsify import (
    ClassicalState,
    MarkovMap,
    apply_markov,
    classical_falsifier_exists,
    classical_probability,
    deterministic_effect,
    embed_classical,
    permutation_map,
    sample_classical,
)
from optfalsify.errors import (
    DimensionMismatchError,
    NotDeterministicError,
    OutOfRangeError,
)
from optfalsify.quantum import Effect, born_probability, state_support


class TestClassicalState:
    def test_negative_entry_rejected(self):
        with pytest.raises(OutOfRangeError):
            ClassicalState([0.5, -0.2, 0.7])

    def test_tiny_negative_clamped(self):
        st = ClassicalState([1.0, -5e-11])
        assert st.probs[1] == 0.0

    def test_mass_bounds(self):
        with pytest.raises(OutOfRangeError):
            ClassicalState([0.8, 0.4])
        with pytest.raises(OutOfRangeError):
            ClassicalState([0.0, 0.0])

    def test_deterministic_flag(self):
        assert ClassicalState([0.3, 0.7]).deterministic
        assert not ClassicalState([0.3, 0.3]).deterministic

    def test_immutable(self):
        st = ClassicalState([0.5, 0.5])
        with pytest.raises(ValueError):
            st.probs[0] = 2.0


class TestMarkovMap:
    def test_column_over_unity_rejected(self):
        with pytest.raises(OutOfRangeError):
            MarkovMap([[0.8, 0.0], [0.4, 1.0]])

    def test_negative_entry_rejected(self):
        with pytest.raises(OutOfRangeError):
            MarkovMap([[1.2, 0.0], [-0.2, 1.0]])

    def test_deterministic_flag(self):
        assert MarkovMap([[0.5, 0.0], [0.5, 1.0]]).deterministic
        assert not MarkovMap([[0.5, 0.0], [0.25, 1.0]]).deterministic

    def test_apply_preserves_simplex(self):
        m = MarkovMap([[0.5, 0.1], [0.5, 0.9]])
        out = apply_markov(m, ClassicalState([0.2, 0.8]))
        assert out.probs.sum() == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(out.probs, [0.18, 0.82], atol=1e-15)

    def test_apply_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            apply_markov(MarkovMap(np.eye(3)), ClassicalState([0.5, 0.5]))


class TestEffectsAndProbability:
    def test_deterministic_effect_is_total_mass(self):
        st = ClassicalState([0.25, 0.25])
        p = classical_probability(deterministic_effect(2), st)
        assert p == pytest.approx(0.5, abs=1e-15)

    def test_indicator_row(self):
        eff = MarkovMap([[0.0, 1.0, 0.0]])
        assert classical_probability(
            eff, ClassicalState([0.2, 0.3, 0.5])
        ) == pytest.approx(0.3, abs=1e-15)

    def test_effect_must_be_single_row(self):
        with pytest.raises(DimensionMismatchError):
            classical_probability(MarkovMap(np.eye(2)), ClassicalState([0.5, 0.5]))

    def test_effect_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            classical_probability(deterministic_effect(3), ClassicalState([0.5, 0.5]))


class TestPermutation:
    def test_reversible(self):
        perm = permutation_map([2, 0, 1])
        inv = permutation_map([1, 2, 0])
        st = ClassicalState([0.2, 0.3, 0.5])
        out = apply_markov(inv, apply_markov(perm, st))
        np.testing.assert_allclose(out.probs, st.probs, atol=0)

    def test_invalid_permutation(self):
        with pytest.raises(OutOfRangeError):
            permutation_map([0, 0, 1])


class TestEmbedding:
    def test_diagonal_state_matches(self):
        st = ClassicalState([0.2, 0.3, 0.5])
        rho = embed_classical(st)
        assert np.array_equal(rho.matrix, np.diag([0.2, 0.3, 0.5]).astype(complex))

    def test_born_rule_agreement(self):
        st = ClassicalState([0.1, 0.6, 0.3])
        rho = embed_classical(st)
        for i in range(3):
            row = np.zeros((1, 3))
            row[0, i] = 1.0
            proj = np.zeros((3, 3))
            proj[i, i] = 1.0
            assert classical_probability(MarkovMap(row), st) == pytest.approx(
                born_probability(rho, Effect(proj)), abs=1e-12
            )

    def test_support_projector_is_indicator(self):
        rho = embed_classical(ClassicalState([0.5, 0.0, 0.5]))
        np.testing.assert_allclose(
            state_support(rho), np.diag([1.0, 0.0, 1.0]), atol=1e-12
        )


class TestClassicalFalsifier:
    def test_point_mass_has_falsifier(self):
        assert classical_falsifier_exists(ClassicalState([1.0, 0.0])) == (1,)

    def test_interior_distribution_has_none(self):
        assert classical_falsifier_exists(ClassicalState([0.3, 0.7])) is None

    def test_partial_support(self):
        idx = classical_falsifier_exists(ClassicalState([0.5, 0.0, 0.5, 0.0]))
        assert idx == (1, 3)

    def test_requires_normalized(self):
        with pytest.raises(NotDeterministicError):
            classical_falsifier_exists(ClassicalState([0.25, 0.25]))


class TestSampling:
    def test_frequencies(self):
        rng = np.random.default_rng(7)
        probs = np.array([0.2, 0.5, 0.3])
        n = 200_000
        draws = sample_classical(ClassicalState(probs), n, rng)
        counts = np.bincount(draws, minlength=3) / n
        # 4 sigma on each cell
        for k in range(3):
            sigma = np.sqrt(probs[k] * (1 - probs[k]) / n)
            assert abs(counts[k] - probs[k]) <= 4 * sigma

    def test_deterministic_given_seed(self):
        a = sample_classical(ClassicalState([0.4, 0.6]), 50, np.random.default_rng(3))
        b = sample_classical(ClassicalState([0.4, 0.6]), 50, np.random.default_rng(3))
        assert np.array_equal(a, b)

    def test_point_mass_constant(self):
        draws = sample_classical(
            ClassicalState([0.0, 1.0]), 100, np.random.default_rng(0)
        )
        assert np.all(draws == 1)

    def test_requires_normalized(self):
        with pytest.raises(NotDeterministicError):
            sample_classical(ClassicalState([0.4, 0.4]), 5, np.random.default_rng(0))
