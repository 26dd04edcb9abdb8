import numpy as np
import pytest

from somchange import (
    AssociationMatrix,
    DataError,
    DimensionMismatchError,
    Som,
    SomGrid,
    WeightedPattern,
    build_association,
    conditional_pattern,
    input_activation,
)


def make_som(protos, bandwidth=1.0):
    protos = np.asarray(protos, dtype=float)
    grid = SomGrid(topology="rectangular", width=protos.shape[0], height=1)
    return Som(grid=grid, prototypes=protos, bandwidth=bandwidth)


class TestInputActivation:
    def test_tiny_bandwidth_concentrates_on_matching_prototype(self):
        som = make_som([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], bandwidth=1e-6)
        a = input_activation(som, np.array([1.0, 0.0]))
        assert a[1] > 0.99

    def test_equidistant_prototypes_get_equal_activation(self):
        som = make_som([[-1.0, 0.0], [1.0, 0.0], [50.0, 50.0]], bandwidth=0.8)
        a = input_activation(som, np.array([0.0, 0.0]))
        assert a[0] == pytest.approx(a[1], abs=1e-9)

    def test_sums_to_one_and_matches_direct_formula(self):
        rng = np.random.default_rng(5)
        som = make_som(rng.normal(size=(7, 3)), bandwidth=0.9)
        for _ in range(25):
            x = rng.normal(size=3)
            a = input_activation(som, x)
            assert a.sum() == pytest.approx(1.0, abs=1e-12)
            d2 = ((som.prototypes - x) ** 2).sum(axis=1)
            direct = np.exp(-d2 / (2 * 0.9**2))
            direct /= direct.sum()
            assert np.allclose(a, direct, atol=1e-9)

    def test_dimension_mismatch(self):
        som = make_som([[0.0, 0.0]])
        with pytest.raises(DimensionMismatchError):
            input_activation(som, np.array([1.0]))

    def test_non_finite_input_rejected(self):
        som = make_som([[0.0, 0.0]])
        with pytest.raises(DataError):
            input_activation(som, np.array([np.nan, 0.0]))


class TestBuildAssociation:
    def test_single_delta_record(self):
        in_som = make_som([[0.0], [5.0], [10.0]], bandwidth=1e-9)
        out_som = make_som([[0.0, 0.0], [3.0, 3.0]], bandwidth=1e-9)
        assoc = build_association(in_som, out_som, np.array([[5.0]]), np.array([[3.0, 3.0]]))
        assert assoc.entries[1, 1] == pytest.approx(1.0, abs=1e-9)
        # unvisited rows fall back to uniform
        assert np.allclose(assoc.entries[0], 0.5, atol=1e-9)

    def test_duplicating_records_leaves_matrix_unchanged(self):
        rng = np.random.default_rng(1)
        in_som = make_som(rng.normal(size=(4, 2)), bandwidth=0.7)
        out_som = make_som(rng.normal(size=(3, 2)), bandwidth=0.7)
        xin = rng.normal(size=(10, 2))
        xout = rng.normal(size=(10, 2))
        once = build_association(in_som, out_som, xin, xout)
        twice = build_association(
            in_som, out_som, np.vstack([xin, xin]), np.vstack([xout, xout])
        )
        assert np.allclose(once.entries, twice.entries, atol=1e-12)

    def test_matches_brute_force_double_loop(self):
        rng = np.random.default_rng(2)
        in_som = make_som(rng.normal(size=(5, 2)), bandwidth=0.6)
        out_som = make_som(rng.normal(size=(4, 3)), bandwidth=0.8)
        xin = rng.normal(size=(20, 2))
        xout = rng.normal(size=(20, 3))
        assoc = build_association(in_som, out_som, xin, xout)

        raw = np.zeros((5, 4))
        for r in range(20):
            ai = input_activation(in_som, xin[r])
            ao = input_activation(out_som, xout[r])
            for i in range(5):
                for j in range(4):
                    raw[i, j] += ai[i] * ao[j]
        raw /= raw.sum(axis=1, keepdims=True)
        assert np.allclose(assoc.entries, raw, atol=1e-9)

    def test_permutation_of_records_is_bit_identical(self):
        rng = np.random.default_rng(3)
        in_som = make_som(rng.normal(size=(4, 2)), bandwidth=0.5)
        out_som = make_som(rng.normal(size=(4, 2)), bandwidth=0.5)
        xin = rng.normal(size=(15, 2))
        xout = rng.normal(size=(15, 2))
        a = build_association(in_som, out_som, xin, xout)
        perm = rng.permutation(15)
        b = build_association(in_som, out_som, xin[perm], xout[perm])
        assert np.array_equal(a.entries, b.entries)

    def test_empty_pairing_rejected(self):
        som = make_som([[0.0]])
        with pytest.raises(DataError):
            build_association(som, som, np.zeros((0, 1)), np.zeros((0, 1)))

    def test_dimension_mismatch_rejected(self):
        som = make_som([[0.0, 0.0]])
        with pytest.raises(DimensionMismatchError):
            build_association(som, som, np.zeros((3, 1)), np.zeros((3, 2)))


class TestConditionalPattern:
    def test_delta_input_extracts_association_row(self):
        in_som = make_som([[0.0], [10.0]], bandwidth=1e-9)
        out_som = make_som([[0.0], [1.0], [2.0]], bandwidth=1.0)
        entries = np.array([[0.2, 0.3, 0.5], [0.6, 0.3, 0.1]])
        assoc = AssociationMatrix(entries=entries, row_normalized=True)
        pattern = conditional_pattern(np.array([10.0]), assoc, in_som, out_som)
        assert np.allclose(pattern.weights, entries[1], atol=1e-9)

    def test_uniform_rows_give_uniform_pattern(self):
        rng = np.random.default_rng(4)
        in_som = make_som(rng.normal(size=(3, 2)), bandwidth=0.7)
        out_som = make_som(rng.normal(size=(5, 2)), bandwidth=0.7)
        assoc = AssociationMatrix(entries=np.full((3, 5), 0.2), row_normalized=True)
        pattern = conditional_pattern(rng.normal(size=2), assoc, in_som, out_som)
        assert np.allclose(pattern.weights, 0.2, atol=1e-12)

    def test_matches_brute_force_and_sums_to_one(self):
        rng = np.random.default_rng(6)
        in_som = make_som(rng.normal(size=(4, 2)), bandwidth=0.9)
        out_som = make_som(rng.normal(size=(6, 2)), bandwidth=0.9)
        assoc = build_association(
            in_som, out_som, rng.normal(size=(12, 2)), rng.normal(size=(12, 2))
        )
        for _ in range(20):
            x = rng.normal(size=2)
            pattern = conditional_pattern(x, assoc, in_som, out_som)
            assert pattern.weights.sum() == pytest.approx(1.0, abs=1e-12)
            a = input_activation(in_som, x)
            expected = a @ assoc.entries
            expected /= expected.sum()
            assert np.allclose(pattern.weights, expected, atol=1e-12)

    def test_zero_association_column_gives_zero_weight(self):
        in_som = make_som([[0.0], [1.0]], bandwidth=0.5)
        out_som = make_som([[0.0], [1.0], [2.0]], bandwidth=0.5)
        entries = np.array([[0.5, 0.5, 0.0], [0.25, 0.75, 0.0]])
        assoc = AssociationMatrix(entries=entries, row_normalized=True)
        pattern = conditional_pattern(np.array([0.3]), assoc, in_som, out_som)
        assert pattern.weights[2] == 0.0

    def test_shape_mismatch_rejected(self):
        in_som = make_som([[0.0], [1.0]])
        out_som = make_som([[0.0], [1.0]])
        assoc = AssociationMatrix(entries=np.full((3, 2), 0.5), row_normalized=True)
        with pytest.raises(DimensionMismatchError):
            conditional_pattern(np.array([0.0]), assoc, in_som, out_som)


class TestWeightedPatternInvariants:
    def test_weights_must_sum_to_one(self, rgb_som):
        from somchange import PatternError

        with pytest.raises(PatternError):
            WeightedPattern(som=rgb_som, weights=np.full(9, 0.2))

    def test_negative_weights_rejected(self, rgb_som):
        from somchange import PatternError

        w = np.zeros(9)
        w[0], w[1] = 1.5, -0.5
        with pytest.raises(PatternError):
            WeightedPattern(som=rgb_som, weights=w)

    def test_conditional_pattern_valid_for_extreme_inputs(self):
        rng = np.random.default_rng(11)
        in_som = make_som(rng.normal(size=(4, 2)), bandwidth=0.4)
        out_som = make_som(rng.normal(size=(5, 2)), bandwidth=0.4)
        assoc = build_association(
            in_som, out_som, rng.normal(size=(8, 2)), rng.normal(size=(8, 2))
        )
        for x in (np.array([1e3, -1e3]), np.array([0.0, 0.0]), np.array([-50.0, 2.0])):
            pattern = conditional_pattern(x, assoc, in_som, out_som)
            assert (pattern.weights >= 0).all()
            assert pattern.weights.sum() == pytest.approx(1.0, abs=1e-9)
