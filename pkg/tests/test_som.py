import numpy as np
import pytest

from somchange import (
    DataError,
    DimensionMismatchError,
    FeatureSpec,
    Som,
    SomGrid,
    TrainConfig,
    bmu,
    quantization_error,
    topographic_error,
    train_som,
)
from oracles import brute_force_bmu, brute_force_qe, reference_batch_som


def small_som(protos, topology="rectangular", width=None, height=1):
    protos = np.asarray(protos, dtype=float)
    width = width if width is not None else protos.shape[0]
    grid = SomGrid(topology=topology, width=width, height=height)
    return Som(grid=grid, prototypes=protos, bandwidth=1.0)


class TestTrain:
    def test_degenerate_single_row_dataset(self):
        row = np.array([0.7, -0.2, 1.4])
        data = np.tile(row, (50, 1))
        som = train_som(data, SomGrid(topology="rectangular", width=2, height=2), TrainConfig(epochs=8, seed=5))
        assert np.allclose(som.prototypes, row, atol=1e-6)
        assert quantization_error(som, data) < 1e-6

    def test_two_separated_clusters_land_on_non_adjacent_neurons(self):
        rng = np.random.default_rng(0)
        data = np.vstack(
            [rng.normal(size=(40, 2)) * 0.3 + 5.0, rng.normal(size=(40, 2)) * 0.3 - 5.0]
        )
        grid = SomGrid(topology="hexagonal", width=3, height=3)
        som = train_som(data, grid, TrainConfig(epochs=30, seed=7))
        b_hi = bmu(som, np.array([5.0, 5.0]))
        b_lo = bmu(som, np.array([-5.0, -5.0]))
        assert b_hi != b_lo
        assert not som.grid.adjacency()[b_hi, b_lo]
        # second opinion: an independently coded batch SOM separates them too
        ref = reference_batch_som(
            data.tolist(), grid.positions.tolist(), 30, 0.75, 0.5, som.prototypes.tolist()
        )
        rb_hi = brute_force_bmu(ref, [5.0, 5.0])
        rb_lo = brute_force_bmu(ref, [-5.0, -5.0])
        assert not som.grid.adjacency()[rb_hi, rb_lo]

    def test_130_rows_on_10x12_hexagonal(self):
        rng = np.random.default_rng(42)
        data = rng.normal(size=(130, 5))
        som = train_som(data, SomGrid(topology="hexagonal", width=10, height=12), TrainConfig(epochs=30, seed=2))
        qe = quantization_error(som, data)
        te = topographic_error(som, data)
        assert np.isfinite(qe) and qe > 0
        assert 0.0 <= te <= 1.0

    def test_deterministic_for_fixed_seed(self):
        rng = np.random.default_rng(3)
        data = rng.normal(size=(60, 4))
        grid = SomGrid(topology="hexagonal", width=4, height=4)
        cfg = TrainConfig(epochs=15, seed=11)
        a = train_som(data, grid, cfg)
        b = train_som(data, grid, cfg)
        assert np.array_equal(a.prototypes, b.prototypes)

    def test_qe_history_non_increasing_in_final_half(self):
        rng = np.random.default_rng(9)
        data = rng.normal(size=(80, 3))
        som = train_som(data, SomGrid(topology="hexagonal", width=4, height=5), TrainConfig(epochs=24, seed=1))
        half = np.array(som.qe_history[len(som.qe_history) // 2 :])
        assert (np.diff(half) <= 1e-6).all()

    def test_pca_plane_init_deterministic(self):
        rng = np.random.default_rng(8)
        data = rng.normal(size=(50, 3)) @ np.diag([3.0, 1.0, 0.2])
        cfg = TrainConfig(epochs=10, seed=4, init="pca_plane")
        grid = SomGrid(topology="rectangular", width=4, height=3)
        a = train_som(data, grid, cfg)
        b = train_som(data, grid, cfg)
        assert np.array_equal(a.prototypes, b.prototypes)

    def test_empty_data_rejected(self):
        with pytest.raises(DataError):
            train_som(np.zeros((0, 3)), SomGrid(topology="rectangular", width=2, height=2))

    def test_non_finite_data_rejected(self):
        data = np.array([[0.0, np.nan], [1.0, 2.0]])
        with pytest.raises(DataError):
            train_som(data, SomGrid(topology="rectangular", width=2, height=2))

    def test_bandwidth_equals_final_qe(self):
        rng = np.random.default_rng(12)
        data = rng.normal(size=(40, 2))
        som = train_som(data, SomGrid(topology="hexagonal", width=3, height=3), TrainConfig(epochs=12, seed=0))
        assert som.bandwidth == pytest.approx(quantization_error(som, data), abs=1e-12)


class TestBmu:
    def test_exact_prototype_match(self):
        som = small_som([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 5.0]])
        assert bmu(som, np.array([3.0, 5.0])) == 3

    def test_tie_breaks_to_lowest_index(self):
        som = small_som([[0.0, 0.0], [2.0, 0.0], [9.0, 9.0]])
        assert bmu(som, np.array([1.0, 0.0])) == 0

    def test_matches_brute_force_scan(self):
        rng = np.random.default_rng(7)
        som = small_som(rng.normal(size=(12, 4)))
        for _ in range(50):
            x = rng.normal(size=4)
            assert bmu(som, x) == brute_force_bmu(som.prototypes.tolist(), x.tolist())

    def test_dimension_mismatch(self):
        som = small_som([[0.0, 0.0]])
        with pytest.raises(DimensionMismatchError):
            bmu(som, np.array([1.0, 2.0, 3.0]))


class TestQuantizationError:
    def test_zero_on_prototype_set(self):
        protos = np.array([[0.0, 1.0], [2.0, 3.0], [4.0, 5.0]])
        som = small_som(protos)
        assert quantization_error(som, protos) == pytest.approx(0.0, abs=1e-9)

    def test_single_row_at_known_distance(self):
        som = small_som([[0.0, 0.0], [10.0, 10.0]])
        assert quantization_error(som, np.array([[2.0, 0.0]])) == pytest.approx(2.0)

    def test_matches_brute_force_on_100_random_instances(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            n = int(rng.integers(2, 10))
            m = int(rng.integers(1, 5))
            som = small_som(rng.normal(size=(n, m)), width=n, height=1)
            data = rng.normal(size=(int(rng.integers(1, 25)), m))
            assert quantization_error(som, data) == pytest.approx(
                brute_force_qe(som.prototypes.tolist(), data.tolist()), abs=1e-9
            )

    def test_empty_data_rejected(self):
        som = small_som([[0.0, 0.0]])
        with pytest.raises(DataError):
            quantization_error(som, np.zeros((0, 2)))


class TestTopographicError:
    def test_adjacent_best_pair_gives_zero(self):
        # prototypes arranged so the two nearest units are grid neighbors
        grid = SomGrid(topology="rectangular", width=3, height=1)
        som = Som(grid=grid, prototypes=np.array([[0.0], [1.0], [9.0]]), bandwidth=1.0)
        assert topographic_error(som, np.array([[0.2]])) == 0.0

    def test_opposite_corner_best_pair_gives_one(self):
        grid = SomGrid(topology="rectangular", width=3, height=3)
        protos = np.full((9, 1), 100.0)
        protos[0, 0] = 0.0
        protos[8, 0] = 1.0  # second-best sits at the far corner
        som = Som(grid=grid, prototypes=protos, bandwidth=1.0)
        assert topographic_error(som, np.array([[0.0]])) == 1.0

    def test_mixed_set_averages(self):
        grid = SomGrid(topology="rectangular", width=3, height=3)
        protos = np.full((9, 1), 100.0)
        protos[0, 0] = 0.0
        protos[1, 0] = 1.0
        protos[8, 0] = 50.0
        som = Som(grid=grid, prototypes=protos, bandwidth=1.0)
        # row 0: best 0, second 1 (adjacent). row 1: best 8, second 0 or 1 (not adjacent)
        data = np.array([[0.0], [60.0]])
        assert topographic_error(som, data) == pytest.approx(0.5)


class TestFeatureSpec:
    def test_round_trip(self):
        spec = FeatureSpec(name="depth", index=0, z_mean=12.0, z_std=4.0)
        assert spec.to_raw(spec.to_z(17.3)) == pytest.approx(17.3)

    def test_zero_std_rejected(self):
        with pytest.raises(ValueError):
            FeatureSpec(name="flat", index=0, z_mean=0.0, z_std=0.0)

    def test_duplicate_names_rejected(self):
        grid = SomGrid(topology="rectangular", width=1, height=1)
        feats = [FeatureSpec("a", 0), FeatureSpec("a", 1)]
        with pytest.raises(ValueError):
            Som(grid=grid, prototypes=np.zeros((1, 2)), features=feats, bandwidth=1.0)
