import numpy as np
import pytest

from cskit.kmeans import _run_replica, lloyd, mse, rse
from cskit.rng import substream
from cskit.sketching import EmptyDatasetError


class TestMse:
    def test_zero_when_centroids_cover_points(self):
        rng = np.random.default_rng(0)
        data = rng.normal(size=(7, 2))
        assert mse(data, data) == 0.0

    def test_single_centroid_at_mean_is_total_variance(self):
        rng = np.random.default_rng(1)
        data = rng.normal(size=(500, 3))
        center = data.mean(axis=0, keepdims=True)
        expected = np.trace(np.cov(data.T, bias=True))
        assert abs(mse(center, data) - expected) < 1e-12

    def test_brute_force_oracle(self):
        rng = np.random.default_rng(2)
        data = rng.normal(size=(5, 2))
        centroids = rng.normal(size=(2, 2))
        expected = np.mean(
            [min(np.sum((x - c) ** 2) for c in centroids) for x in data]
        )
        assert abs(mse(centroids, data) - expected) < 1e-12

    def test_permutation_invariance_exact(self):
        rng = np.random.default_rng(3)
        data = rng.normal(size=(40, 2))
        centroids = rng.normal(size=(4, 2))
        base = mse(centroids, data)
        assert mse(centroids[::-1], data) == base
        assert mse(centroids, data[rng.permutation(40)]) == base

    def test_appending_centroid_never_hurts(self):
        rng = np.random.default_rng(4)
        data = rng.normal(size=(60, 2))
        centroids = rng.normal(size=(3, 2))
        base = mse(centroids, data)
        for _ in range(10):
            extended = np.vstack([centroids, rng.normal(size=(1, 2))])
            assert mse(extended, data) <= base + 1e-12

    def test_empty_dataset_is_an_error(self):
        with pytest.raises(EmptyDatasetError):
            mse(np.zeros((1, 2)), np.empty((0, 2)))


class TestLloyd:
    def test_recovers_exact_clusters(self):
        rng = np.random.default_rng(5)
        points = rng.normal(size=(4, 2))
        data = np.repeat(points, 10, axis=0)
        centers = lloyd(data, k=4, seed=0)
        assert mse(centers, data) < 1e-24
        matched = sorted(tuple(np.round(c, 9)) for c in centers)
        expected = sorted(tuple(np.round(p, 9)) for p in points)
        assert matched == expected

    def test_k_one_is_the_mean(self):
        rng = np.random.default_rng(6)
        data = rng.normal(size=(100, 3))
        centers = lloyd(data, k=1, seed=0)
        assert np.abs(centers[0] - data.mean(axis=0)).max() < 1e-12

    def test_k_equals_n(self):
        rng = np.random.default_rng(7)
        data = rng.normal(size=(6, 2))
        centers = lloyd(data, k=6, seed=0)
        assert mse(centers, data) < 1e-24

    def test_replica_mse_monotone(self):
        rng = np.random.default_rng(8)
        data = np.vstack(
            [rng.normal(size=(100, 2)) * 0.1 + mu for mu in ([0, 0], [2, 0], [0, 2])]
        )
        for replica in range(3):
            _, _, history = _run_replica(data, 3, substream(9, "kmeans", replica), 50)
            for earlier, later in zip(history, history[1:]):
                assert later <= earlier + 1e-12

    def test_deterministic(self):
        rng = np.random.default_rng(10)
        data = rng.normal(size=(200, 2))
        assert np.array_equal(lloyd(data, 3, seed=4), lloyd(data, 3, seed=4))

    def test_too_few_points_is_an_error(self):
        with pytest.raises(ValueError):
            lloyd(np.zeros((2, 2)), k=3)


class TestRse:
    def test_reference_scores_one(self):
        rng = np.random.default_rng(11)
        data = rng.normal(size=(50, 2))
        ref = lloyd(data, 2, seed=0)
        assert rse(ref, data, ref) == 1.0

    def test_worse_centroids_score_above_one(self):
        rng = np.random.default_rng(12)
        data = rng.normal(size=(120, 2))
        ref = lloyd(data, 3, seed=0)
        worse = ref.copy()
        worse[0] = np.array([100.0, 100.0])  # far outside the data hull
        assert rse(worse, data, ref) > 1.0

    def test_zero_mse_reference_is_an_error(self):
        data = np.zeros((5, 2))
        with pytest.raises(ValueError):
            rse(np.zeros((1, 2)), data, np.zeros((1, 2)))
