import numpy as np
import pytest

from cskit.correlation import CorrelationFn, kde_oracle
from cskit.sketching import (
    EmptyDatasetError,
    sample_frequencies,
    sketch_dataset,
    sketch_dirac,
)


def random_case(rng, d, m, sigma=0.7):
    freqs = sample_frequencies(d=d, m=m, sigma=sigma, seed=int(rng.integers(2**31)))
    residual = rng.normal(size=m) + 1j * rng.normal(size=m)
    x = rng.uniform(-1, 1, size=d)
    return CorrelationFn(residual, freqs), x


def central_diff_gradient(f, x, h):
    d = x.shape[0]
    grad = np.empty(d)
    for i in range(d):
        e = np.zeros(d)
        e[i] = h
        grad[i] = (f.value(x + e) - f.value(x - e)) / (2 * h)
    return grad


def central_diff_hessian(f, x, h):
    d = x.shape[0]
    hess = np.empty((d, d))
    for i in range(d):
        e = np.zeros(d)
        e[i] = h
        hess[i] = (f.gradient(x + e) - f.gradient(x - e)) / (2 * h)
    return 0.5 * (hess + hess.T)


class TestValue:
    def test_own_atom_scores_one(self):
        freqs = sample_frequencies(d=3, m=40, sigma=0.5, seed=1)
        x = np.array([0.2, -0.4, 0.7])
        f = CorrelationFn(sketch_dirac(x, freqs), freqs)
        assert abs(f.value(x) - 1.0) < 1e-12

    def test_double_sum_oracle(self):
        # Expanding Re<phi(x_i), phi(x)> gives a plain cosine double sum.
        rng = np.random.default_rng(2)
        data = rng.normal(size=(37, 2))
        freqs = sample_frequencies(d=2, m=21, sigma=0.8, seed=2)
        f = CorrelationFn(sketch_dataset(data, freqs).values, freqs)
        for _ in range(5):
            x = rng.uniform(-2, 2, size=2)
            expected = np.cos((data - x) @ freqs.omegas.T).sum() / (21 * 37)
            assert abs(f.value(x) - expected) < 1e-10

    def test_bounded_by_residual_norm(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            f, x = random_case(rng, d=2, m=33)
            assert abs(f.value(x)) <= np.linalg.norm(f.residual) + 1e-12

    def test_batch_agrees_with_single(self):
        rng = np.random.default_rng(4)
        f, _ = random_case(rng, d=3, m=17)
        pts = rng.uniform(-1, 1, size=(8, 3))
        batch = f.values(pts)
        singles = np.array([f.value(p) for p in pts])
        assert np.abs(batch - singles).max() < 1e-14


class TestGradient:
    def test_zero_at_atom_center(self):
        freqs = sample_frequencies(d=2, m=25, sigma=0.4, seed=5)
        c = np.array([0.3, 0.3])
        f = CorrelationFn(sketch_dirac(c, freqs), freqs)
        assert np.abs(f.gradient(c)).max() < 1e-12

    def test_matches_central_differences(self):
        rng = np.random.default_rng(6)
        for i in range(100):
            f, x = random_case(rng, d=int(rng.choice([1, 2, 3, 6])), m=48)
            grad = f.gradient(x)
            fd = central_diff_gradient(f, x, h=1e-5)
            rel = np.linalg.norm(grad - fd) / max(np.linalg.norm(fd), 1e-12)
            assert rel <= 1e-5, f"case {i}: relative error {rel}"

    def test_batch_agrees_with_single(self):
        rng = np.random.default_rng(7)
        f, _ = random_case(rng, d=2, m=19)
        pts = rng.uniform(-1, 1, size=(6, 2))
        _, grads = f.values_and_gradients(pts)
        for point, grad in zip(pts, grads):
            assert np.abs(grad - f.gradient(point)).max() < 1e-14


class TestHessian:
    def test_exactly_symmetric(self):
        rng = np.random.default_rng(8)
        f, x = random_case(rng, d=4, m=30)
        hess = f.hessian(x)
        assert np.array_equal(hess, hess.T)

    def test_matches_differenced_gradient(self):
        rng = np.random.default_rng(9)
        for i in range(100):
            f, x = random_case(rng, d=int(rng.choice([1, 2, 3])), m=40)
            hess = f.hessian(x)
            fd = central_diff_hessian(f, x, h=1e-4)
            rel = np.abs(hess - fd).max() / max(np.abs(fd).max(), 1e-12)
            assert rel <= 1e-4, f"case {i}: relative error {rel}"

    def test_atom_center_curvature(self):
        # At its own center the atom's correlation has Hessian
        # -(1/m) sum_j w_j w_j^T, which is negative semidefinite.
        freqs = sample_frequencies(d=2, m=15, sigma=0.5, seed=10)
        c = np.array([-0.1, 0.6])
        f = CorrelationFn(sketch_dirac(c, freqs), freqs)
        expected = -(freqs.omegas.T @ freqs.omegas) / 15
        hess = f.hessian(c)
        assert np.abs(hess - expected).max() < 1e-12
        assert np.linalg.eigvalsh(hess).max() <= 1e-10


class TestKdeOracle:
    def test_single_point_at_itself(self):
        x = np.array([0.5, -0.5])
        assert kde_oracle(x, x[None, :], sigma=0.3) == 1.0

    def test_far_field_decay(self):
        rng = np.random.default_rng(11)
        data = rng.uniform(-0.1, 0.1, size=(50, 2))
        x = np.array([10.0, 10.0])  # at least 10 sigma away for sigma=1
        assert kde_oracle(x, data, sigma=1.0) <= 2e-22

    def test_in_unit_interval(self):
        rng = np.random.default_rng(12)
        data = rng.normal(size=(100, 3))
        for _ in range(20):
            value = kde_oracle(rng.normal(size=3), data, sigma=0.5)
            assert 0.0 < value <= 1.0

    def test_empty_dataset_is_an_error(self):
        with pytest.raises(EmptyDatasetError):
            kde_oracle(np.zeros(2), np.empty((0, 2)), sigma=0.5)

    def test_matches_correlation_expectation_small(self):
        # Cheap version of the unbiasedness check: the full-size statistical
        # protocol runs in the acceptance suite.
        rng = np.random.default_rng(13)
        data = rng.normal(size=(200, 2)) * 0.3
        x = np.array([0.1, -0.2])
        sigma = 0.4
        values = []
        for rep in range(100):
            freqs = sample_frequencies(d=2, m=300, sigma=sigma, seed=rep)
            f = CorrelationFn(sketch_dataset(data, freqs).values, freqs)
            values.append(f.value(x))
        values = np.asarray(values)
        stderr = values.std(ddof=1) / np.sqrt(len(values))
        assert abs(values.mean() - kde_oracle(x, data, sigma)) <= 4 * stderr
