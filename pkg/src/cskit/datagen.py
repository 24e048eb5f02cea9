"""Synthetic Gaussian-mixture datasets for decoder experiments.

``make_separated_spec`` places well-separated isotropic clusters inside
[-0.7, 0.7]^d so that the sampled points essentially fit in [-1, 1]^d, the
domain the decoders search.  ``gen_gmm`` draws a dataset (and diagnostic
labels) from any mixture spec.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import substream

__all__ = ["GmmSpec", "gen_gmm", "make_separated_spec"]

_MEAN_RANGE = 0.7
_SEPARATION_SIGMAS = 6.0
_MAX_ATTEMPTS = 100_000


@dataclass(frozen=True)
class GmmSpec:
    """A Gaussian mixture: simplex weights, (k, d) means, (k, d, d) covariances."""

    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=np.float64)
        means = np.asarray(self.means, dtype=np.float64)
        covs = np.asarray(self.covariances, dtype=np.float64)
        if means.ndim != 2:
            raise ValueError("means must be a (k, d) matrix")
        k, d = means.shape
        if weights.shape != (k,):
            raise ValueError(f"weights must have shape ({k},)")
        if covs.shape != (k, d, d):
            raise ValueError(f"covariances must have shape ({k}, {d}, {d})")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be non-negative and sum to 1 within 1e-12")
        for i, cov in enumerate(covs):
            if np.max(np.abs(cov - cov.T), initial=0.0) > 1e-10:
                raise ValueError(f"covariance {i} is not symmetric")
            if np.min(np.linalg.eigvalsh(0.5 * (cov + cov.T))) < -1e-10:
                raise ValueError(f"covariance {i} is not positive semidefinite")
        for name, arr in (("weights", weights), ("means", means), ("covariances", covs)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite values")
            arr.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "covariances", covs)

    @property
    def k(self) -> int:
        return self.means.shape[0]

    @property
    def d(self) -> int:
        return self.means.shape[1]


def cluster_std_for_dim(d: int) -> float:
    """Per-axis cluster standard deviation used by ``make_separated_spec``."""
    return 0.12 / np.sqrt(d)


def make_separated_spec(k: int, d: int, seed: int) -> GmmSpec:
    """Equal-weight isotropic mixture with well-separated means.

    Means are drawn uniformly in [-0.7, 0.7]^d and a draw is accepted once
    all pairwise distances reach 6 cluster standard deviations; the cluster
    scale shrinks as 0.12/sqrt(d) so the sampled points stay inside
    [-1, 1]^d with overwhelming probability.
    """
    if k < 1 or d < 1:
        raise ValueError(f"need k >= 1 and d >= 1, got k={k}, d={d}")
    sigma_x = cluster_std_for_dim(d)
    min_dist = _SEPARATION_SIGMAS * sigma_x
    rng = substream(seed, "separated-spec")
    for _ in range(_MAX_ATTEMPTS):
        means = rng.uniform(-_MEAN_RANGE, _MEAN_RANGE, size=(k, d))
        if k == 1 or _min_pairwise_distance(means) >= min_dist:
            weights = np.full(k, 1.0 / k)
            covs = np.broadcast_to(sigma_x**2 * np.eye(d), (k, d, d)).copy()
            return GmmSpec(weights=weights, means=means, covariances=covs)
    raise ValueError(
        f"could not place {k} means at pairwise distance >= {min_dist:.3g} in "
        f"[-{_MEAN_RANGE}, {_MEAN_RANGE}]^{d} after {_MAX_ATTEMPTS} attempts; "
        "reduce k or use a larger domain"
    )


def _min_pairwise_distance(means):
    diff = means[:, None, :] - means[None, :, :]
    dist = np.sqrt(np.sum(diff**2, axis=-1))
    return dist[np.triu_indices(means.shape[0], k=1)].min()


def gen_gmm(spec: GmmSpec, n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``n`` i.i.d. points from the mixture.

    Returns ``(points, labels)``; the labels identify the generating
    component and are for diagnostics only, decoders never see them.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = substream(seed, "gmm")
    labels = rng.choice(spec.k, size=n, p=spec.weights)
    noise = rng.standard_normal((n, spec.d))
    points = spec.means[labels].copy()
    for i in range(spec.k):
        mask = labels == i
        if not mask.any():
            continue
        # Eigen-based factor tolerates singular covariances (degenerate
        # mixtures are allowed for testing).
        eigvals, eigvecs = np.linalg.eigh(spec.covariances[i])
        factor = eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))
        points[mask] += noise[mask] @ factor.T
    return points, labels
