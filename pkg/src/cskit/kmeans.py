"""Lloyd's k-means baseline and the clustering error metrics.

Every decoder comparison in the toolkit is scored against this baseline:
``mse`` is the mean squared distance of each point to its nearest centroid,
and ``rse`` is its ratio to the value achieved by Lloyd's algorithm on the
same data.
"""

from __future__ import annotations

import numpy as np

from .rng import substream
from .sketching import EmptyDatasetError, as_dataset

__all__ = ["lloyd", "mse", "rse"]


def mse(centroids, data) -> float:
    """Mean squared distance from each data point to its nearest centroid.

    The per-point minima are summed in sorted order, so the result is exactly
    invariant under permutations of the data rows (and of the centroids, whose
    order never affects the minima).
    """
    centroids = np.atleast_2d(np.asarray(centroids, dtype=np.float64))
    data = as_dataset(data)
    if data.shape[0] == 0:
        raise EmptyDatasetError("MSE of an empty dataset is undefined")
    if centroids.shape[1] != data.shape[1]:
        raise ValueError(
            f"centroid dimension {centroids.shape[1]} does not match data dimension {data.shape[1]}"
        )
    return float(np.mean(np.sort(_nearest_sq_dist(data, centroids))))


def rse(centroids, data, lloyd_ref) -> float:
    """Squared error relative to a Lloyd's-algorithm reference solution."""
    ref = mse(lloyd_ref, data)
    if ref <= 0.0:
        raise ValueError("reference MSE is zero (degenerate dataset); RSE is undefined")
    return mse(centroids, data) / ref


def _nearest_sq_dist(data, centroids):
    # (N, k) squared distances, reduced to the per-point minimum; chunked so
    # N=1e5-scale datasets never materialize huge intermediates.
    n = data.shape[0]
    out = np.empty(n)
    step = max(1, 2**22 // max(1, centroids.shape[0]))
    c_sq = np.sum(centroids**2, axis=1)
    for start in range(0, n, step):
        block = data[start : start + step]
        d2 = np.sum(block**2, axis=1)[:, None] - 2.0 * (block @ centroids.T) + c_sq[None, :]
        out[start : start + step] = np.clip(d2.min(axis=1), 0.0, None)
    return out


def _assign(data, centroids):
    n = data.shape[0]
    labels = np.empty(n, dtype=np.intp)
    step = max(1, 2**22 // max(1, centroids.shape[0]))
    c_sq = np.sum(centroids**2, axis=1)
    for start in range(0, n, step):
        block = data[start : start + step]
        d2 = -2.0 * (block @ centroids.T) + c_sq[None, :]
        labels[start : start + step] = d2.argmin(axis=1)  # ties -> lowest index
    return labels


def _plusplus_init(data, k, rng):
    """k-means++ seeding: each new center sampled proportional to squared distance."""
    n = data.shape[0]
    centers = np.empty((k, data.shape[1]))
    centers[0] = data[rng.integers(n)]
    sq_dist = np.sum((data - centers[0]) ** 2, axis=1)
    for i in range(1, k):
        total = sq_dist.sum()
        if total <= 0.0:
            idx = rng.integers(n)  # all remaining points coincide with a center
        else:
            idx = rng.choice(n, p=sq_dist / total)
        centers[i] = data[idx]
        sq_dist = np.minimum(sq_dist, np.sum((data - centers[i]) ** 2, axis=1))
    return centers


def _run_replica(data, k, rng, max_iters):
    """One Lloyd run from a k-means++ start; returns (centers, mse, history)."""
    centers = _plusplus_init(data, k, rng)
    labels = _assign(data, centers)
    history = []
    for _ in range(max_iters):
        for j in range(k):
            mask = labels == j
            if mask.any():
                centers[j] = data[mask].mean(axis=0)
            else:
                # Re-seed an emptied centroid at the point farthest from the
                # current centers (deterministic, no randomness needed).
                far = np.argmax(_nearest_sq_dist(data, centers))
                centers[j] = data[far]
        history.append(float(np.mean(_nearest_sq_dist(data, centers))))
        new_labels = _assign(data, centers)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    return centers, history[-1] if history else float(np.mean(_nearest_sq_dist(data, centers))), history


def lloyd(data, k: int, n_init: int = 5, seed: int = 0, max_iters: int = 300) -> np.ndarray:
    """Best-of-``n_init`` Lloyd's algorithm with k-means++ seeding.

    Each replica draws its start from an independent substream of ``seed``,
    iterates assign/update until the assignment stabilizes (or ``max_iters``),
    and the replica with the lowest MSE wins.  Returns the (k, d) centroid
    matrix.
    """
    data = as_dataset(data)
    if k < 1:
        raise ValueError("k must be positive")
    if data.shape[0] < k:
        raise ValueError(f"need at least k={k} points, got {data.shape[0]}")
    if n_init < 1:
        raise ValueError("n_init must be positive")
    best_centers, best_mse = None, np.inf
    for replica in range(n_init):
        rng = substream(seed, "kmeans", replica)
        centers, value, _ = _run_replica(data, k, rng, max_iters)
        if value < best_mse:
            best_centers, best_mse = centers, value
    return best_centers
