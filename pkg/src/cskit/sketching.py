"""Random Fourier feature sketching.

A dataset is summarized by the empirical mean of the feature map
``x -> exp(i <x, w_j>) / sqrt(m)`` over ``m`` Gaussian frequencies ``w_j``.
The resulting length-``m`` complex vector is a mergeable summary: sketches of
disjoint chunks combine by a count-weighted average, so sketching can be
streamed or distributed.  Closed-form sketches of point masses and Gaussians
are provided for the decoders.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .rng import substream

__all__ = [
    "EmptyDatasetError",
    "FrequencyMatrix",
    "Sketch",
    "as_dataset",
    "empty_sketch",
    "feature_map",
    "merge_sketches",
    "sample_frequencies",
    "sketch_dataset",
    "sketch_dirac",
    "sketch_gaussian",
]

# Rows per block in the chunked feature-map sum; keeps float error at the
# pairwise-summation level and bounds peak memory for large m.
_CHUNK_ROWS = 1024

_SYMMETRY_TOL = 1e-10
_EIGENVALUE_FLOOR = -1e-10


class EmptyDatasetError(ValueError):
    """Raised where an operation needs at least one data point."""


@dataclass(frozen=True)
class FrequencyMatrix:
    """The m x d matrix of sampled frequencies plus its bandwidth.

    ``omegas[j]`` is the frequency of feature ``j`` (units 1/length);
    ``sigma`` is the bandwidth the frequencies were drawn with.  Instances
    are immutable and safe to share across threads.
    """

    omegas: np.ndarray
    sigma: float
    seed: int = 0

    def __post_init__(self):
        omegas = np.asarray(self.omegas, dtype=np.float64)
        if omegas.ndim != 2 or omegas.shape[0] < 1 or omegas.shape[1] < 1:
            raise ValueError(f"omegas must be a nonempty 2-D matrix, got shape {omegas.shape}")
        if not np.all(np.isfinite(omegas)):
            raise ValueError("omegas must be finite")
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"sigma must be a positive finite real, got {self.sigma}")
        omegas = omegas.copy()
        omegas.setflags(write=False)
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def m(self) -> int:
        return self.omegas.shape[0]

    @property
    def d(self) -> int:
        return self.omegas.shape[1]

    @property
    def freq_id(self) -> str:
        """Content hash identifying the sketching operator (not the seed)."""
        h = hashlib.sha256()
        h.update(np.int64(self.m).tobytes())
        h.update(np.int64(self.d).tobytes())
        h.update(np.float64(self.sigma).tobytes())
        h.update(np.ascontiguousarray(self.omegas).tobytes())
        return h.hexdigest()


@dataclass(frozen=True)
class Sketch:
    """A length-m complex summary of ``count`` points.

    ``values`` is the mean feature map over the summarized points, so every
    entry has modulus at most ``1/sqrt(m)``.  ``count == 0`` is the merge
    identity and carries an all-zero ``values``.
    """

    values: np.ndarray
    count: int
    freq_id: str

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128).copy()
        if values.ndim != 1:
            raise ValueError("sketch values must be a 1-D complex vector")
        if self.count < 0:
            raise ValueError("count must be non-negative")
        if self.count == 0 and np.any(values != 0):
            raise ValueError("a zero-count sketch must have all-zero values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "count", int(self.count))

    @property
    def m(self) -> int:
        return self.values.shape[0]


def as_dataset(points) -> np.ndarray:
    """Validate and return a dataset as an (N, d) float64 array."""
    data = np.asarray(points, dtype=np.float64)
    if data.ndim != 2:
        raise ValueError(f"dataset must be a 2-D array of shape (N, d), got ndim={data.ndim}")
    if not np.all(np.isfinite(data)):
        raise ValueError("dataset contains non-finite values")
    return data


def sample_frequencies(d: int, m: int, sigma: float, seed: int) -> FrequencyMatrix:
    """Draw m i.i.d. frequencies with per-entry distribution N(0, 1/sigma^2).

    Standard normals are drawn from a counter-based stream keyed by ``seed``
    and then divided by ``sigma``, so for a fixed seed the matrices for two
    bandwidths differ exactly by the scale factor (common random numbers
    across a bandwidth sweep).
    """
    if d < 1 or m < 1:
        raise ValueError(f"need d >= 1 and m >= 1, got d={d}, m={m}")
    if not (np.isfinite(sigma) and sigma > 0):
        raise ValueError(f"sigma must be a positive finite real, got {sigma}")
    rng = substream(seed, "frequencies")
    omegas = rng.standard_normal((m, d)) / sigma
    return FrequencyMatrix(omegas=omegas, sigma=float(sigma), seed=seed)


def _check_point(x, freqs: FrequencyMatrix) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (freqs.d,):
        raise ValueError(f"point has shape {x.shape}, expected ({freqs.d},)")
    if not np.all(np.isfinite(x)):
        raise ValueError("point contains non-finite values")
    return x


def feature_map(x, freqs: FrequencyMatrix) -> np.ndarray:
    """Evaluate the feature map at a single point: exp(i <x, w_j>) / sqrt(m).

    The output always has Euclidean norm 1 (each entry has modulus
    1/sqrt(m)).
    """
    x = _check_point(x, freqs)
    theta = freqs.omegas @ x
    return np.exp(1j * theta) / np.sqrt(freqs.m)


def sketch_dirac(c, freqs: FrequencyMatrix) -> np.ndarray:
    """Closed-form sketch of a point mass at ``c`` (equals ``feature_map``)."""
    return feature_map(c, freqs)


def sketch_gaussian(c, cov, freqs: FrequencyMatrix) -> np.ndarray:
    """Closed-form sketch of a Gaussian with mean ``c`` and covariance ``cov``.

    Entry j is ``exp(i <w_j, c> - w_j' cov w_j / 2) / sqrt(m)``: the point-mass
    sketch damped by the Gaussian's characteristic function.  ``cov`` must be
    symmetric positive semidefinite; eigenvalues in [-1e-10, 0) are treated
    as exact zeros.
    """
    c = _check_point(c, freqs)
    cov = np.asarray(cov, dtype=np.float64)
    if cov.shape != (freqs.d, freqs.d):
        raise ValueError(f"cov has shape {cov.shape}, expected ({freqs.d}, {freqs.d})")
    if np.max(np.abs(cov - cov.T), initial=0.0) > _SYMMETRY_TOL:
        raise ValueError("cov is not symmetric")
    eigvals, eigvecs = np.linalg.eigh(0.5 * (cov + cov.T))
    if np.min(eigvals) < _EIGENVALUE_FLOOR:
        raise ValueError(f"cov is not positive semidefinite (min eigenvalue {eigvals.min():g})")
    cov_psd = (eigvecs * np.clip(eigvals, 0.0, None)) @ eigvecs.T
    quad = np.einsum("jk,jk->j", freqs.omegas @ cov_psd, freqs.omegas)
    quad = np.clip(quad, 0.0, None)
    theta = freqs.omegas @ c
    return np.exp(1j * theta - 0.5 * quad) / np.sqrt(freqs.m)


def sketch_dataset(data, freqs: FrequencyMatrix) -> Sketch:
    """Sketch a dataset: the mean of the feature map over its rows.

    Rows are processed in blocks of 1024 with numpy's pairwise summation
    inside each block, so the float error stays negligible even for 1e5-row
    datasets, and any chunk/merge split agrees with this result to ~1e-12
    per entry.
    """
    data = as_dataset(data)
    n = data.shape[0]
    if n == 0:
        raise EmptyDatasetError("cannot sketch an empty dataset (the mean is undefined)")
    if data.shape[1] != freqs.d:
        raise ValueError(f"dataset dimension {data.shape[1]} does not match frequencies d={freqs.d}")
    total_re = np.zeros(freqs.m)
    total_im = np.zeros(freqs.m)
    omegas_t = np.ascontiguousarray(freqs.omegas.T)
    theta_buf = np.empty((min(_CHUNK_ROWS, n), freqs.m))
    trig_buf = np.empty_like(theta_buf)
    for start in range(0, n, _CHUNK_ROWS):
        block = data[start : start + _CHUNK_ROWS]
        if block.shape[0] == theta_buf.shape[0]:
            theta = np.matmul(block, omegas_t, out=theta_buf)
            total_re += np.cos(theta, out=trig_buf).sum(axis=0)
            total_im += np.sin(theta, out=trig_buf).sum(axis=0)
        else:  # final partial chunk
            theta = block @ omegas_t
            total_re += np.cos(theta).sum(axis=0)
            total_im += np.sin(theta).sum(axis=0)
    values = (total_re + 1j * total_im) / (n * np.sqrt(freqs.m))
    return Sketch(values=values, count=n, freq_id=freqs.freq_id)


def empty_sketch(freqs: FrequencyMatrix) -> Sketch:
    """The merge identity: an all-zero sketch summarizing zero points."""
    return Sketch(values=np.zeros(freqs.m, dtype=np.complex128), count=0, freq_id=freqs.freq_id)


def merge_sketches(a: Sketch, b: Sketch) -> Sketch:
    """Combine sketches of two datasets into the sketch of their union.

    Both sketches must come from the same frequency matrix.  The merge is a
    count-weighted average, hence associative and commutative up to float
    roundoff.
    """
    if a.freq_id != b.freq_id:
        raise ValueError("cannot merge sketches built from different frequency matrices")
    if a.count == 0 and b.count == 0:
        raise ValueError("cannot merge two empty sketches")
    if a.count == 0:
        return b
    if b.count == 0:
        return a
    total = a.count + b.count
    values = (a.count * a.values + b.count * b.values) / total
    return Sketch(values=values, count=total, freq_id=a.freq_id)
