"""Correlation function of a residual against the point-mass sketch family.

For a residual vector ``r`` the correlation function is
``f(x) = Re <r, sketch_dirac(x)>``.  Averaged over frequency draws it equals
the Gaussian kernel density estimate of the sketched dataset, which is why
its local maxima track cluster centers.  Value, gradient and Hessian all have
closed forms in the frequencies; ``kde_oracle`` evaluates the exact KDE limit
for validation.
"""

from __future__ import annotations

import numpy as np

from .sketching import EmptyDatasetError, FrequencyMatrix, as_dataset

__all__ = ["CorrelationFn", "kde_oracle"]


class CorrelationFn:
    """Closed-form evaluation of ``x -> Re <r, sketch_dirac(x)>``.

    Immutable once built; evaluation is pure and reentrant.  Batched variants
    accept an (n, d) array of query points and vectorize the trigonometric
    work across rows.
    """

    def __init__(self, residual, freqs: FrequencyMatrix):
        residual = np.asarray(residual, dtype=np.complex128)
        if residual.shape != (freqs.m,):
            raise ValueError(f"residual has shape {residual.shape}, expected ({freqs.m},)")
        residual = residual.copy()
        residual.setflags(write=False)
        self.residual = residual
        self.freqs = freqs
        # Split once: all evaluations reduce to cos/sin combinations.
        self._re = np.ascontiguousarray(residual.real)
        self._im = np.ascontiguousarray(residual.imag)
        self._scale = 1.0 / np.sqrt(freqs.m)

    @property
    def sigma(self) -> float:
        return self.freqs.sigma

    def _check_points(self, x) -> tuple[np.ndarray, bool]:
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        pts = np.atleast_2d(x)
        if pts.shape[1] != self.freqs.d:
            raise ValueError(f"points have dimension {pts.shape[1]}, expected {self.freqs.d}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain non-finite values")
        return pts, single

    def value(self, x) -> float:
        """f(x) = Re sum_j conj(r_j) exp(i <w_j, x>) / sqrt(m)."""
        return float(self.values(np.atleast_2d(np.asarray(x, dtype=np.float64)))[0])

    def values(self, x) -> np.ndarray:
        pts, _ = self._check_points(x)
        theta = pts @ self.freqs.omegas.T
        f = np.cos(theta) @ self._re + np.sin(theta) @ self._im
        return self._scale * f

    def gradient(self, x) -> np.ndarray:
        pts, _ = self._check_points(x)
        _, grad = self.values_and_gradients(pts)
        return grad[0]

    def values_and_gradients(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Batched (f, grad f) sharing one pass of trigonometric work."""
        pts, _ = self._check_points(x)
        theta = pts @ self.freqs.omegas.T
        cos_t = np.cos(theta)
        sin_t = np.sin(theta)
        f = self._scale * (cos_t @ self._re + sin_t @ self._im)
        grad = self._scale * ((cos_t * self._im - sin_t * self._re) @ self.freqs.omegas)
        return f, grad

    def hessian(self, x) -> np.ndarray:
        """d x d Hessian of f at x, symmetrized to kill roundoff skew."""
        pts, single = self._check_points(x)
        if not single:
            raise ValueError("hessian evaluates a single point; pass a length-d vector")
        theta = self.freqs.omegas @ pts[0]
        weights = np.cos(theta) * self._re + np.sin(theta) * self._im
        hess = -self._scale * (self.freqs.omegas.T @ (weights[:, None] * self.freqs.omegas))
        return 0.5 * (hess + hess.T)


def kde_oracle(x, data, sigma: float) -> float:
    """Exact Gaussian KDE: mean of exp(-||x - x_i||^2 / (2 sigma^2)).

    This is the expectation of the correlation function of a dataset sketch
    over the frequency draw, so it serves as the statistical reference the
    randomized evaluation is tested against.  The value lies in (0, 1], and
    equals 1 only when every data point coincides with ``x``.
    """
    data = as_dataset(data)
    if data.shape[0] == 0:
        raise EmptyDatasetError("KDE of an empty dataset is undefined")
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (data.shape[1],):
        raise ValueError(f"point has shape {x.shape}, expected ({data.shape[1]},)")
    if not (np.isfinite(sigma) and sigma > 0):
        raise ValueError(f"sigma must be a positive finite real, got {sigma}")
    sq_dist = np.sum((data - x) ** 2, axis=1)
    return float(np.mean(np.exp(-sq_dist / (2.0 * sigma**2))))
