"""Sketch decoders: greedy centroid recovery from a Fourier sketch.

Two decoders are provided.  ``clompr`` is the classic OMP-with-replacement
heuristic: one local ascent per iteration, hard thresholding as soon as the
support exceeds k, and a joint fine-tuning pass of all centers and weights.
``maxima_pursuit`` instead collects T >= k candidate centroids by locating
local maxima of the residual's correlation function (by exhaustive grid
search or by reweighted gradient ascent over many random restarts), optionally
fits a Gaussian per component via a local covariance estimate, and prunes to
the k heaviest components only at the end.

Shared subroutines (non-negative projection, hard thresholding, covariance
estimation, residual updates) are exposed for testing and reuse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
import scipy.optimize

from .correlation import CorrelationFn
from .rng import substream
from .sketching import FrequencyMatrix, Sketch, sketch_dirac, sketch_gaussian

__all__ = [
    "Box",
    "Component",
    "DecoderConfig",
    "DecoderResult",
    "GradientAscentSearch",
    "GridSearch",
    "MeanShiftSearch",
    "clompr",
    "estimate_covariance",
    "get_local_maximum_grid",
    "get_local_maximum_meanshift",
    "hard_threshold",
    "joint_finetune",
    "maxima_pursuit",
    "nnls_weights",
    "residual_update",
]

_GRID_NODE_CAP = 10**7
_F_FLOOR_REL = 1e-10       # trajectories halt when |f| drops below this times ||r||
_VALUE_FLOOR = 1e-6        # covariance estimation needs f(c) above this
_COND_CAP = 1e12
_FINETUNE_MAX_ITERS = 200
_FINETUNE_GTOL = 1e-8


@dataclass(frozen=True)
class Box:
    """Axis-aligned search domain [lower_1, upper_1] x ... x [lower_d, upper_d]."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=np.float64)
        upper = np.asarray(self.upper, dtype=np.float64)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ValueError("lower and upper must be 1-D vectors of equal length")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ValueError("box bounds must be finite")
        if not np.all(lower < upper):
            raise ValueError("need lower < upper componentwise")
        lower = lower.copy()
        upper = upper.copy()
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def unit(cls, d: int, half_width: float = 1.0) -> "Box":
        return cls(lower=-half_width * np.ones(d), upper=half_width * np.ones(d))

    @property
    def d(self) -> int:
        return self.lower.shape[0]

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.upper - self.lower))

    def clip(self, points: np.ndarray) -> np.ndarray:
        return np.clip(points, self.lower, self.upper)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.uniform(self.lower, self.upper, size=(n, self.d))


@dataclass(frozen=True)
class Component:
    """One mixture atom: a point mass or a Gaussian with full covariance."""

    kind: str
    center: np.ndarray
    covariance: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in ("dirac", "gaussian"):
            raise ValueError(f"kind must be 'dirac' or 'gaussian', got {self.kind!r}")
        center = np.asarray(self.center, dtype=np.float64).copy()
        center.setflags(write=False)
        object.__setattr__(self, "center", center)
        if self.kind == "gaussian":
            if self.covariance is None:
                raise ValueError("gaussian component needs a covariance")
            cov = np.asarray(self.covariance, dtype=np.float64).copy()
            cov.setflags(write=False)
            object.__setattr__(self, "covariance", cov)
        else:
            object.__setattr__(self, "covariance", None)

    @classmethod
    def dirac(cls, center) -> "Component":
        return cls(kind="dirac", center=center)

    @classmethod
    def gaussian(cls, center, covariance) -> "Component":
        return cls(kind="gaussian", center=center, covariance=covariance)

    def sketch(self, freqs: FrequencyMatrix) -> np.ndarray:
        if self.kind == "dirac":
            return sketch_dirac(self.center, freqs)
        return sketch_gaussian(self.center, self.covariance, freqs)


@dataclass(frozen=True)
class GridSearch:
    """Exhaustive maximization over a regular grid on the box."""

    points_per_axis: int = 5

    def __post_init__(self):
        if self.points_per_axis < 2:
            raise ValueError("points_per_axis must be at least 2")


@dataclass(frozen=True)
class MeanShiftSearch:
    """Reweighted gradient ascent c <- clip(c + eta/|f(c)| * grad f(c)).

    ``eta`` defaults to sigma^2/2 (the classical mean-shift step on a
    Gaussian KDE) and ``tol`` to 1e-6 times the box diameter; both are
    resolved when the decoder runs and recorded in its trace.  The best of
    ``restarts`` random initializations wins.
    """

    eta: Optional[float] = None
    restarts: int = 100
    max_iters: int = 300
    tol: Optional[float] = None

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.eta is not None and not self.eta > 0:
            raise ValueError("eta must be positive")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be positive")

    def resolve(self, sigma: float, box: Box) -> tuple[float, float]:
        eta = 0.5 * sigma**2 if self.eta is None else self.eta
        tol = 1e-6 * box.diameter if self.tol is None else self.tol
        return eta, tol


@dataclass(frozen=True)
class GradientAscentSearch:
    """Plain fixed-step ascent c <- clip(c + eta * grad f(c)).

    This is the mean-shift update without the 1/|f| reweighting: where f is
    flat the steps vanish and the trajectory stalls, which is precisely the
    behavior the reweighted search is designed to escape.  Defaults follow
    ``MeanShiftSearch`` with a single restart.
    """

    eta: Optional[float] = None
    restarts: int = 1
    max_iters: int = 300
    tol: Optional[float] = None

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.eta is not None and not self.eta > 0:
            raise ValueError("eta must be positive")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be positive")

    def resolve(self, sigma: float, box: Box) -> tuple[float, float]:
        eta = 0.5 * sigma**2 if self.eta is None else self.eta
        tol = 1e-6 * box.diameter if self.tol is None else self.tol
        return eta, tol


SearchSpec = Union[GridSearch, MeanShiftSearch, GradientAscentSearch]


@dataclass(frozen=True)
class DecoderConfig:
    """Decoder parameters: target size k, support size T >= k, fitted model.

    ``model`` selects point masses or Gaussians for the fitted mixture
    (``clompr`` supports only ``"dirac"``); ``search`` picks the local-maximum
    routine; ``finetune`` toggles the joint fine-tuning pass of ``clompr``.
    """

    k: int
    T: Optional[int] = None
    model: str = "dirac"
    search: SearchSpec = field(default_factory=MeanShiftSearch)
    seed: int = 0
    finetune: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.T is not None and self.T < self.k:
            raise ValueError(f"need T >= k, got T={self.T} < k={self.k}")
        if self.model not in ("dirac", "gaussian"):
            raise ValueError(f"model must be 'dirac' or 'gaussian', got {self.model!r}")

    def resolved_T(self) -> int:
        return 2 * self.k if self.T is None else self.T


@dataclass
class DecoderResult:
    """Recovered mixture plus diagnostics.

    ``residual_norm`` is ||z - sum_i alpha_i * atom_i|| for the returned
    components; ``trace`` holds per-iteration diagnostics and the resolved
    configuration.
    """

    components: list
    weights: np.ndarray
    residual_norm: float
    trace: dict

    @property
    def centers(self) -> np.ndarray:
        return np.stack([comp.center for comp in self.components])


# ---------------------------------------------------------------------------
# Local-maximum search
# ---------------------------------------------------------------------------

def get_local_maximum_grid(
    f: CorrelationFn, box: Box, points_per_axis: int, node_cap: int = _GRID_NODE_CAP
) -> np.ndarray:
    """Argmax of f over a regular grid; ties go to the lowest lexicographic node.

    The grid has ``points_per_axis`` nodes per axis including both endpoints.
    Its total size is capped because the node count grows exponentially with
    the dimension; past the cap, mean-shift search is the viable option.
    """
    if points_per_axis < 2:
        raise ValueError("points_per_axis must be at least 2")
    d = box.d
    n_nodes = points_per_axis**d
    if n_nodes > node_cap:
        raise ValueError(
            f"grid of {points_per_axis}^{d} = {n_nodes} nodes exceeds the cap of "
            f"{node_cap}; use mean-shift search in this dimension"
        )
    axes = [np.linspace(box.lower[i], box.upper[i], points_per_axis) for i in range(d)]
    best_value = -np.inf
    best_node = None
    chunk = max(1, 2**21 // max(1, f.freqs.m))
    # Lexicographic node order: first axis varies slowest (C order).
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(n_nodes, d)
    for start in range(0, n_nodes, chunk):
        block = mesh[start : start + chunk]
        values = f.values(block)
        i = int(np.argmax(values))  # first occurrence wins inside the block
        if values[i] > best_value:
            best_value = float(values[i])
            best_node = block[i].copy()
    return best_node


def _draw_starts(box: Box, n: int, seed: int, iteration: int) -> np.ndarray:
    points = np.empty((n, box.d))
    for j in range(n):
        points[j] = box.sample(substream(seed, "restart", iteration, j), 1)[0]
    return points


def _ascend_batch(
    f: CorrelationFn,
    box: Box,
    points: np.ndarray,
    eta: float,
    tol: float,
    max_iters: int,
    reweight: bool,
) -> tuple[np.ndarray, int]:
    """Run all trajectories in lockstep; converged ones drop out of the batch.

    With ``reweight`` the step is eta/|f| * grad f (the 1/|f| factor blows up
    near f = 0, so such trajectories halt at their current point); without it
    the step is a plain eta * grad f.
    """
    f_floor = _F_FLOOR_REL * float(np.linalg.norm(f.residual))
    active = np.arange(points.shape[0])
    iters_run = 0
    for _ in range(max_iters):
        values, grads = f.values_and_gradients(points[active])
        if reweight:
            abs_values = np.abs(values)
            alive = abs_values > f_floor
            survivors = active[alive]
            if survivors.size == 0:
                break
            step = (eta / abs_values[alive])[:, None] * grads[alive]
        else:
            survivors = active
            step = eta * grads
        moved = box.clip(points[survivors] + step)
        step_len = np.linalg.norm(moved - points[survivors], axis=1)
        points[survivors] = moved
        active = survivors[step_len > tol]
        iters_run += 1
        if active.size == 0:
            break
    return points, iters_run


def get_local_maximum_meanshift(
    f: CorrelationFn,
    box: Box,
    search: MeanShiftSearch,
    seed: int,
    iteration: int = 0,
    starts: Optional[np.ndarray] = None,
) -> tuple[np.ndarray, dict]:
    """Best terminal point of reweighted gradient ascent over random restarts.

    Restart j draws its start from the substream ``(seed, iteration, j)``, so
    results do not depend on evaluation order.  A trajectory stops when its
    step length falls to ``tol``, when it has run ``max_iters`` steps, or when
    |f| falls below a floor that would blow up the 1/|f| reweighting.  Returns
    the winning point and a small diagnostics dict.
    """
    eta, tol = search.resolve(f.sigma, box)
    if starts is None:
        points = _draw_starts(box, search.restarts, seed, iteration)
    else:
        points = box.clip(np.array(starts, dtype=np.float64))
        if points.shape != (search.restarts, box.d):
            raise ValueError(f"starts must have shape ({search.restarts}, {box.d})")
    points, iters_run = _ascend_batch(f, box, points, eta, tol, search.max_iters, reweight=True)
    finals = f.values(points)
    winner = int(np.argmax(finals))  # ties -> lowest restart index
    info = {
        "winner_restart": winner,
        "winner_value": float(finals[winner]),
        "iterations": iters_run,
        "eta": eta,
        "tol": tol,
    }
    return points[winner].copy(), info


def _find_local_maximum(
    f: CorrelationFn, box: Box, search: SearchSpec, seed: int, iteration: int
) -> tuple[np.ndarray, dict]:
    if isinstance(search, GridSearch):
        node = get_local_maximum_grid(f, box, search.points_per_axis)
        return node, {"winner_value": f.value(node)}
    if isinstance(search, MeanShiftSearch):
        return get_local_maximum_meanshift(f, box, search, seed, iteration)
    if isinstance(search, GradientAscentSearch):
        eta, tol = search.resolve(f.sigma, box)
        points = _draw_starts(box, search.restarts, seed, iteration)
        points, _ = _ascend_batch(f, box, points, eta, tol, search.max_iters, reweight=False)
        finals = f.values(points)
        winner = int(np.argmax(finals))
        return points[winner].copy(), {
            "winner_restart": winner,
            "winner_value": float(finals[winner]),
        }
    raise TypeError(f"unknown search spec: {search!r}")


# ---------------------------------------------------------------------------
# Shared decoder subroutines
# ---------------------------------------------------------------------------

def nnls_weights(z: np.ndarray, atoms) -> np.ndarray:
    """Non-negative least squares weights for ``min_a>=0 ||z - atoms @ a||``.

    The complex problem is solved by stacking real and imaginary parts; the
    returned weights satisfy the KKT conditions of the squared objective to
    ~1e-12 (dual feasibility and complementary slackness).
    """
    if isinstance(atoms, np.ndarray) and atoms.ndim == 2:
        matrix = atoms
    else:
        atoms = list(atoms)
        if not atoms:
            raise ValueError("need at least one atom")
        matrix = np.column_stack([np.asarray(a, dtype=np.complex128) for a in atoms])
    z = np.asarray(z)
    if matrix.shape[0] != z.shape[0]:
        raise ValueError("atom length does not match sketch length")
    stacked = np.vstack([matrix.real, matrix.imag])
    target = np.concatenate([z.real, z.imag])
    weights, _ = scipy.optimize.nnls(stacked, target)
    return weights


def hard_threshold(items: list, weights: np.ndarray, k: int) -> tuple[list, np.ndarray]:
    """Keep the k entries of largest weight, preserving original order.

    Ties are broken in favor of the lower original index.
    """
    weights = np.asarray(weights, dtype=np.float64)
    if len(items) != weights.shape[0]:
        raise ValueError("items and weights must have equal length")
    if k > len(items):
        raise ValueError(f"cannot keep k={k} of {len(items)} entries")
    order = np.argsort(-weights, kind="stable")  # descending, ties by index
    keep = np.sort(order[:k])
    return [items[i] for i in keep], weights[keep]


def estimate_covariance(
    f,
    c,
    value_floor: float = _VALUE_FLOOR,
    cond_cap: float = _COND_CAP,
) -> np.ndarray:
    """Local covariance estimate at a mode ``c`` of the correlation function.

    Builds the Hessian of ``-log f`` at ``c`` from the closed-form value,
    gradient and Hessian of ``f``; near a well-separated Gaussian component
    its inverse equals the component covariance plus sigma^2 I, so the
    estimate is that inverse minus sigma^2 I.  Whenever the construction
    breaks down (f too small at c, indefinite or ill-conditioned curvature,
    or a non-positive-definite result) the all-zero matrix is returned,
    which callers interpret as "fit a point mass instead".

    ``f`` may be any object with ``value``, ``gradient``, ``hessian`` and a
    ``sigma`` attribute.
    """
    c = np.asarray(c, dtype=np.float64)
    d = c.shape[0]
    zero = np.zeros((d, d))
    value = f.value(c)
    if not value > value_floor:
        return zero
    grad = np.asarray(f.gradient(c), dtype=np.float64)
    hess = np.asarray(f.hessian(c), dtype=np.float64)
    log_hess = -(hess * value - np.outer(grad, grad)) / value**2
    log_hess = 0.5 * (log_hess + log_hess.T)
    eigvals, eigvecs = np.linalg.eigh(log_hess)
    if eigvals[0] <= 0.0 or eigvals[-1] / eigvals[0] > cond_cap:
        return zero
    inv_eigvals = 1.0 / eigvals
    cov_eigvals = inv_eigvals - f.sigma**2
    eps_pd = 1e-10 * inv_eigvals.sum() / d
    if cov_eigvals.min() <= eps_pd:
        return zero
    cov = (eigvecs * cov_eigvals) @ eigvecs.T
    return 0.5 * (cov + cov.T)


def residual_update(z: np.ndarray, components: list, weights, freqs: FrequencyMatrix) -> np.ndarray:
    """r = z minus the weighted sum of the components' closed-form sketches."""
    weights = np.asarray(weights, dtype=np.float64)
    if len(components) != weights.shape[0]:
        raise ValueError("components and weights must have equal length")
    residual = np.array(z, dtype=np.complex128)
    for comp, weight in zip(components, weights):
        residual -= weight * comp.sketch(freqs)
    return residual


def _dirac_atoms(centers, freqs: FrequencyMatrix) -> np.ndarray:
    theta = np.atleast_2d(centers) @ freqs.omegas.T
    return np.exp(1j * theta).T / np.sqrt(freqs.m)  # (m, K)


def joint_finetune(
    z: np.ndarray,
    centers,
    weights,
    box: Box,
    freqs: FrequencyMatrix,
    max_iters: int = _FINETUNE_MAX_ITERS,
    gtol: float = _FINETUNE_GTOL,
) -> tuple[np.ndarray, np.ndarray]:
    """Jointly refine point-mass centers and weights against the sketch.

    Minimizes ||z - sum_k a_k * sketch_dirac(c_k)||^2 over all centers and
    weights with a projected quasi-Newton method (centers stay in the box,
    weights stay non-negative).  The objective never increases: if the
    optimizer fails to improve, the inputs are returned unchanged.
    """
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    weights = np.asarray(weights, dtype=np.float64)
    n_atoms, d = centers.shape
    sqrt_m = np.sqrt(freqs.m)

    def unpack(p):
        return p[: n_atoms * d].reshape(n_atoms, d), p[n_atoms * d :]

    def objective(p):
        cts, alpha = unpack(p)
        atoms = _dirac_atoms(cts, freqs)
        residual = z - atoms @ alpha
        value = float(np.vdot(residual, residual).real)
        correlated = np.conj(atoms) * residual[:, None]  # (m, K)
        grad_centers = -2.0 * alpha[None, :].T * (correlated.imag.T @ freqs.omegas)
        grad_weights = -2.0 * correlated.real.sum(axis=0)
        return value, np.concatenate([grad_centers.ravel(), grad_weights])

    p0 = np.concatenate([centers.ravel(), weights])
    bounds = list(zip(box.lower, box.upper)) * n_atoms + [(0.0, None)] * n_atoms
    result = scipy.optimize.minimize(
        objective, x0=p0, method="L-BFGS-B", jac=True, bounds=bounds,
        options={"maxiter": max_iters, "gtol": gtol},
    )
    if result.fun > objective(p0)[0]:
        return centers, weights
    new_centers, new_weights = unpack(result.x)
    return box.clip(new_centers), np.clip(new_weights, 0.0, None)


# ---------------------------------------------------------------------------
# Decoders
# ---------------------------------------------------------------------------

def _check_decoder_inputs(sketch: Sketch, freqs: FrequencyMatrix, box: Box):
    if sketch.freq_id != freqs.freq_id:
        raise ValueError("sketch was built with a different frequency matrix")
    if box.d != freqs.d:
        raise ValueError(f"box dimension {box.d} does not match frequencies d={freqs.d}")


def _search_metadata(search: SearchSpec, sigma: float, box: Box) -> dict:
    if isinstance(search, GridSearch):
        return {"search": "grid", "points_per_axis": search.points_per_axis}
    if isinstance(search, MeanShiftSearch):
        eta, tol = search.resolve(sigma, box)
        return {
            "search": "meanshift",
            "restarts": search.restarts,
            "eta": eta,
            "tol": tol,
            "max_iters": search.max_iters,
        }
    return {"search": "ascent", "restarts": search.restarts}


def clompr(sketch: Sketch, freqs: FrequencyMatrix, cfg: DecoderConfig, box: Box) -> DecoderResult:
    """OMP-with-replacement decoder fitting a mixture of k point masses.

    Each of T iterations (default T = 2k) finds one new candidate by local
    ascent of the residual correlation, hard-thresholds the support back to k
    using weights of the normalized atoms, re-projects the weights, optionally
    fine-tunes all centers and weights jointly, and updates the residual.
    """
    _check_decoder_inputs(sketch, freqs, box)
    if cfg.model != "dirac":
        raise ValueError("clompr fits point masses only; use model='dirac'")
    z = sketch.values
    residual = np.array(z, dtype=np.complex128)
    centers: list[np.ndarray] = []
    iterations = []
    for i in range(cfg.resolved_T()):
        corr = CorrelationFn(residual, freqs)
        center, info = _find_local_maximum(corr, box, cfg.search, cfg.seed, i)
        centers.append(center)
        if len(centers) > cfg.k:
            atoms = _dirac_atoms(np.stack(centers), freqs)
            norms = np.linalg.norm(atoms, axis=0)
            beta = nnls_weights(z, atoms / norms)
            centers, _ = hard_threshold(centers, beta, cfg.k)
        atoms = _dirac_atoms(np.stack(centers), freqs)
        alpha = nnls_weights(z, atoms)
        if cfg.finetune:
            stacked, alpha = joint_finetune(z, np.stack(centers), alpha, box, freqs)
            centers = list(stacked)
            atoms = _dirac_atoms(stacked, freqs)
        residual = z - atoms @ alpha
        iterations.append(
            {
                "selected_center": center.tolist(),
                "selected_value": info.get("winner_value"),
                "winner_restart": info.get("winner_restart"),
                "support_size": len(centers),
                "residual_norm": float(np.linalg.norm(residual)),
            }
        )
    components = [Component.dirac(c) for c in centers]
    trace = {
        "decoder": "clompr",
        "model": cfg.model,
        "seed": cfg.seed,
        "k": cfg.k,
        "T": cfg.resolved_T(),
        "finetune": cfg.finetune,
        **_search_metadata(cfg.search, freqs.sigma, box),
        "iterations": iterations,
    }
    return DecoderResult(
        components=components,
        weights=alpha,
        residual_norm=float(np.linalg.norm(residual)),
        trace=trace,
    )


def maxima_pursuit(
    sketch: Sketch, freqs: FrequencyMatrix, cfg: DecoderConfig, box: Box
) -> DecoderResult:
    """Collect-then-prune decoder driven by correlation-function maxima.

    Step 1 gathers T >= k candidate components: each iteration locates a local
    maximum of the current residual's correlation function, fits the component
    (a point mass, or a Gaussian whose covariance is estimated from the
    curvature of the full-sketch correlation at the candidate), re-projects
    all weights, and updates the residual.  Step 2 keeps the k components of
    largest weight.  There is no joint fine-tuning pass.
    """
    _check_decoder_inputs(sketch, freqs, box)
    z = sketch.values
    residual = np.array(z, dtype=np.complex128)
    full_corr = CorrelationFn(z, freqs)
    components: list[Component] = []
    alpha = np.zeros(0)
    iterations = []
    for i in range(cfg.resolved_T()):
        corr = CorrelationFn(residual, freqs)
        center, info = _find_local_maximum(corr, box, cfg.search, cfg.seed, i)
        if cfg.model == "gaussian":
            covariance = estimate_covariance(full_corr, center)
            if np.any(covariance):
                component = Component.gaussian(center, covariance)
            else:
                component = Component.dirac(center)
        else:
            component = Component.dirac(center)
        components.append(component)
        atoms = np.column_stack([comp.sketch(freqs) for comp in components])
        alpha = nnls_weights(z, atoms)
        residual = z - atoms @ alpha
        iterations.append(
            {
                "selected_center": center.tolist(),
                "selected_value": info.get("winner_value"),
                "winner_restart": info.get("winner_restart"),
                "kind": component.kind,
                "residual_norm": float(np.linalg.norm(residual)),
            }
        )
    if len(components) > cfg.k:
        components, alpha = hard_threshold(components, alpha, cfg.k)
    final_residual = residual_update(z, components, alpha, freqs)
    trace = {
        "decoder": "maxima_pursuit",
        "model": cfg.model,
        "seed": cfg.seed,
        "k": cfg.k,
        "T": cfg.resolved_T(),
        **_search_metadata(cfg.search, freqs.sigma, box),
        "iterations": iterations,
    }
    return DecoderResult(
        components=components,
        weights=alpha,
        residual_norm=float(np.linalg.norm(final_residual)),
        trace=trace,
    )
