"""Experiment harness: decode a dataset across a grid of settings.

A sweep crosses decoders, fitted models, sketch sizes, bandwidths, restart
counts and repetitions, producing one CSV row per decode.  Each row carries
the seed that generated its sketch and decoder randomness, so any row can be
reproduced in isolation with the ``sketch`` and ``decode`` commands.  Failures
are recorded in an ``error`` column and do not stop the sweep.
"""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import io as cskit_io
from .datagen import GmmSpec, gen_gmm, make_separated_spec
from .decoders import (
    Box,
    DecoderConfig,
    GradientAscentSearch,
    GridSearch,
    MeanShiftSearch,
    clompr,
    maxima_pursuit,
)
from .kmeans import lloyd, mse
from .sketching import sample_frequencies, sketch_dataset

__all__ = ["CSV_COLUMNS", "ExperimentConfig", "run_sweep", "worker_count"]

CSV_COLUMNS = [
    "decoder",
    "model",
    "search",
    "m",
    "sigma",
    "L",
    "T",
    "k",
    "seed",
    "mse",
    "rse",
    "residual_norm",
    "runtime_ms",
    "error",
]

DECODER_NAMES = ("clompr", "proposed-grid", "proposed-meanshift")


@dataclass
class ExperimentConfig:
    """Declarative sweep description (usually parsed from a JSON file)."""

    dataset: dict
    k: int
    m_values: list
    sigma_values: list
    decoders: list
    models: list = field(default_factory=lambda: ["dirac"])
    L_values: list = field(default_factory=lambda: [100])
    T: Optional[int] = None
    repetitions: int = 1
    base_seed: int = 0
    grid_points_per_axis: int = 5
    box: Optional[Box] = None
    lloyd_settings: dict = field(default_factory=dict)
    out: Optional[str] = None

    def __post_init__(self):
        for name, values in (
            ("m", self.m_values),
            ("sigma", self.sigma_values),
            ("L", self.L_values),
            ("decoders", self.decoders),
            ("models", self.models),
        ):
            if not values:
                raise ValueError(f"sweep list '{name}' must be nonempty")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if self.T is not None and self.T < self.k:
            raise ValueError(f"need T >= k, got T={self.T} < k={self.k}")
        for name in self.decoders:
            if name not in DECODER_NAMES:
                raise ValueError(f"unknown decoder {name!r}; choose from {DECODER_NAMES}")
        for model in self.models:
            if model not in ("dirac", "gaussian"):
                raise ValueError(f"unknown model {model!r}")

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        try:
            dataset = raw["dataset"]
            k = int(raw["k"])
            m_values = [int(v) for v in raw["m"]]
            sigma_values = [float(v) for v in raw["sigma"]]
            decoders = list(raw["decoders"])
        except KeyError as exc:
            raise ValueError(f"sweep config is missing required field {exc}") from None
        box = None
        if "box" in raw:
            box = Box(lower=np.asarray(raw["box"]["lower"]), upper=np.asarray(raw["box"]["upper"]))
        return cls(
            dataset=dataset,
            k=k,
            m_values=m_values,
            sigma_values=sigma_values,
            decoders=decoders,
            models=list(raw.get("models", ["dirac"])),
            L_values=[int(v) for v in raw.get("L", [100])],
            T=None if raw.get("T") is None else int(raw["T"]),
            repetitions=int(raw.get("repetitions", 1)),
            base_seed=int(raw.get("base_seed", 0)),
            grid_points_per_axis=int(raw.get("grid_points_per_axis", 5)),
            box=box,
            lloyd_settings=dict(raw.get("lloyd", {})),
            out=raw.get("out"),
        )


def worker_count() -> int:
    """Worker pool size; bounded by the CSKIT_THREADS environment variable."""
    env = os.environ.get("CSKIT_THREADS", "").strip()
    if env:
        count = int(env)
        if count < 1:
            raise ValueError(f"CSKIT_THREADS must be positive, got {env!r}")
        return count
    return os.cpu_count() or 1


def _load_sweep_dataset(spec: dict) -> np.ndarray:
    if "file" in spec:
        return cskit_io.load_dataset(spec["file"])
    if "generate" in spec:
        gen = spec["generate"]
        if "separated" in gen:
            sep = gen["separated"]
            mixture = make_separated_spec(int(sep["k"]), int(sep["d"]), int(sep["seed"]))
        elif "spec" in gen:
            raw = gen["spec"]
            mixture = GmmSpec(
                weights=np.asarray(raw["weights"], dtype=np.float64),
                means=np.asarray(raw["means"], dtype=np.float64),
                covariances=np.asarray(raw["covariances"], dtype=np.float64),
            )
        else:
            raise ValueError("dataset.generate needs either 'separated' or 'spec'")
        points, _ = gen_gmm(mixture, int(gen["n"]), int(gen.get("seed", 0)))
        return points
    raise ValueError("dataset must specify either 'file' or 'generate'")


def _make_jobs(config: ExperimentConfig) -> list[dict]:
    jobs = []
    for decoder in config.decoders:
        if decoder == "clompr":
            # clompr fits point masses only; with "dirac" present the model
            # axis collapses, otherwise the invalid pairing surfaces as an
            # error row.
            models = ["dirac"] if "dirac" in config.models else config.models
        else:
            models = config.models
        uses_restarts = decoder == "proposed-meanshift"
        restart_values = config.L_values if uses_restarts else [None]
        for model in models:
            for m in config.m_values:
                for sigma in config.sigma_values:
                    for L in restart_values:
                        for rep in range(config.repetitions):
                            jobs.append(
                                {
                                    "decoder": decoder,
                                    "model": model,
                                    "m": m,
                                    "sigma": sigma,
                                    "L": L,
                                    "seed": config.base_seed + rep,
                                }
                            )
    return jobs


def _search_for(job: dict, config: ExperimentConfig):
    if job["decoder"] == "proposed-grid":
        return GridSearch(points_per_axis=config.grid_points_per_axis), f"grid-{config.grid_points_per_axis}"
    if job["decoder"] == "proposed-meanshift":
        return MeanShiftSearch(restarts=job["L"]), "meanshift"
    return GradientAscentSearch(), "ascent"


def _run_job(job: dict, config: ExperimentConfig, data, box: Box, mse_ref: float) -> dict:
    row = {col: "" for col in CSV_COLUMNS}
    row.update(
        decoder=job["decoder"],
        model=job["model"],
        m=job["m"],
        sigma=job["sigma"],
        L="" if job["L"] is None else job["L"],
        T=config.T if config.T is not None else 2 * config.k,
        k=config.k,
        seed=job["seed"],
    )
    try:
        search, search_name = _search_for(job, config)
        row["search"] = search_name
        freqs = sample_frequencies(data.shape[1], job["m"], job["sigma"], job["seed"])
        sketch = sketch_dataset(data, freqs)
        cfg = DecoderConfig(
            k=config.k,
            T=config.T,
            model=job["model"],
            search=search,
            seed=job["seed"],
        )
        decode = clompr if job["decoder"] == "clompr" else maxima_pursuit
        start = time.perf_counter()
        result = decode(sketch, freqs, cfg, box)
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        value = mse(result.centers, data)
        row.update(
            mse=f"{value:.17g}",
            rse=f"{value / mse_ref:.17g}",
            residual_norm=f"{result.residual_norm:.17g}",
            runtime_ms=f"{elapsed_ms:.3f}",
        )
    except Exception as exc:  # sweep must continue past row failures
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _sort_key(row: dict):
    return (
        row["decoder"],
        row["model"],
        row["search"],
        int(row["m"]),
        float(row["sigma"]),
        -1 if row["L"] == "" else int(row["L"]),
        int(row["seed"]),
    )


def run_sweep(config: ExperimentConfig, out_path=None) -> list[dict]:
    """Run all sweep rows and optionally write them as CSV.

    The Lloyd reference is computed once on the dataset and shared by every
    row's RSE.  Rows run on a bounded thread pool (see ``worker_count``) and
    are sorted deterministically before writing, so reruns of the same config
    produce identical files apart from the runtime column.
    """
    data = _load_sweep_dataset(config.dataset)
    if data.shape[0] == 0:
        raise ValueError("sweep dataset is empty")
    box = config.box if config.box is not None else Box.unit(data.shape[1])
    settings = config.lloyd_settings
    reference = lloyd(
        data,
        config.k,
        n_init=int(settings.get("n_init", 5)),
        seed=int(settings.get("seed", 0)),
        max_iters=int(settings.get("max_iters", 300)),
    )
    mse_ref = mse(reference, data)
    if mse_ref <= 0.0:
        raise ValueError("Lloyd reference has zero MSE; RSE is undefined on this dataset")

    jobs = _make_jobs(config)
    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda job: _run_job(job, config, data, box, mse_ref), jobs))
    else:
        rows = [_run_job(job, config, data, box, mse_ref) for job in jobs]
    rows.sort(key=_sort_key)

    target = out_path if out_path is not None else config.out
    if target is not None:
        with open(str(target), "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            writer.writerows(rows)
    return rows
