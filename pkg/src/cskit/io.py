"""File formats: datasets (CSV / binary), sketches, mixture specs, results.

The sketch file embeds the frequency matrix, so a sketch on disk is fully
self-contained: decoding never needs to reproduce the random draw.  Dataset
files round-trip exactly (bit-for-bit in the binary format, to the printed
precision in CSV).
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .datagen import GmmSpec
from .decoders import Component, DecoderResult
from .sketching import FrequencyMatrix, Sketch, as_dataset

__all__ = [
    "load_dataset",
    "load_gmm_spec",
    "load_result",
    "load_sketch",
    "save_dataset",
    "save_gmm_spec",
    "save_labels",
    "save_result",
    "save_sketch",
]

_MAGIC = b"CSKD"
_VERSION = 1
_HEADER = struct.Struct("<4sIQI")  # magic, version u32, N u64, d u32


def save_dataset(data, path) -> None:
    """Write a dataset; format chosen by extension (.csv is text, else binary)."""
    data = as_dataset(data)
    path = str(path)
    if path.lower().endswith(".csv"):
        with open(path, "w") as fh:
            for row in data:
                fh.write(",".join("%.17g" % v for v in row))
                fh.write("\n")
    else:
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(_MAGIC, _VERSION, data.shape[0], data.shape[1]))
            fh.write(np.ascontiguousarray(data, dtype="<f8").tobytes())


def load_dataset(path) -> np.ndarray:
    path = str(path)
    if path.lower().endswith(".csv"):
        return _load_csv(path)
    return _load_binary(path)


def _load_csv(path) -> np.ndarray:
    rows = []
    n_cols = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if n_cols is None:
                n_cols = len(cells)
            elif len(cells) != n_cols:
                raise ValueError(
                    f"{path}: line {lineno}: expected {n_cols} columns, got {len(cells)}"
                )
            try:
                row = [float(c) for c in cells]
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: non-numeric value") from None
            if not all(np.isfinite(row)):
                raise ValueError(f"{path}: line {lineno}: non-finite value")
            rows.append(row)
    if not rows:
        return np.empty((0, 0))
    return np.array(rows, dtype=np.float64)


def _load_binary(path) -> np.ndarray:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, version, n, d = _HEADER.unpack(header)
        if magic != _MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}, expected {_MAGIC!r}")
        if version != _VERSION:
            raise ValueError(f"{path}: unsupported format version {version}")
        payload = fh.read()
    expected = n * d * 8
    if len(payload) != expected:
        raise ValueError(f"{path}: expected {expected} payload bytes, got {len(payload)}")
    data = np.frombuffer(payload, dtype="<f8").reshape(n, d).astype(np.float64)
    if not np.all(np.isfinite(data)):
        raise ValueError(f"{path}: non-finite values in payload")
    return data


def save_labels(labels, path) -> None:
    """Sidecar file of generating-component labels (diagnostics only)."""
    labels = np.asarray(labels, dtype=np.int64)
    with open(str(path), "w") as fh:
        for label in labels:
            fh.write(f"{int(label)}\n")


def save_sketch(sketch: Sketch, freqs: FrequencyMatrix, path) -> None:
    """Write a self-contained sketch file (values plus embedded frequencies)."""
    if sketch.freq_id != freqs.freq_id:
        raise ValueError("sketch does not belong to the given frequency matrix")
    payload = {
        "m": freqs.m,
        "d": freqs.d,
        "sigma": freqs.sigma,
        "count": sketch.count,
        "values_re": sketch.values.real.tolist(),
        "values_im": sketch.values.imag.tolist(),
        "omegas": freqs.omegas.tolist(),
        "seed": freqs.seed,
    }
    with open(str(path), "w") as fh:
        json.dump(payload, fh)


def load_sketch(path) -> tuple[Sketch, FrequencyMatrix]:
    with open(str(path)) as fh:
        payload = json.load(fh)
    try:
        m, d = int(payload["m"]), int(payload["d"])
        omegas = np.asarray(payload["omegas"], dtype=np.float64)
        values = np.asarray(payload["values_re"], dtype=np.float64) + 1j * np.asarray(
            payload["values_im"], dtype=np.float64
        )
        freqs = FrequencyMatrix(
            omegas=omegas, sigma=float(payload["sigma"]), seed=int(payload.get("seed", 0))
        )
        count = int(payload["count"])
    except KeyError as exc:
        raise ValueError(f"{path}: missing sketch field {exc}") from None
    if omegas.shape != (m, d):
        raise ValueError(f"{path}: omegas shape {omegas.shape} does not match m={m}, d={d}")
    if values.shape != (m,):
        raise ValueError(f"{path}: values length {values.shape[0]} does not match m={m}")
    sketch = Sketch(values=values, count=count, freq_id=freqs.freq_id)
    return sketch, freqs


def save_gmm_spec(spec: GmmSpec, path) -> None:
    payload = {
        "weights": spec.weights.tolist(),
        "means": spec.means.tolist(),
        "covariances": spec.covariances.tolist(),
    }
    with open(str(path), "w") as fh:
        json.dump(payload, fh)


def load_gmm_spec(path) -> GmmSpec:
    with open(str(path)) as fh:
        payload = json.load(fh)
    try:
        return GmmSpec(
            weights=np.asarray(payload["weights"], dtype=np.float64),
            means=np.asarray(payload["means"], dtype=np.float64),
            covariances=np.asarray(payload["covariances"], dtype=np.float64),
        )
    except KeyError as exc:
        raise ValueError(f"{path}: missing mixture field {exc}") from None


def save_result(result: DecoderResult, path) -> None:
    """Write a decoder result: components, weights, residual norm, trace."""
    payload = {
        "components": [
            {
                "kind": comp.kind,
                "center": comp.center.tolist(),
                "covariance": None if comp.covariance is None else comp.covariance.tolist(),
            }
            for comp in result.components
        ],
        "weights": np.asarray(result.weights).tolist(),
        "residual_norm": result.residual_norm,
        "trace": result.trace,
    }
    with open(str(path), "w") as fh:
        json.dump(payload, fh)


def load_result(path) -> DecoderResult:
    with open(str(path)) as fh:
        payload = json.load(fh)
    components = []
    for entry in payload["components"]:
        if entry["kind"] == "gaussian":
            components.append(Component.gaussian(entry["center"], entry["covariance"]))
        else:
            components.append(Component.dirac(entry["center"]))
    return DecoderResult(
        components=components,
        weights=np.asarray(payload["weights"], dtype=np.float64),
        residual_norm=float(payload["residual_norm"]),
        trace=payload.get("trace", {}),
    )
