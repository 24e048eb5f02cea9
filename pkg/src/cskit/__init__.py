"""Compressive clustering from random Fourier sketches.

Sketch a dataset into a short complex vector, then recover cluster centroids
(and optionally local covariances) from the sketch alone.  The package
provides the sketching operators, the correlation-function machinery the
decoders search over, two decoders, a k-means baseline with error metrics,
synthetic data generation, file formats, and a sweep harness.
"""

from .correlation import CorrelationFn, kde_oracle
from .datagen import GmmSpec, gen_gmm, make_separated_spec
from .decoders import (
    Box,
    Component,
    DecoderConfig,
    DecoderResult,
    GradientAscentSearch,
    GridSearch,
    MeanShiftSearch,
    clompr,
    estimate_covariance,
    get_local_maximum_grid,
    get_local_maximum_meanshift,
    hard_threshold,
    joint_finetune,
    maxima_pursuit,
    nnls_weights,
    residual_update,
)
from .io import (
    load_dataset,
    load_gmm_spec,
    load_result,
    load_sketch,
    save_dataset,
    save_gmm_spec,
    save_labels,
    save_result,
    save_sketch,
)
from .kmeans import lloyd, mse, rse
from .sketching import (
    EmptyDatasetError,
    FrequencyMatrix,
    Sketch,
    empty_sketch,
    feature_map,
    merge_sketches,
    sample_frequencies,
    sketch_dataset,
    sketch_dirac,
    sketch_gaussian,
)
from .sweep import ExperimentConfig, run_sweep

__version__ = "0.1.0"
