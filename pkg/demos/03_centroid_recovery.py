"""Decode cluster centroids from a sketch and score them against k-means.

Two decoders are compared across bandwidths: the OMP-with-replacement
heuristic (clompr) and the collect-then-prune decoder driven by mean-shift
search (maxima_pursuit).  The latter stays near the k-means baseline over a
much wider bandwidth range -- the RSE column is MSE relative to Lloyd's.
"""

import numpy as np

import cskit
from cskit.decoders import Box, DecoderConfig, GradientAscentSearch, MeanShiftSearch

spec = cskit.make_separated_spec(k=3, d=2, seed=8)
data, _ = cskit.gen_gmm(spec, n=10_000, seed=2)
box = Box.unit(2)

reference = cskit.lloyd(data, k=3, seed=0)
print(f"Lloyd baseline MSE: {cskit.mse(reference, data):.5f}")
print(f"\n{'sigma':>6} | {'pursuit RSE':>12} | {'clompr RSE':>11}")

for sigma in (0.05, 0.1, 0.2, 0.3):
    freqs = cskit.sample_frequencies(d=2, m=1000, sigma=sigma, seed=0)
    sketch = cskit.sketch_dataset(data, freqs)

    pursuit = cskit.maxima_pursuit(
        sketch, freqs, DecoderConfig(k=3, T=6, search=MeanShiftSearch(restarts=100), seed=0), box
    )
    ompr = cskit.clompr(
        sketch, freqs, DecoderConfig(k=3, T=6, search=GradientAscentSearch(), seed=0), box
    )
    print(
        f"{sigma:>6} | {cskit.rse(pursuit.centers, data, reference):>12.3f}"
        f" | {cskit.rse(ompr.centers, data, reference):>11.3f}"
    )

print("\nRecovered centers (pursuit, sigma=0.1):")
freqs = cskit.sample_frequencies(d=2, m=1000, sigma=0.1, seed=0)
sketch = cskit.sketch_dataset(data, freqs)
result = cskit.maxima_pursuit(
    sketch, freqs, DecoderConfig(k=3, T=6, search=MeanShiftSearch(restarts=100), seed=0), box
)
for comp, weight in zip(result.components, result.weights):
    print(f"  weight {weight:.3f} at {np.round(comp.center, 3)}")
print("True means:")
for mean in spec.means:
    print(f"  {np.round(mean, 3)}")
