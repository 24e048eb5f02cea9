"""The correlation function: a sketch-only stand-in for the KDE.

Correlating the sketch with candidate point-mass sketches gives a function
whose local maxima track cluster centers.  In expectation over the frequency
draw it equals the Gaussian kernel density estimate, and the approximation
tightens as the sketch grows.
"""

import numpy as np

import cskit

spec = cskit.make_separated_spec(k=3, d=2, seed=8)
data, _ = cskit.gen_gmm(spec, n=5000, seed=1)
sigma = 0.2

probes = np.vstack([spec.means, [[0.0, 0.0], [0.9, 0.9]]])
labels = [f"cluster {i}" for i in range(3)] + ["origin", "corner"]

print(f"{'probe':>10} | {'exact KDE':>10} | " + " | ".join(f"m={m:>5}" for m in (50, 500, 5000)))
rows = {m: None for m in (50, 500, 5000)}
for m in rows:
    freqs = cskit.sample_frequencies(d=2, m=m, sigma=sigma, seed=7)
    corr = cskit.CorrelationFn(cskit.sketch_dataset(data, freqs).values, freqs)
    rows[m] = corr.values(probes)

for i, label in enumerate(labels):
    kde = cskit.kde_oracle(probes[i], data, sigma)
    approx = " | ".join(f"{rows[m][i]:7.4f}" for m in rows)
    print(f"{label:>10} | {kde:10.4f} | {approx}")

print()
print("The three cluster probes carry most of the density; the randomized")
print("values wobble around the exact KDE and settle as m grows.")

# The closed-form gradient lets a decoder climb this surface without the data.
freqs = cskit.sample_frequencies(d=2, m=500, sigma=sigma, seed=7)
corr = cskit.CorrelationFn(cskit.sketch_dataset(data, freqs).values, freqs)
x = spec.means[0] + np.array([0.05, -0.05])
print(f"\ngradient near a cluster center: {corr.gradient(x)}")
print(f"gradient at the center itself:  {corr.gradient(spec.means[0])} (near zero)")
