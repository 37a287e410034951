"""How the sample size adapts to the variance of each hypothesis.

Run with ``python demos/03_adaptive_stopping.py``.
"""

import numpy as np

from bcrank import EstimatorConfig, bernstein_epsilon, estimate_risks, sample_sizes

# The confidence radius shrinks like 1/sqrt(N) when the variance is large,
# and like 1/N when it is close to zero.
for var in (0.25, 0.01, 0.0):
    radii = [bernstein_epsilon(N, 0.01, var) for N in (100, 1000, 10_000)]
    print(f"var {var:<5} radius at N=100, 1000, 10000: " + ", ".join(f"{x:.4f}" for x in radii))

n0, nmax = sample_sizes(0.05, 0.01, vc_bound=4)
print(f"\nbudget at eps'=0.05, delta=0.01, vc=4: start {n0}, cap {nmax}")

# Synthetic hypotheses firing independently: rare events stop early,
# coin flips run until the cap.
for p in ([0.002, 0.001], [0.5, 0.4]):
    p = np.asarray(p)
    br = estimate_risks(
        lambda: (0.0, np.zeros(len(p))),
        lambda rng: rng.random(len(p)) < p,
        lambda x: np.flatnonzero(x).tolist(),
        len(p),
        EstimatorConfig(epsilon=0.05, delta=0.01, vc_bound=4, seed=0),
    )
    print(f"p={p.tolist()}: {br.samples_used} samples in {br.rounds} rounds ({br.halted_by}), "
          f"estimates {np.round(br.tilde_ell, 4).tolist()}")
