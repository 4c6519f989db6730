"""How much a fixed threshold 0.1 disturbs the ranking of random dense graphs."""

from densekatz.experiments import ExperimentConfig, experiment_random

for n in (100, 300):
    r = experiment_random(ExperimentConfig(n=n, trials=20, seed=0))
    print(f"size {r['size']}: mean tau {r['tau_mean']:.4f}, min tau {r['tau_min']:.4f}, "
          f"B0 density {r['density_mean']:.4f}, v0 solve {1e3 * r['time_v0_mean']:.2f} ms")
