"""Sparsifying a dense weighted complement and certifying the ranking."""

import numpy as np

import densekatz as dk
from densekatz.experiments import ExperimentConfig, dense_instance, random_power_matrix, trial_rng

# one random dense weighted graph, 300 x 300
inst = dense_instance(random_power_matrix(100, trial_rng(0, 0)), t_frac=0.5)
G, B = inst.graph, dk.SparseMatrix.from_dense(inst.B)
print(f"rho(A) = {inst.rho:.4f}, complement density {B.density:.3f}")

w = dk.solve_shifted(inst.A, -inst.t, np.ones(G.n))  # exact Katz vector
for eps in (1e-1, 1e-3, 3e-8, 1e-10):
    thr = dk.sparsify(B, eps)
    rep = dk.check_sufficient(G, B, thr.B0, eps, inst.t, w=w)
    v0 = dk.katz_thresholded(thr.B0, inst.t, "with_loops", inst.scale).v
    tau = dk.kendall_tau(w, v0)
    print(f"eps={eps:.0e}  sparsity {100 * thr.sparsity:5.1f}%  tau {tau:.4f}  {rep.verdict}"
          f"  (bound {rep.rhs_c:.2e})")

# the harness does the same with eps = (3n)^-k
report = dk.experiments.experiment_sufficiency(ExperimentConfig(n=100))
for row in report["rows"]:
    print(row["power"], f"{100 * row['sparsity']:.1f}%", row["verdict"])
