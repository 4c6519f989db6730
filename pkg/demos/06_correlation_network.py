"""From a correlation matrix to a ranking of its most central series."""

import numpy as np

import densekatz as dk
from densekatz.io import correlation_to_adjacency

# strongly co-moving synthetic returns: one common factor plus noise
rng = np.random.default_rng(1)
factor = rng.standard_normal(500)
loadings = rng.uniform(0.6, 1.0, 120)
X = loadings[:, None] * factor[None, :] + 0.5 * rng.standard_normal((120, 500))
C = np.corrcoef(X)

G = correlation_to_adjacency(C, eta=0.65)
print(f"{G.num_edges} of {G.max_edges} possible edges kept")
res = dk.katz(G, t_frac=0.9)
print("route:", res.route)
top = res.ranking[:5]
print("most central:", top, "loadings", np.round(loadings[top], 3))
