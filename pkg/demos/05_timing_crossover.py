"""When does solving on the complement pay off?"""

from densekatz.experiments import bench, synthetic_graph

for dense in (True, False):
    G = synthetic_graph(1000, 5, dense=dense)
    r = bench(G, repeats=10)
    print(f"nnz(A)={r['nnz_A']:7d} nnz(B)={r['nnz_B']:7d}  direct {1e3 * r['direct']['best']:6.2f} ms  "
          f"complement {1e3 * r['complement']['best']:6.2f} ms  -> {r['faster']}")
