"""
Topology statistics of a graph
==============================

Load an edge list, keep its giant component and compute efficiency,
clustering, assortativity, heterogeneity and distances.
"""

import io

import numpy as np

from milinkpred import all_pairs_distances, erdos_renyi, giant_component, load_edge_list
from milinkpred import network_stats

# Edge lists are whitespace separated; comments and extra columns are ignored.
text = io.StringIO("""# a triangle with a tail, plus a stray pair
a b
b c
c a
c d
x y
""")
g = load_edge_list(text)
gc = giant_component(g)
print(g, "->", gc, gc.labels)

# hop distances between every pair, inf where unreachable
print(all_pairs_distances(g))

stats = network_stats(gc)
print(stats.to_json())

# A sparse random graph has low clustering and H close to 1 + 1/<k>.
rg = giant_component(erdos_renyi(2000, 6 / 1999, seed=3))
st = network_stats(rg)
print(f"N={st.n} <k>={st.avg_degree:.2f} C={st.clustering:.4f} "
      f"H={st.heterogeneity:.3f} (1 + 1/<k> = {1 + 1 / st.avg_degree:.3f}) "
      f"<d>={st.avg_distance:.2f} e={st.efficiency:.4f}")

# degree assortativity is close to zero for random graphs
print("r =", round(st.assortativity, 4), "degrees:", np.bincount(rg.degrees)[:10])
