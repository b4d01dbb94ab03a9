"""
Mutual information on an eight-node graph
=========================================

Walk through the quantities behind the MI score on the small fixture graph
shipped with the package: pair self-information, the clustering-based
conditional information of a common neighbour, and the resulting scores.
"""

from milinkpred import (Scorer, canonical_fixture, conditional_self_information,
                        mi_precompute, node_link_mutual_information,
                        pair_self_information, rank_candidates, score_mi)

g = canonical_fixture()
ids = {label: i for i, label in enumerate(g.labels)}
print(g, "edges:", g.edge_labels())

# How surprising is a link between two nodes given only their degrees?
# Low-degree pairs are unlikely to connect, so their self-information is high.
for a, b in [("v2", "v3"), ("v2", "v4"), ("v3", "v4")]:
    bits = pair_self_information(g, ids[a], ids[b])
    print(f"I(L_{a}{b}) = {bits:.4f} bits")

# A common neighbour z carries information through its clustering: the
# conditional self-information is -log2 of its clustering coefficient.
print("I(L|v1) =", round(conditional_self_information(g, ids["v1"]), 4))

# The node's mutual information is the average prior surprise of its
# neighbour pairs minus that conditional term. It can be negative.
for z in g.labels:
    print(f"I(L;{z}) = {node_link_mutual_information(g, ids[z]):+.4f}")

# The MI score sums the node terms over common neighbours and subtracts the
# pair's own self-information. Higher means more likely.
pre = mi_precompute(g)
for a, b in [("v5", "v8"), ("v2", "v3"), ("v3", "v4"), ("v3", "v5"), ("v3", "v8")]:
    print(f"score({a}, {b}) = {score_mi(g, pre, ids[a], ids[b]):+.4f}")

# Common-neighbour counting cannot tell (v2, v3) from (v3, v4); MI can.
for kind in ("cn", "ra", "mi"):
    sc = Scorer(kind, g)
    print(kind, sc.score(ids["v2"], ids["v3"]), sc.score(ids["v3"], ids["v4"]))

# Full ranking of the non-edges under MI
for u, v, s in rank_candidates(g, Scorer("mi", g)).top(5):
    print(g.labels[u], g.labels[v], f"{s:+.4f}")
