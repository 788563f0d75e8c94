"""
Complexity of a graph's wiring
==============================

Each node is described by its adjacency row. Node complexity is the binary
entropy of its degree fraction, and two nodes are close when their
neighbourhoods over the remaining nodes are strongly dependent.
"""

# %%
from setcx.graphinfo import Graph, conjugate, erdos_renyi, graph_psi, maximize_psi, two_cliques

print("K5 u K5      ", round(graph_psi(two_cliques(10)), 4))
print("complete K10 ", graph_psi(Graph.complete(10)))

# %%
# Swapping edges and non-edges leaves the measure unchanged.
G = erdos_renyi(12, 0.4, rng=0)
print(graph_psi(G), graph_psi(conjugate(G)))

# %%
# Hill climbing over single edge toggles finds much richer wiring.
best, value = maximize_psi(10, iterations=1000, restarts=5, rng=0)
print("best psi", round(value, 4), "with", best.n_edges, "edges")
print("degrees", best.degrees.tolist())
