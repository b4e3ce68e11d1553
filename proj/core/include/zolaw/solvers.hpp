#pragma once

#include "zolaw/errors.hpp"
#include "zolaw/graph.hpp"

namespace zolaw {

// True iff every pair of vertices is joined by a path. Graphs with n <= 1 are
// connected by convention.
bool is_connected(const Graph& g);

// Exact minimal k admitting a proper k-coloring; 0 for the empty graph, 1 for
// nonempty edgeless graphs. DSATUR-ordered branch and bound with a greedy
// clique lower bound. Throws CapExceeded for n > cap.
int chromatic_number(const Graph& g, int cap = 64);

// Exact k-colorability decision (same search engine, single k).
bool is_k_colorable(const Graph& g, int k, int cap = 512);

// True iff g has a Hamilton cycle; n < 3 returns false. Backtracking over
// partial paths with bitset pruning; Dirac min-degree shortcut.
bool is_hamiltonian(const Graph& g, int cap = 64);

int degree(const Graph& g, int v);
int codegree(const Graph& g, int u, int v);
Bitset neighborhood_in(const Graph& g, int v, const Bitset& s);

// D(m) = vertices of degree exactly m.
Bitset degree_class(const Graph& g, int m);

} // namespace zolaw
