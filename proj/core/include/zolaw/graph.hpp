#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zolaw/bitset.hpp"
#include "zolaw/rng.hpp"

namespace zolaw {

struct GraphFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Simple undirected graph on vertices 0..n-1 with per-vertex neighbor bitsets.
// Immutable after construction: no self loops, adjacency symmetric.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n) : n_(n), rows_(n, Bitset(static_cast<std::size_t>(n))) {}

    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

    int n() const { return n_; }
    bool adjacent(int u, int v) const { return rows_[u].test(static_cast<std::size_t>(v)); }
    const Bitset& neighbors(int v) const { return rows_[v]; }

    void add_edge(int u, int v) {
        if (u == v) throw GraphFormatError("self loop");
        rows_[u].set(static_cast<std::size_t>(v));
        rows_[v].set(static_cast<std::size_t>(u));
    }

    int degree(int v) const { return static_cast<int>(rows_[v].count()); }
    std::size_t edge_count() const;
    std::vector<std::pair<int, int>> edges() const;

    std::string to_json() const;
    static Graph from_json(const std::string& text);

    // Adjacency-matrix text format: n lines of n '0'/'1' characters.
    std::string to_matrix_text() const;
    static Graph from_matrix_text(const std::string& text);

private:
    int n_ = 0;
    std::vector<Bitset> rows_;
};

// G(n,p): each unordered pair included independently with probability p,
// deterministically under the RngSpec (draw index = lexicographic pair index).
Graph sample_gnp(int n, double p, RngSpec rng);

// Derived degree target m = round(np + h), h = sqrt(n(ln(n)/2 - lnlnln(n) + alpha) * 2p(1-p)).
// Rejects n <= 16 (lnlnln undefined below e^e).
struct DegreeTarget {
    int n = 0;
    double p = 0;
    double alpha = 0;
    double h = 0;
    int m = 0;
};

DegreeTarget degree_target(int n, double p, double alpha = 0.0);

} // namespace zolaw
