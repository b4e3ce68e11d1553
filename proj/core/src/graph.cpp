#include "zolaw/graph.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace zolaw {

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 0) throw GraphFormatError("negative vertex count");
    Graph g(n);
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) throw GraphFormatError("edge endpoint out of range");
        if (u == v) throw GraphFormatError("self loop");
        if (g.adjacent(u, v)) throw GraphFormatError("duplicate edge");
        g.add_edge(u, v);
    }
    return g;
}

std::size_t Graph::edge_count() const {
    std::size_t total = 0;
    for (const auto& row : rows_) total += row.count();
    return total / 2;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n_; ++u)
        for (std::size_t v = rows_[u].next(static_cast<std::size_t>(u) + 1); v < rows_[u].size(); v = rows_[u].next(v + 1))
            out.emplace_back(u, static_cast<int>(v));
    return out;
}

std::string Graph::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n_;
    auto arr = nlohmann::ordered_json::array();
    for (auto [u, v] : edges()) arr.push_back({u, v});
    j["edges"] = std::move(arr);
    return j.dump();
}

Graph Graph::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw GraphFormatError(std::string("bad graph json: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw GraphFormatError("graph json must be {\"n\": int, \"edges\": [[u,v],...]}");
    int n = j["n"].get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2) throw GraphFormatError("edge must be a pair");
        int u = e[0].get<int>(), v = e[1].get<int>();
        if (u >= v) throw GraphFormatError("edges must have u < v");
        edges.emplace_back(u, v);
    }
    return from_edges(n, edges);
}

std::string Graph::to_matrix_text() const {
    std::string out;
    out.reserve(static_cast<std::size_t>(n_) * (n_ + 1));
    for (int u = 0; u < n_; ++u) {
        for (int v = 0; v < n_; ++v) out.push_back(adjacent(u, v) ? '1' : '0');
        out.push_back('\n');
    }
    return out;
}

Graph Graph::from_matrix_text(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(line);
    }
    int n = static_cast<int>(lines.size());
    Graph g(n);
    for (int u = 0; u < n; ++u) {
        if (static_cast<int>(lines[u].size()) != n) throw GraphFormatError("matrix row length mismatch");
        for (int v = 0; v < n; ++v) {
            char c = lines[u][v];
            if (c != '0' && c != '1') throw GraphFormatError("matrix entries must be 0/1");
            if (c == '1') {
                if (u == v) throw GraphFormatError("self loop in matrix");
                if (v > u && lines[v][u] != '1') throw GraphFormatError("matrix not symmetric");
                if (v > u) g.add_edge(u, v);
            }
        }
    }
    return g;
}

Graph sample_gnp(int n, double p, RngSpec rng) {
    if (n < 0) throw GraphFormatError("negative vertex count");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("sample_gnp: p must lie in (0,1)");
    Graph g(n);
    RngStream stream(rng);
    const std::uint64_t threshold = bernoulli_threshold(p);
    std::uint64_t idx = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++idx)
            if (stream.at(idx) < threshold) g.add_edge(u, v);
    return g;
}

DegreeTarget degree_target(int n, double p, double alpha) {
    if (n <= 16) throw std::invalid_argument("degree_target: requires n >= 17");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("degree_target: p must lie in (0,1)");
    double lll = std::log(std::log(std::log(static_cast<double>(n))));
    double inner = 0.5 * std::log(static_cast<double>(n)) - lll + alpha;
    if (inner < 0) throw std::invalid_argument("degree_target: alpha drives h imaginary");
    double h = std::sqrt(static_cast<double>(n) * inner * 2.0 * p * (1.0 - p));
    DegreeTarget t;
    t.n = n;
    t.p = p;
    t.alpha = alpha;
    t.h = h;
    t.m = static_cast<int>(std::floor(n * p + h + 0.5)); // nearest, ties up
    return t;
}

} // namespace zolaw
