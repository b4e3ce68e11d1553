#include "zolaw/solvers.hpp"

#include <algorithm>
#include <vector>

namespace zolaw {

bool is_connected(const Graph& g) {
    const int n = g.n();
    if (n <= 1) return true;
    Bitset seen(static_cast<std::size_t>(n));
    Bitset frontier(static_cast<std::size_t>(n));
    seen.set(0);
    frontier.set(0);
    while (frontier.any()) {
        Bitset next(static_cast<std::size_t>(n));
        for (std::size_t v = frontier.first(); v < frontier.size(); v = frontier.next(v + 1))
            next |= g.neighbors(static_cast<int>(v));
        next.subtract(seen);
        seen |= next;
        frontier = std::move(next);
    }
    return seen.count() == static_cast<std::size_t>(n);
}

namespace {

// Greedy clique on a degree-descending order; lower bound for chromatic number.
int greedy_clique_size(const Graph& g) {
    const int n = g.n();
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        int da = g.degree(a), db = g.degree(b);
        return da != db ? da > db : a < b;
    });
    int best = 0;
    for (int start = 0; start < n && start < 8; ++start) {
        Bitset cand(static_cast<std::size_t>(n), true);
        int size = 0;
        for (int i = start; i < n; ++i) {
            int v = order[i];
            if (!cand.test(static_cast<std::size_t>(v))) continue;
            ++size;
            cand &= g.neighbors(v);
        }
        best = std::max(best, size);
    }
    return best;
}

struct ColorSearch {
    const Graph& g;
    int k;
    std::vector<int> color;              // -1 = uncolored
    std::vector<Bitset> forbidden;       // per-vertex disallowed colors, length k

    ColorSearch(const Graph& graph, int colors)
        : g(graph), k(colors), color(graph.n(), -1),
          forbidden(graph.n(), Bitset(static_cast<std::size_t>(colors))) {}

    // DSATUR: next vertex = max saturation, tie-break max degree then id.
    int pick() const {
        int best = -1;
        std::size_t best_sat = 0;
        int best_deg = -1;
        for (int v = 0; v < g.n(); ++v) {
            if (color[v] >= 0) continue;
            std::size_t sat = forbidden[v].count();
            int deg = g.degree(v);
            if (best < 0 || sat > best_sat || (sat == best_sat && deg > best_deg)) {
                best = v;
                best_sat = sat;
                best_deg = deg;
            }
        }
        return best;
    }

    bool solve(int colored, int used) {
        if (colored == g.n()) return true;
        int v = pick();
        for (int c = 0; c < std::min(k, used + 1); ++c) {
            if (forbidden[v].test(static_cast<std::size_t>(c))) continue;
            color[v] = c;
            std::vector<int> touched;
            for (std::size_t u = g.neighbors(v).first(); u < g.neighbors(v).size(); u = g.neighbors(v).next(u + 1)) {
                int ui = static_cast<int>(u);
                if (color[ui] < 0 && !forbidden[ui].test(static_cast<std::size_t>(c))) {
                    forbidden[ui].set(static_cast<std::size_t>(c));
                    touched.push_back(ui);
                }
            }
            if (solve(colored + 1, std::max(used, c + 1))) return true;
            for (int ui : touched) forbidden[ui].reset(static_cast<std::size_t>(c));
            color[v] = -1;
        }
        return false;
    }
};

bool colorable(const Graph& g, int k) {
    if (g.n() == 0) return true;
    if (k <= 0) return false;
    if (k >= g.n()) return true;
    if (greedy_clique_size(g) > k) return false;
    ColorSearch search(g, k);
    return search.solve(0, 0);
}

} // namespace

bool is_k_colorable(const Graph& g, int k, int cap) {
    if (g.n() > cap) throw CapExceeded("is_k_colorable: vertex cap exceeded");
    return colorable(g, k);
}

int chromatic_number(const Graph& g, int cap) {
    if (g.n() > cap) throw CapExceeded("chromatic_number: vertex cap exceeded");
    if (g.n() == 0) return 0;
    if (g.edge_count() == 0) return 1;
    int lo = std::max(2, greedy_clique_size(g));
    for (int k = lo; k <= g.n(); ++k)
        if (colorable(g, k)) return k;
    return g.n();
}

namespace {

struct HamSearch {
    const Graph& g;
    int n;
    std::vector<int> path;
    Bitset visited;

    explicit HamSearch(const Graph& graph)
        : g(graph), n(graph.n()), visited(static_cast<std::size_t>(graph.n())) {}

    bool extend() {
        int end = path.back();
        if (static_cast<int>(path.size()) == n)
            return g.adjacent(end, path.front());
        // Prune: every unvisited vertex must keep an unvisited neighbor or touch
        // the current end; a vertex with no way in or out kills the branch.
        Bitset avail = ~visited;
        for (std::size_t u = avail.first(); u < avail.size(); u = avail.next(u + 1)) {
            Bitset reach = g.neighbors(static_cast<int>(u)) & avail;
            if (reach.none() && !g.adjacent(static_cast<int>(u), end)) return false;
        }
        Bitset cands = g.neighbors(end) & avail;
        for (std::size_t v = cands.first(); v < cands.size(); v = cands.next(v + 1)) {
            path.push_back(static_cast<int>(v));
            visited.set(v);
            if (extend()) return true;
            visited.reset(v);
            path.pop_back();
        }
        return false;
    }
};

} // namespace

bool is_hamiltonian(const Graph& g, int cap) {
    const int n = g.n();
    if (n > cap) throw CapExceeded("is_hamiltonian: vertex cap exceeded");
    if (n < 3) return false;
    int min_deg = n;
    for (int v = 0; v < n; ++v) min_deg = std::min(min_deg, g.degree(v));
    if (min_deg < 2) return false;
    if (2 * min_deg >= n) return true; // Dirac
    if (!is_connected(g)) return false;
    HamSearch search(g);
    search.path.push_back(0);
    search.visited.set(0);
    return search.extend();
}

int degree(const Graph& g, int v) { return g.degree(v); }

int codegree(const Graph& g, int u, int v) {
    return static_cast<int>(g.neighbors(u).intersect_count(g.neighbors(v)));
}

Bitset neighborhood_in(const Graph& g, int v, const Bitset& s) {
    return g.neighbors(v) & s;
}

Bitset degree_class(const Graph& g, int m) {
    Bitset out(static_cast<std::size_t>(g.n()));
    for (int v = 0; v < g.n(); ++v)
        if (g.degree(v) == m) out.set(static_cast<std::size_t>(v));
    return out;
}

} // namespace zolaw
