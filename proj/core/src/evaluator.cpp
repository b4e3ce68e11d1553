#include "zolaw/evaluator.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>

#include "zolaw/parse.hpp"

namespace zolaw {

namespace {

enum class Tri : unsigned char { False = 0, True = 1, Unknown = 2 };

Tri tri_of(bool b) { return b ? Tri::True : Tri::False; }

Tri tri_not(Tri t) {
    if (t == Tri::Unknown) return Tri::Unknown;
    return t == Tri::True ? Tri::False : Tri::True;
}

// One quantifier chain plus its body flattened into conjuncts. Forall is
// handled as the negation of an Exists chain over the negated body, which
// recovers conjunct structure from implications and disjunctions.
struct PreparedChain {
    std::vector<Var> vars;
    std::vector<FormulaRef> conjuncts;
    bool negated = false;
};

void flatten_and(const FormulaRef& f, std::vector<FormulaRef>& out);

// Conjuncts whose conjunction is equivalent to (not f).
void flatten_negated(const FormulaRef& f, std::vector<FormulaRef>& out) {
    if (const auto* n = f->as<NotF>()) {
        flatten_and(n->f, out);
    } else if (const auto* n = f->as<OrF>()) {
        for (const auto& s : n->fs) flatten_negated(s, out);
    } else if (const auto* n = f->as<ImpliesF>()) {
        flatten_and(n->a, out);
        flatten_negated(n->b, out);
    } else {
        out.push_back(fml::nott(f));
    }
}

void flatten_and(const FormulaRef& f, std::vector<FormulaRef>& out) {
    if (const auto* n = f->as<AndF>()) {
        for (const auto& s : n->fs) flatten_and(s, out);
    } else if (const auto* n = f->as<NotF>()) {
        // not(or ...) and not(implies ...) also split into conjuncts
        if (n->f->is<OrF>() || n->f->is<ImpliesF>() || n->f->is<NotF>()) {
            flatten_negated(n->f, out);
        } else {
            out.push_back(f);
        }
    } else {
        out.push_back(f);
    }
}

class EvalContext {
public:
    EvalContext(const Graph& g, const EvalLimits& limits, TraceSink* trace)
        : g_(g), limits_(limits), trace_(trace) {}

    void bind(const std::string& name, int value) { env_.emplace_back(name, value); }
    void unbind() { env_.pop_back(); }

    const int* lookup(const std::string& name) const {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
            if (it->first == name) return &it->second;
        return nullptr;
    }

    bool eval_total(const FormulaRef& f) {
        Tri r = tri(f);
        if (r == Tri::Unknown) throw UnboundVariable("free variable without binding");
        return r == Tri::True;
    }

    // --- Kleene evaluation under a possibly partial environment ------------

    Tri tri(const FormulaRef& f) {
        Tri result = std::visit(
            [&](const auto& n) -> Tri {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, TrueF>) {
                    return Tri::True;
                } else if constexpr (std::is_same_v<T, EqualF>) {
                    const int* a = lookup(n.a.name);
                    const int* b = lookup(n.b.name);
                    if (!a || !b) return Tri::Unknown;
                    return tri_of(*a == *b);
                } else if constexpr (std::is_same_v<T, AdjF>) {
                    const int* a = lookup(n.a.name);
                    const int* b = lookup(n.b.name);
                    if (!a || !b) return Tri::Unknown;
                    return tri_of(g_.adjacent(*a, *b));
                } else if constexpr (std::is_same_v<T, NotF>) {
                    return tri_not(tri(n.f));
                } else if constexpr (std::is_same_v<T, AndF>) {
                    bool unknown = false;
                    for (const auto& s : n.fs) {
                        Tri r = tri(s);
                        if (r == Tri::False) return Tri::False;
                        if (r == Tri::Unknown) unknown = true;
                    }
                    return unknown ? Tri::Unknown : Tri::True;
                } else if constexpr (std::is_same_v<T, OrF>) {
                    bool unknown = false;
                    for (const auto& s : n.fs) {
                        Tri r = tri(s);
                        if (r == Tri::True) return Tri::True;
                        if (r == Tri::Unknown) unknown = true;
                    }
                    return unknown ? Tri::Unknown : Tri::False;
                } else if constexpr (std::is_same_v<T, ImpliesF>) {
                    Tri a = tri(n.a);
                    if (a == Tri::False) return Tri::True;
                    Tri b = tri(n.b);
                    if (b == Tri::True) return Tri::True;
                    if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
                    return Tri::False;
                } else if constexpr (std::is_same_v<T, ExistsF> || std::is_same_v<T, ForallF>) {
                    const PreparedChain& chain = prepare(f);
                    Tri r = run_chain(chain);
                    return chain.negated ? tri_not(r) : r;
                } else {
                    // Quantifier-variant nodes evaluate only under a full
                    // binding of their free variables.
                    std::vector<int> key;
                    if (!fv_values(f, key)) return Tri::Unknown;
                    auto memo = qmemo_.find(MemoKey{f.get(), key});
                    if (memo != qmemo_.end()) return tri_of(memo->second);
                    bool value = eval_quantifier(f);
                    if (qmemo_.size() < (1u << 20)) qmemo_.emplace(MemoKey{f.get(), std::move(key)}, value);
                    return tri_of(value);
                }
            },
            f->node());
        if (trace_ && speculation_ == 0 && result != Tri::Unknown) record_trace(f, result == Tri::True);
        return result;
    }

    // --- Row evaluation: the set {a | f[var := a]} as a bitset --------------

    Bitset rows(const FormulaRef& f, const Var& var) {
        const std::size_t n = static_cast<std::size_t>(g_.n());
        return std::visit(
            [&](const auto& node) -> Bitset {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, TrueF>) {
                    return Bitset(n, true);
                } else if constexpr (std::is_same_v<T, EqualF>) {
                    bool av = node.a == var, bv = node.b == var;
                    if (av && bv) return Bitset(n, true);
                    if (av || bv) {
                        Bitset out(n);
                        int other = require(av ? node.b : node.a);
                        out.set(static_cast<std::size_t>(other));
                        return out;
                    }
                    return Bitset(n, require(node.a) == require(node.b));
                } else if constexpr (std::is_same_v<T, AdjF>) {
                    bool av = node.a == var, bv = node.b == var;
                    if (av && bv) return Bitset(n); // no self loops
                    if (av || bv) return g_.neighbors(require(av ? node.b : node.a));
                    return Bitset(n, g_.adjacent(require(node.a), require(node.b)));
                } else if constexpr (std::is_same_v<T, NotF>) {
                    return ~rows(node.f, var);
                } else if constexpr (std::is_same_v<T, AndF>) {
                    Bitset out(n, true);
                    for (const auto& s : node.fs) out &= rows(s, var);
                    return out;
                } else if constexpr (std::is_same_v<T, OrF>) {
                    Bitset out(n);
                    for (const auto& s : node.fs) out |= rows(s, var);
                    return out;
                } else if constexpr (std::is_same_v<T, ImpliesF>) {
                    return ~rows(node.a, var) | rows(node.b, var);
                } else {
                    // Quantifier node: scalar per candidate (or broadcast when
                    // var does not occur free).
                    const auto& fv = free_list(f);
                    bool depends = std::binary_search(fv.begin(), fv.end(), var.name);
                    Bitset out(n);
                    if (!depends) {
                        if (eval_total(f)) out.fill();
                        return out;
                    }
                    for (std::size_t a = 0; a < n; ++a) {
                        bind(var.name, static_cast<int>(a));
                        bool v = eval_total(f);
                        unbind();
                        if (v) out.set(a);
                    }
                    return out;
                }
            },
            f->node());
    }

    // --- Quantifier variants -------------------------------------------------

    bool eval_quantifier(const FormulaRef& f) {
        if (const auto* n = f->as<QWeakF>()) return eval_qweak(*n);
        if (const auto* n = f->as<QRelF>())
            return apply_property(n->q, relativized_graph(n->v, n->dom, n->x, n->y, n->edge).second);
        if (const auto* n = f->as<QEqF>()) {
            std::vector<int> kept = definable(n->dom, n->v).to_vector();
            return apply_property(n->q, quotient_graph_eq(kept, n->u, n->w, n->eq, n->x, n->y, n->edge).second);
        }
        if (const auto* n = f->as<QTuF>()) {
            auto [classes, graph] = quotient_graph_tu(n->len, n->vbar, n->dom, n->ubar, n->wbar, n->eq,
                                                      n->xbar, n->ybar, n->edge);
            (void)classes;
            return apply_property(n->q, graph);
        }
        throw EvalError("not a quantifier node");
    }

    bool eval_qweak(const QWeakF& n) {
        return apply_property(n.q, weak_graph(n.x, n.y, n.edge));
    }

    // Derived graph of the weak variant: all of V, edges from the edge formula;
    // verifies antireflexivity (per row, ascending) then symmetry
    // (lexicographic first mismatch).
    Graph weak_graph(const Var& x, const Var& y, const FormulaRef& edge) {
        const int n = g_.n();
        std::vector<Bitset> matrix;
        matrix.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            bind(x.name, i);
            Bitset row = rows(edge, y);
            unbind();
            if (row.test(static_cast<std::size_t>(i)))
                throw SemanticsViolation("edge formula is reflexive at vertex " + std::to_string(i));
            matrix.push_back(std::move(row));
        }
        check_symmetry(matrix, nullptr);
        Graph derived(n);
        for (int i = 0; i < n; ++i)
            for (std::size_t j = matrix[static_cast<std::size_t>(i)].next(static_cast<std::size_t>(i) + 1);
                 j < matrix[static_cast<std::size_t>(i)].size();
                 j = matrix[static_cast<std::size_t>(i)].next(j + 1))
                derived.add_edge(i, static_cast<int>(j));
        return derived;
    }

    std::pair<std::vector<int>, Graph> relativized_graph(const Var& v, const FormulaRef& dom,
                                                         const Var& x, const Var& y, const FormulaRef& edge) {
        std::vector<int> kept = definable(dom, v).to_vector();
        const int k = static_cast<int>(kept.size());
        std::vector<Bitset> matrix(static_cast<std::size_t>(k), Bitset(static_cast<std::size_t>(k)));
        for (int i = 0; i < k; ++i) {
            bind(x.name, kept[static_cast<std::size_t>(i)]);
            Bitset row = rows(edge, y);
            unbind();
            for (int j = 0; j < k; ++j)
                if (row.test(static_cast<std::size_t>(kept[static_cast<std::size_t>(j)])))
                    matrix[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(j));
            if (matrix[static_cast<std::size_t>(i)].test(static_cast<std::size_t>(i)))
                throw SemanticsViolation("edge formula is reflexive at kept vertex " +
                                         std::to_string(kept[static_cast<std::size_t>(i)]));
        }
        check_symmetry(matrix, &kept);
        Graph derived(k);
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (matrix[static_cast<std::size_t>(i)].test(static_cast<std::size_t>(j))) derived.add_edge(i, j);
        return {std::move(kept), std::move(derived)};
    }

    // Equality variant: vertices are eq-classes of the kept set.
    std::pair<std::vector<std::vector<int>>, Graph>
    quotient_graph_eq(const std::vector<int>& kept, const Var& u, const Var& w, const FormulaRef& eq,
                      const Var& x, const Var& y, const FormulaRef& edge) {
        const int k = static_cast<int>(kept.size());
        std::vector<Bitset> eqm(static_cast<std::size_t>(k), Bitset(static_cast<std::size_t>(k)));
        for (int i = 0; i < k; ++i) {
            bind(u.name, kept[static_cast<std::size_t>(i)]);
            Bitset row = rows(eq, w);
            unbind();
            for (int j = 0; j < k; ++j)
                if (row.test(static_cast<std::size_t>(kept[static_cast<std::size_t>(j)])))
                    eqm[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(j));
        }
        auto edge_value = [&](int i, int j) {
            bind(x.name, kept[static_cast<std::size_t>(i)]);
            bind(y.name, kept[static_cast<std::size_t>(j)]);
            bool r = eval_total(edge);
            unbind();
            unbind();
            return r;
        };
        return quotient_from_matrices(kept.size(), eqm, edge_value,
                                      [&](int i) { return std::vector<int>{kept[static_cast<std::size_t>(i)]}; });
    }

    std::pair<std::vector<std::vector<std::vector<int>>>, Graph>
    quotient_graph_tu(int len, const std::vector<Var>& vbar, const FormulaRef& dom,
                      const std::vector<Var>& ubar, const std::vector<Var>& wbar, const FormulaRef& eq,
                      const std::vector<Var>& xbar, const std::vector<Var>& ybar, const FormulaRef& edge) {
        const int n = g_.n();
        long long total = 1;
        for (int i = 0; i < len; ++i) {
            total *= n;
            if (total > limits_.tuple_domain_cap)
                throw CapExceeded("Qtu: tuple domain n^l exceeds cap");
        }
        std::vector<std::vector<int>> kept;
        std::vector<int> tuple(static_cast<std::size_t>(len), 0);
        // lexicographic enumeration of V^l
        for (long long idx = 0; idx < total; ++idx) {
            long long rest = idx;
            for (int i = len - 1; i >= 0; --i) {
                tuple[static_cast<std::size_t>(i)] = static_cast<int>(rest % n);
                rest /= n;
            }
            bind_tuple(vbar, tuple);
            bool in = eval_total(dom);
            unbind_tuple(vbar);
            if (in) kept.push_back(tuple);
        }
        const std::size_t k = kept.size();
        std::vector<Bitset> eqm(k, Bitset(k));
        for (std::size_t i = 0; i < k; ++i) {
            bind_tuple(ubar, kept[i]);
            for (std::size_t j = 0; j < k; ++j) {
                bind_tuple(wbar, kept[j]);
                if (eval_total(eq)) eqm[i].set(j);
                unbind_tuple(wbar);
            }
            unbind_tuple(ubar);
        }
        auto edge_value = [&](int i, int j) {
            bind_tuple(xbar, kept[static_cast<std::size_t>(i)]);
            bind_tuple(ybar, kept[static_cast<std::size_t>(j)]);
            bool r = eval_total(edge);
            unbind_tuple(ybar);
            unbind_tuple(xbar);
            return r;
        };
        auto [classes, graph] = quotient_from_matrices(k, eqm, edge_value,
                                                       [&](int i) { return kept[static_cast<std::size_t>(i)]; });
        std::vector<std::vector<std::vector<int>>> tuple_classes;
        tuple_classes.reserve(classes.size());
        for (const auto& cls : classes) {
            std::vector<std::vector<int>> members;
            for (int idx : cls) members.push_back(kept[static_cast<std::size_t>(idx)]);
            tuple_classes.push_back(std::move(members));
        }
        return {std::move(tuple_classes), std::move(graph)};
    }

    bool apply_property(QuantName q, const Graph& derived) {
        switch (q.kind) {
            case QuantName::Kind::Conn:
                return is_connected(derived);
            case QuantName::Kind::Ham:
                return is_hamiltonian(derived, limits_.ham_cap);
            case QuantName::Kind::Chr: {
                if (derived.n() == 0) return q.chr_k == 0;
                // chromatic_number == k, decided by two colorability queries
                return is_k_colorable(derived, q.chr_k, limits_.colorability_cap) &&
                       !is_k_colorable(derived, q.chr_k - 1, limits_.colorability_cap);
            }
        }
        throw EvalError("unknown quantifier name");
    }

    Bitset definable(const FormulaRef& f, const Var& var) { return rows(f, var); }

    const Graph& graph() const { return g_; }
    const EvalLimits& limits() const { return limits_; }

private:
    struct MemoKey {
        const void* node;
        std::vector<int> values;
        bool operator==(const MemoKey& o) const { return node == o.node && values == o.values; }
    };
    struct MemoKeyHash {
        std::size_t operator()(const MemoKey& k) const {
            std::size_t h = std::hash<const void*>()(k.node);
            for (int v : k.values) h = h * 1000003u + static_cast<std::size_t>(v) + 0x9e3779b9u;
            return h;
        }
    };

    int require(const Var& v) const {
        const int* p = lookup(v.name);
        if (!p) throw UnboundVariable("unbound variable '" + v.name + "'");
        return *p;
    }

    void bind_tuple(const std::vector<Var>& vars, const std::vector<int>& values) {
        for (std::size_t i = 0; i < vars.size(); ++i) bind(vars[i].name, values[i]);
    }
    void unbind_tuple(const std::vector<Var>& vars) {
        for (std::size_t i = 0; i < vars.size(); ++i) unbind();
    }

    // Sorted free-variable names per node, cached.
    const std::vector<std::string>& free_list(const FormulaRef& f) {
        auto it = fv_cache_.find(f.get());
        if (it != fv_cache_.end()) return it->second;
        std::vector<std::string> names;
        for (const Var& v : free_vars(f)) names.push_back(v.name);
        return fv_cache_.emplace(f.get(), std::move(names)).first->second;
    }

    // Values of f's free variables under env; false if any is unbound.
    bool fv_values(const FormulaRef& f, std::vector<int>& out) {
        for (const std::string& name : free_list(f)) {
            const int* p = lookup(name);
            if (!p) return false;
            out.push_back(*p);
        }
        return true;
    }

    void check_symmetry(const std::vector<Bitset>& matrix, const std::vector<int>* kept) {
        const std::size_t k = matrix.size();
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (matrix[i].test(j) != matrix[j].test(i)) {
                    int a = kept ? (*kept)[i] : static_cast<int>(i);
                    int b = kept ? (*kept)[j] : static_cast<int>(j);
                    throw SemanticsViolation("edge formula is asymmetric on pair (" +
                                             std::to_string(a) + ", " + std::to_string(b) + ")");
                }
    }

    // Shared quotient construction for Qeq/Qtu. Verifies that eqm is an
    // equivalence, that edge values are constant on ordered class pairs, and
    // that the quotient relation is irreflexive and symmetric.
    template <typename EdgeValue, typename Member>
    std::pair<std::vector<std::vector<int>>, Graph>
    quotient_from_matrices(std::size_t k, const std::vector<Bitset>& eqm, EdgeValue edge_value, Member /*member*/) {
        for (std::size_t i = 0; i < k; ++i)
            if (!eqm[i].test(i))
                throw EquivalenceViolation("equality formula not reflexive at kept element " + std::to_string(i));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (eqm[i].test(j) != eqm[j].test(i))
                    throw EquivalenceViolation("equality formula not symmetric on kept pair (" +
                                               std::to_string(i) + ", " + std::to_string(j) + ")");
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = eqm[i].next(i + 1); j < k; j = eqm[i].next(j + 1))
                if (!(eqm[i] == eqm[j]))
                    throw EquivalenceViolation("equality formula not transitive at kept pair (" +
                                               std::to_string(i) + ", " + std::to_string(j) + ")");
        // classes in ascending order of first member
        std::vector<int> class_of(k, -1);
        std::vector<std::vector<int>> classes;
        for (std::size_t i = 0; i < k; ++i) {
            if (class_of[i] >= 0) continue;
            int id = static_cast<int>(classes.size());
            std::vector<int> members;
            for (std::size_t j = eqm[i].first(); j < k; j = eqm[i].next(j + 1)) {
                class_of[j] = id;
                members.push_back(static_cast<int>(j));
            }
            classes.push_back(std::move(members));
        }
        const std::size_t c = classes.size();
        // well-definedness: edge constant on each ordered class pair
        std::vector<std::vector<char>> quot(c, std::vector<char>(c, 0));
        for (std::size_t a = 0; a < c; ++a)
            for (std::size_t b = 0; b < c; ++b) {
                bool first = true;
                bool value = false;
                for (int i : classes[a])
                    for (int j : classes[b]) {
                        bool v = edge_value(i, j);
                        if (first) {
                            value = v;
                            first = false;
                        } else if (v != value) {
                            throw WellDefinednessViolation(
                                "edge formula distinguishes equivalent representatives on class pair (" +
                                std::to_string(a) + ", " + std::to_string(b) + ")");
                        }
                    }
                quot[a][b] = value ? 1 : 0;
            }
        for (std::size_t a = 0; a < c; ++a)
            if (quot[a][a])
                throw SemanticsViolation("edge formula is reflexive on quotient class " + std::to_string(a));
        for (std::size_t a = 0; a < c; ++a)
            for (std::size_t b = a + 1; b < c; ++b)
                if (quot[a][b] != quot[b][a])
                    throw SemanticsViolation("edge formula is asymmetric on quotient classes (" +
                                             std::to_string(a) + ", " + std::to_string(b) + ")");
        Graph derived(static_cast<int>(c));
        for (std::size_t a = 0; a < c; ++a)
            for (std::size_t b = a + 1; b < c; ++b)
                if (quot[a][b]) derived.add_edge(static_cast<int>(a), static_cast<int>(b));
        return {std::move(classes), std::move(derived)};
    }

    // --- Quantifier chains with speculative conjunct filtering --------------

    const PreparedChain& prepare(const FormulaRef& f) {
        auto it = chain_cache_.find(f.get());
        if (it != chain_cache_.end()) return it->second;
        PreparedChain chain;
        FormulaRef body;
        if (const auto* e = f->as<ExistsF>()) {
            chain.vars = e->vars;
            body = e->body;
            while (const auto* inner = body->as<ExistsF>()) {
                chain.vars.insert(chain.vars.end(), inner->vars.begin(), inner->vars.end());
                body = inner->body;
            }
            flatten_and(body, chain.conjuncts);
        } else {
            const auto* a = f->as<ForallF>();
            chain.negated = true;
            chain.vars = a->vars;
            body = a->body;
            while (const auto* inner = body->as<ForallF>()) {
                chain.vars.insert(chain.vars.end(), inner->vars.begin(), inner->vars.end());
                body = inner->body;
            }
            flatten_negated(body, chain.conjuncts);
        }
        return chain_cache_.emplace(f.get(), std::move(chain)).first->second;
    }

    Tri speculative(const FormulaRef& f) {
        ++speculation_;
        Tri r;
        try {
            r = tri(f);
        } catch (const EvalError&) {
            r = Tri::Unknown; // defer; the conjunct stays pending and re-fires
        }
        --speculation_;
        return r;
    }

    // Exists over chain.vars of the conjunction of `pending`. Candidates are
    // scanned in ascending vertex order; conjuncts that already evaluate under
    // the partial binding either prune the candidate or drop out of the
    // descent. Result is Kleene-sound under a partial outer environment.
    Tri run_chain(const PreparedChain& chain) {
        std::vector<const FormulaRef*> pending;
        pending.reserve(chain.conjuncts.size());
        for (const auto& c : chain.conjuncts) pending.push_back(&c);
        return chain_scan(chain, 0, pending);
    }

    Tri chain_scan(const PreparedChain& chain, std::size_t vi, const std::vector<const FormulaRef*>& pending) {
        if (vi == chain.vars.size()) {
            bool unknown = false;
            for (const FormulaRef* c : pending) {
                Tri r = tri(*c);
                if (r == Tri::False) return Tri::False;
                if (r == Tri::Unknown) unknown = true;
            }
            return unknown ? Tri::Unknown : Tri::True;
        }
        const int n = g_.n();
        bool saw_unknown = false;
        for (int cand = 0; cand < n; ++cand) {
            bind(chain.vars[vi].name, cand);
            std::vector<const FormulaRef*> remaining;
            remaining.reserve(pending.size());
            bool failed = false;
            for (const FormulaRef* c : pending) {
                Tri r = speculative(*c);
                if (r == Tri::False) {
                    failed = true;
                    break;
                }
                if (r == Tri::Unknown) remaining.push_back(c);
            }
            if (!failed) {
                if (remaining.empty()) {
                    unbind();
                    return Tri::True; // deeper variables may take any value
                }
                Tri r = chain_scan(chain, vi + 1, remaining);
                if (r == Tri::True) {
                    unbind();
                    return Tri::True;
                }
                if (r == Tri::Unknown) saw_unknown = true;
            }
            unbind();
        }
        return saw_unknown ? Tri::Unknown : Tri::False;
    }

    void record_trace(const FormulaRef& f, bool value) {
        if (trace_->entries.size() >= trace_->max_entries) {
            trace_->truncated = true;
            return;
        }
        TraceEntry entry;
        entry.formula = print(f);
        for (const auto& [name, val] : env_) entry.env[name] = val;
        entry.value = value;
        trace_->entries.push_back(std::move(entry));
    }

    const Graph& g_;
    EvalLimits limits_;
    TraceSink* trace_;
    std::vector<std::pair<std::string, int>> env_;
    int speculation_ = 0;
    std::unordered_map<const void*, std::vector<std::string>> fv_cache_;
    std::unordered_map<const void*, PreparedChain> chain_cache_;
    std::unordered_map<MemoKey, bool, MemoKeyHash> qmemo_;
};

EvalContext make_context(const Graph& g, const Assignment& env, const EvalLimits& limits,
                         TraceSink* trace = nullptr) {
    EvalContext ctx(g, limits, trace);
    for (const auto& [name, value] : env) {
        if (value < 0 || value >= g.n())
            throw EvalError("assignment binds '" + name + "' outside the vertex range");
        ctx.bind(name, value);
    }
    return ctx;
}

void require_closed_under(const FormulaRef& f, const Assignment& env, const std::set<Var>& extra = {}) {
    for (const Var& v : free_vars(f))
        if (!env.count(v.name) && !extra.count(v))
            throw UnboundVariable("free variable '" + v.name + "' is not bound by the assignment");
}

} // namespace

bool eval(const Graph& g, const FormulaRef& f, const Assignment& env,
          const EvalLimits& limits, TraceSink* trace) {
    require_closed_under(f, env);
    EvalContext ctx = make_context(g, env, limits, trace);
    return ctx.eval_total(f);
}

Bitset definable_set(const Graph& g, const FormulaRef& f, const Var& free,
                     const Assignment& env, const EvalLimits& limits) {
    require_closed_under(f, env, {free});
    EvalContext ctx = make_context(g, env, limits);
    return ctx.definable(f, free);
}

bool eval_qrl(const Graph& g, QuantName q, const Var& v, const FormulaRef& dom,
              const Var& x, const Var& y, const FormulaRef& edge,
              const Assignment& env, const EvalLimits& limits) {
    return eval(g, fml::qrel(q, v, dom, x, y, edge), env, limits);
}

bool eval_qeq(const Graph& g, QuantName q, const Var& v, const FormulaRef& dom,
              const Var& u, const Var& w, const FormulaRef& eq,
              const Var& x, const Var& y, const FormulaRef& edge,
              const Assignment& env, const EvalLimits& limits) {
    return eval(g, fml::qeq(q, v, dom, u, w, eq, x, y, edge), env, limits);
}

bool eval_qtu(const Graph& g, QuantName q, int len,
              const std::vector<Var>& vbar, const FormulaRef& dom,
              const std::vector<Var>& ubar, const std::vector<Var>& wbar, const FormulaRef& eq,
              const std::vector<Var>& xbar, const std::vector<Var>& ybar, const FormulaRef& edge,
              const Assignment& env, const EvalLimits& limits) {
    return eval(g, fml::qtu(q, len, vbar, dom, ubar, wbar, eq, xbar, ybar, edge), env, limits);
}

DerivedGraph build_weak_derived(const Graph& g, const Var& x, const Var& y,
                                const FormulaRef& edge, const Assignment& env,
                                const EvalLimits& limits) {
    FormulaRef probe = fml::qweak(QuantName::conn(), x, y, edge);
    require_closed_under(probe, env);
    EvalContext ctx = make_context(g, env, limits);
    DerivedGraph out;
    out.provenance = DerivedGraph::Provenance::Weak;
    out.tuple_len = 1;
    out.graph = ctx.weak_graph(x, y, edge);
    for (int i = 0; i < g.n(); ++i) out.classes.push_back({{i}});
    return out;
}

DerivedGraph build_tuple_derived(const Graph& g, int len,
                                 const std::vector<Var>& vbar, const FormulaRef& dom,
                                 const std::vector<Var>& ubar, const std::vector<Var>& wbar,
                                 const FormulaRef& eq,
                                 const std::vector<Var>& xbar, const std::vector<Var>& ybar,
                                 const FormulaRef& edge,
                                 const Assignment& env, const EvalLimits& limits) {
    FormulaRef probe = fml::qtu(QuantName::conn(), len, vbar, dom, ubar, wbar, eq, xbar, ybar, edge);
    require_closed_under(probe, env);
    EvalContext ctx = make_context(g, env, limits);
    DerivedGraph out;
    out.provenance = DerivedGraph::Provenance::Tuple;
    out.tuple_len = len;
    auto [classes, graph] = ctx.quotient_graph_tu(len, vbar, dom, ubar, wbar, eq, xbar, ybar, edge);
    out.classes = std::move(classes);
    out.graph = std::move(graph);
    return out;
}

} // namespace zolaw
