#include "zolaw/decider.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "zolaw/parse.hpp"
#include "zolaw/solvers.hpp"

namespace zolaw {

int ParamConfig::block_of(const std::string& name) const {
    for (std::size_t i = 0; i < params_.size(); ++i)
        if (params_[i] == name) return param_block_[i];
    throw DeciderError("unknown parameter '" + name + "'");
}

ParamConfig ParamConfig::with_merged(const std::string& name, int block) const {
    ParamConfig out = *this;
    out.params_.push_back(name);
    out.param_block_.push_back(block);
    return out;
}

ParamConfig ParamConfig::with_fresh(const std::string& name, unsigned pattern) const {
    ParamConfig out = *this;
    int nb = block_count();
    out.params_.push_back(name);
    out.param_block_.push_back(nb);
    for (int i = 0; i < nb; ++i) out.block_adj_[i].push_back((pattern >> i) & 1u ? 1 : 0);
    std::vector<char> row(nb + 1, 0);
    for (int i = 0; i < nb; ++i) row[i] = (pattern >> i) & 1u ? 1 : 0;
    out.block_adj_.push_back(std::move(row));
    return out;
}

std::vector<ClassDesc> class_system(const ParamConfig& cfg) {
    std::vector<ClassDesc> out;
    const int nb = cfg.block_count();
    for (int b = 0; b < nb; ++b) out.push_back({ClassDesc::Kind::Singleton, b, 0});
    for (unsigned pat = 0; pat < (1u << nb); ++pat) out.push_back({ClassDesc::Kind::Pattern, -1, pat});
    return out;
}

namespace {

bool is_weak_fragment(const FormulaRef& f, std::string* why) {
    bool ok = true;
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, NotF>) {
                ok = is_weak_fragment(n.f, why);
            } else if constexpr (std::is_same_v<T, AndF> || std::is_same_v<T, OrF>) {
                for (const auto& s : n.fs)
                    if (!is_weak_fragment(s, why)) { ok = false; return; }
            } else if constexpr (std::is_same_v<T, ImpliesF>) {
                ok = is_weak_fragment(n.a, why) && is_weak_fragment(n.b, why);
            } else if constexpr (std::is_same_v<T, ExistsF> || std::is_same_v<T, ForallF>) {
                ok = is_weak_fragment(n.body, why);
            } else if constexpr (std::is_same_v<T, QWeakF>) {
                if (n.q.kind == QuantName::Kind::Ham) {
                    if (why) *why = "Ham quantifier is outside the decidable fragment";
                    ok = false;
                    return;
                }
                ok = is_weak_fragment(n.edge, why);
            } else if constexpr (std::is_same_v<T, QRelF> || std::is_same_v<T, QEqF> || std::is_same_v<T, QTuF>) {
                if (why) *why = "relativized/equality/tuple quantifiers are outside the decidable fragment";
                ok = false;
            }
        },
        f->node());
    return ok;
}

TraceRef make_trace(std::string rule, int verdict, std::string detail, std::vector<TraceRef> children) {
    auto t = std::make_shared<DecideTrace>();
    t->rule = std::move(rule);
    t->verdict = verdict;
    t->detail = std::move(detail);
    t->children = std::move(children);
    return t;
}

struct Decider {
    bool want_trace;

    int limit(const FormulaRef& f, const ParamConfig& cfg, TraceRef* trace) {
        return std::visit(
            [&](const auto& n) -> int {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, TrueF>) {
                    return emit(trace, "true", 1, "", {});
                } else if constexpr (std::is_same_v<T, EqualF>) {
                    int v = cfg.block_of(n.a.name) == cfg.block_of(n.b.name) ? 1 : 0;
                    return emit(trace, "atom-equal", v, n.a.name + "=" + n.b.name, {});
                } else if constexpr (std::is_same_v<T, AdjF>) {
                    int v = cfg.blocks_adjacent(cfg.block_of(n.a.name), cfg.block_of(n.b.name)) ? 1 : 0;
                    return emit(trace, "atom-adj", v, n.a.name + "~" + n.b.name, {});
                } else if constexpr (std::is_same_v<T, NotF>) {
                    TraceRef child;
                    int v = 1 - limit(n.f, cfg, want_trace ? &child : nullptr);
                    return emit(trace, "not", v, "", {child});
                } else if constexpr (std::is_same_v<T, AndF>) {
                    std::vector<TraceRef> children;
                    int v = 1;
                    for (const auto& s : n.fs) {
                        TraceRef child;
                        v = std::min(v, limit(s, cfg, want_trace ? &child : nullptr));
                        if (want_trace) children.push_back(child);
                        if (!want_trace && v == 0) break;
                    }
                    return emit(trace, "and", v, "", std::move(children));
                } else if constexpr (std::is_same_v<T, OrF>) {
                    std::vector<TraceRef> children;
                    int v = 0;
                    for (const auto& s : n.fs) {
                        TraceRef child;
                        v = std::max(v, limit(s, cfg, want_trace ? &child : nullptr));
                        if (want_trace) children.push_back(child);
                        if (!want_trace && v == 1) break;
                    }
                    return emit(trace, "or", v, "", std::move(children));
                } else if constexpr (std::is_same_v<T, ImpliesF>) {
                    TraceRef ca, cb;
                    int a = limit(n.a, cfg, want_trace ? &ca : nullptr);
                    int b = limit(n.b, cfg, want_trace ? &cb : nullptr);
                    int v = std::max(1 - a, b);
                    return emit(trace, "implies", v, "", {ca, cb});
                } else if constexpr (std::is_same_v<T, ExistsF>) {
                    return exists_limit(n.vars, n.body, cfg, trace, false);
                } else if constexpr (std::is_same_v<T, ForallF>) {
                    return exists_limit(n.vars, n.body, cfg, trace, true);
                } else if constexpr (std::is_same_v<T, QWeakF>) {
                    return qweak_limit(n, cfg, trace);
                } else {
                    throw UnsupportedFragment("quantifier variant outside the decidable fragment");
                }
            },
            f->node());
    }

    // Exists: true iff some class extension makes the body limit-true. Every
    // class is a.a.s. nonempty (singletons trivially; pattern classes have
    // linear size). Forall dualizes to not-exists-not, negating at the leaf.
    int exists_limit(const std::vector<Var>& vars, const FormulaRef& body, const ParamConfig& cfg,
                     TraceRef* trace, bool universal) {
        std::vector<TraceRef> children;
        int found = search(vars, 0, body, cfg, universal, want_trace ? &children : nullptr);
        int v = universal ? 1 - found : found;
        if (trace) {
            std::string names;
            for (const Var& var : vars) names += (names.empty() ? "" : " ") + var.name;
            *trace = make_trace(universal ? "forall" : "exists", v, "over " + names, std::move(children));
        }
        return v;
    }

    // Search for an extension of vars[vi..] whose leaf value is 1, where the
    // leaf is limit(body) for exists and 1 - limit(body) for forall. With
    // tracing on, all top-level class children are recorded.
    int search(const std::vector<Var>& vars, std::size_t vi, const FormulaRef& body,
               const ParamConfig& cfg, bool universal, std::vector<TraceRef>* children) {
        if (vi == vars.size()) {
            TraceRef body_trace;
            int v = limit(body, cfg, want_trace ? &body_trace : nullptr);
            if (universal) {
                if (children) children->push_back(make_trace("not", 1 - v, "", {body_trace}));
                return 1 - v;
            }
            if (children && body_trace) children->push_back(body_trace);
            return v;
        }
        const std::string& name = vars[vi].name;
        int found = 0;
        auto try_cfg = [&](const ParamConfig& next, const std::string& label) {
            if (found && !children) return;
            std::vector<TraceRef> sub;
            int inner = search(vars, vi + 1, body, next, universal, children ? &sub : nullptr);
            if (children) children->push_back(make_trace("class", inner, label, std::move(sub)));
            if (inner == 1) found = 1;
        };
        for (int b = 0; b < cfg.block_count(); ++b)
            try_cfg(cfg.with_merged(name, b), name + " = block" + std::to_string(b));
        for (unsigned pat = 0; pat < (1u << cfg.block_count()); ++pat)
            try_cfg(cfg.with_fresh(name, pat), name + " fresh pattern " + std::to_string(pat));
        return found;
    }

    // Pair verdict: limiting truth of the edge formula for y1 in class i and
    // y2 in class j, distinct, under the stated adjacency between them.
    int pair_verdict(const QWeakF& q, const ParamConfig& cfg, const ClassDesc& ci, const ClassDesc& cj,
                     bool adjacent) {
        ParamConfig c1 = extend_class(cfg, q.x.name, ci);
        ParamConfig c2 = extend_distinct(c1, q.y.name, cj, c1.block_of(q.x.name), adjacent);
        return limit(q.edge, c2, nullptr);
    }

    static ParamConfig extend_class(const ParamConfig& cfg, const std::string& name, const ClassDesc& c) {
        if (c.kind == ClassDesc::Kind::Singleton) return cfg.with_merged(name, c.block);
        return cfg.with_fresh(name, c.pattern);
    }

    // Add `name` in class c, distinct from the previously added block
    // `other_block`; `adjacent` fixes the pair's adjacency when free. For a
    // singleton class the adjacency to every block is already determined.
    static ParamConfig extend_distinct(const ParamConfig& cfg, const std::string& name, const ClassDesc& c,
                                       int other_block, bool adjacent) {
        if (c.kind == ClassDesc::Kind::Singleton) return cfg.with_merged(name, c.block);
        unsigned pattern = c.pattern; // adjacency to the original blocks
        if (adjacent) pattern |= (1u << other_block);
        return cfg.with_fresh(name, pattern);
    }

    // Legal relation cases for a distinct pair (y1 in class i, y2 in class j).
    // Singleton classes determine adjacency; two fresh vertices leave their
    // mutual adjacency free.
    struct PairCase {
        bool adjacent;
        const char* label;
    };

    std::vector<PairCase> legal_cases(const ClassDesc& ci, const ClassDesc& cj, bool same_class,
                                      const ParamConfig& cfg) const {
        std::vector<PairCase> out;
        bool i_single = ci.kind == ClassDesc::Kind::Singleton;
        bool j_single = cj.kind == ClassDesc::Kind::Singleton;
        if (i_single && j_single) {
            if (same_class) return out; // one vertex only; no distinct pair, no loop
            bool adj = cfg.blocks_adjacent(ci.block, cj.block);
            out.push_back({adj, adj ? "determined adjacent" : "determined non-adjacent"});
            return out;
        }
        if (i_single != j_single) {
            // adjacency of the fresh vertex to the singleton's block is part of
            // its pattern
            const ClassDesc& pat = i_single ? cj : ci;
            const ClassDesc& single = i_single ? ci : cj;
            bool adj = (pat.pattern >> single.block) & 1u;
            out.push_back({adj, adj ? "pattern-adjacent" : "pattern-non-adjacent"});
            return out;
        }
        // two fresh vertices: mutual adjacency is free
        out.push_back({false, "free non-adjacent"});
        out.push_back({true, "free adjacent"});
        return out;
    }

    QuotientH build_quotient(const QWeakF& q, const ParamConfig& cfg, std::string* table) {
        QuotientH h;
        h.classes = class_system(cfg);
        const std::size_t k = h.classes.size();
        h.edge.assign(k, std::vector<char>(k, 0));
        h.internal.assign(k, InternalPattern::None);
        std::ostringstream tab;
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i; j < k; ++j) {
                bool any = false;
                for (const PairCase& pc : legal_cases(h.classes[i], h.classes[j], i == j, cfg)) {
                    int v = pair_verdict(q, cfg, h.classes[i], h.classes[j], pc.adjacent);
                    if (table) tab << "(" << i << "," << j << "," << pc.label << ")=" << v << "; ";
                    if (v) any = true;
                }
                if (i == j) {
                    if (h.classes[i].kind == ClassDesc::Kind::Pattern) {
                        int with_adj = pair_verdict(q, cfg, h.classes[i], h.classes[j], true);
                        int without = pair_verdict(q, cfg, h.classes[i], h.classes[j], false);
                        if (with_adj && without) h.internal[i] = InternalPattern::AlwaysTrue;
                        else if (!with_adj && !without) h.internal[i] = InternalPattern::AlwaysFalse;
                        else if (with_adj) h.internal[i] = InternalPattern::AgreesWithAdjacency;
                        else h.internal[i] = InternalPattern::DisagreesWithAdjacency;
                        h.edge[i][i] = (with_adj || without) ? 1 : 0; // loop
                    }
                } else if (any) {
                    h.edge[i][j] = h.edge[j][i] = 1;
                }
            }
        }
        if (table) *table = tab.str();
        return h;
    }

    int qweak_limit(const QWeakF& q, const ParamConfig& cfg, TraceRef* trace) {
        std::string table;
        QuotientH h = build_quotient(q, cfg, want_trace ? &table : nullptr);
        int v;
        std::string rule;
        if (q.q.kind == QuantName::Kind::Conn) {
            v = conn_rule(h, cfg);
            rule = "qconn";
        } else {
            v = chr_rule(h, q.q.chr_k, cfg);
            rule = "qchr" + std::to_string(q.q.chr_k);
        }
        if (trace) *trace = make_trace(rule, v, table, {});
        return v;
    }

    int emit(TraceRef* trace, std::string rule, int verdict, std::string detail, std::vector<TraceRef> children) {
        if (trace) {
            std::vector<TraceRef> kept;
            for (auto& c : children)
                if (c) kept.push_back(std::move(c));
            *trace = make_trace(std::move(rule), verdict, std::move(detail), std::move(kept));
        }
        return verdict;
    }
};

} // namespace

int conn_rule(const QuotientH& h, const ParamConfig& cfg) {
    if (cfg.param_count() == 0) {
        // single class; F is the empty graph, the complete graph, G itself or
        // its complement depending on the within-class behaviour
        switch (h.internal.at(0)) {
            case InternalPattern::AlwaysFalse: return 0;
            case InternalPattern::AlwaysTrue: return 1;                 // complete
            case InternalPattern::AgreesWithAdjacency: return 1;        // G(n,p), a.a.s. connected
            case InternalPattern::DisagreesWithAdjacency: return 1;     // complement, same
            case InternalPattern::None: return 0;
        }
    }
    // H-connectivity as a simple graph; loops never aid reachability.
    const std::size_t k = h.classes.size();
    Graph simple(static_cast<int>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (h.edge[i][j]) simple.add_edge(static_cast<int>(i), static_cast<int>(j));
    return is_connected(simple) ? 1 : 0;
}

int chr_rule(const QuotientH& h, int k, const ParamConfig& /*cfg*/) {
    // Any pattern class that is internally a clique, a copy of G(n,p) or its
    // complement has divergent chromatic number, so no fixed k is ever hit.
    for (std::size_t i = 0; i < h.classes.size(); ++i) {
        if (h.classes[i].kind != ClassDesc::Kind::Pattern) continue;
        if (h.internal[i] != InternalPattern::AlwaysFalse) return 0;
    }
    const std::size_t c = h.classes.size();
    Graph simple(static_cast<int>(c));
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = i + 1; j < c; ++j)
            if (h.edge[i][j]) simple.add_edge(static_cast<int>(i), static_cast<int>(j));
    return chromatic_number(simple) == k ? 1 : 0;
}

int limit_truth(const FormulaRef& f, const ParamConfig& cfg) {
    return limit_truth(f, cfg, nullptr);
}

int limit_truth(const FormulaRef& f, const ParamConfig& cfg, TraceRef* trace) {
    std::string why;
    if (!is_weak_fragment(f, &why)) throw UnsupportedFragment(why);
    for (const Var& v : free_vars(f)) cfg.block_of(v.name); // throws if missing
    Decider d{trace != nullptr};
    return d.limit(f, cfg, trace);
}

LimitVerdict decide(const FormulaRef& f) {
    if (!free_vars(f).empty()) throw DeciderError("decide requires a sentence (no free variables)");
    LimitVerdict out;
    TraceRef trace;
    out.value = limit_truth(f, ParamConfig{}, &trace);
    out.trace = trace;
    return out;
}

namespace {

nlohmann::ordered_json trace_json(const TraceRef& t) {
    nlohmann::ordered_json j;
    j["rule"] = t->rule;
    j["verdict"] = t->verdict;
    if (!t->detail.empty()) j["detail"] = t->detail;
    if (!t->children.empty()) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& c : t->children) arr.push_back(trace_json(c));
        j["children"] = std::move(arr);
    }
    return j;
}

} // namespace

std::string trace_to_json(const TraceRef& trace) {
    if (!trace) return "null";
    return trace_json(trace).dump();
}

} // namespace zolaw
