#include "zolaw/formula.hpp"

#include <algorithm>

namespace zolaw {

bool valid_var_name(const std::string& name) {
    if (name.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0]))) return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

std::string QuantName::text() const {
    switch (kind) {
        case Kind::Conn: return "conn";
        case Kind::Ham: return "ham";
        case Kind::Chr: return "chr" + std::to_string(chr_k);
    }
    return "?";
}

namespace fml {

static FormulaRef make(Formula::Node n) { return std::make_shared<const Formula>(std::move(n)); }

FormulaRef tru() { return make(TrueF{}); }
FormulaRef equal(Var a, Var b) { return make(EqualF{std::move(a), std::move(b)}); }
FormulaRef adj(Var a, Var b) { return make(AdjF{std::move(a), std::move(b)}); }
FormulaRef nott(FormulaRef f) { return make(NotF{std::move(f)}); }
FormulaRef conj(std::vector<FormulaRef> fs) { return make(AndF{std::move(fs)}); }
FormulaRef disj(std::vector<FormulaRef> fs) { return make(OrF{std::move(fs)}); }
FormulaRef implies(FormulaRef a, FormulaRef b) { return make(ImpliesF{std::move(a), std::move(b)}); }
FormulaRef iff(FormulaRef a, FormulaRef b) {
    return conj({implies(a, b), implies(b, a)});
}
FormulaRef exists(std::vector<Var> vars, FormulaRef body) { return make(ExistsF{std::move(vars), std::move(body)}); }
FormulaRef forall(std::vector<Var> vars, FormulaRef body) { return make(ForallF{std::move(vars), std::move(body)}); }
FormulaRef qweak(QuantName q, Var x, Var y, FormulaRef edge) {
    return make(QWeakF{q, std::move(x), std::move(y), std::move(edge)});
}
FormulaRef qrel(QuantName q, Var v, FormulaRef dom, Var x, Var y, FormulaRef edge) {
    return make(QRelF{q, std::move(v), std::move(dom), std::move(x), std::move(y), std::move(edge)});
}
FormulaRef qeq(QuantName q, Var v, FormulaRef dom, Var u, Var w, FormulaRef eq,
               Var x, Var y, FormulaRef edge) {
    return make(QEqF{q, std::move(v), std::move(dom), std::move(u), std::move(w), std::move(eq),
                     std::move(x), std::move(y), std::move(edge)});
}
FormulaRef qtu(QuantName q, int len, std::vector<Var> vbar, FormulaRef dom,
               std::vector<Var> ubar, std::vector<Var> wbar, FormulaRef eq,
               std::vector<Var> xbar, std::vector<Var> ybar, FormulaRef edge) {
    return make(QTuF{q, len, std::move(vbar), std::move(dom), std::move(ubar), std::move(wbar),
                     std::move(eq), std::move(xbar), std::move(ybar), std::move(edge)});
}

} // namespace fml

bool structurally_equal(const FormulaRef& a, const FormulaRef& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->node().index() != b->node().index()) return false;
    auto eq_list = [](const std::vector<FormulaRef>& x, const std::vector<FormulaRef>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!structurally_equal(x[i], y[i])) return false;
        return true;
    };
    return std::visit(
        [&](const auto& na) -> bool {
            using T = std::decay_t<decltype(na)>;
            const T& nb = *b->as<T>();
            if constexpr (std::is_same_v<T, TrueF>) {
                return true;
            } else if constexpr (std::is_same_v<T, EqualF> || std::is_same_v<T, AdjF>) {
                return na.a == nb.a && na.b == nb.b;
            } else if constexpr (std::is_same_v<T, NotF>) {
                return structurally_equal(na.f, nb.f);
            } else if constexpr (std::is_same_v<T, AndF> || std::is_same_v<T, OrF>) {
                return eq_list(na.fs, nb.fs);
            } else if constexpr (std::is_same_v<T, ImpliesF>) {
                return structurally_equal(na.a, nb.a) && structurally_equal(na.b, nb.b);
            } else if constexpr (std::is_same_v<T, ExistsF> || std::is_same_v<T, ForallF>) {
                return na.vars == nb.vars && structurally_equal(na.body, nb.body);
            } else if constexpr (std::is_same_v<T, QWeakF>) {
                return na.q == nb.q && na.x == nb.x && na.y == nb.y && structurally_equal(na.edge, nb.edge);
            } else if constexpr (std::is_same_v<T, QRelF>) {
                return na.q == nb.q && na.v == nb.v && structurally_equal(na.dom, nb.dom) &&
                       na.x == nb.x && na.y == nb.y && structurally_equal(na.edge, nb.edge);
            } else if constexpr (std::is_same_v<T, QEqF>) {
                return na.q == nb.q && na.v == nb.v && structurally_equal(na.dom, nb.dom) &&
                       na.u == nb.u && na.w == nb.w && structurally_equal(na.eq, nb.eq) &&
                       na.x == nb.x && na.y == nb.y && structurally_equal(na.edge, nb.edge);
            } else if constexpr (std::is_same_v<T, QTuF>) {
                return na.q == nb.q && na.len == nb.len && na.vbar == nb.vbar &&
                       structurally_equal(na.dom, nb.dom) && na.ubar == nb.ubar && na.wbar == nb.wbar &&
                       structurally_equal(na.eq, nb.eq) && na.xbar == nb.xbar && na.ybar == nb.ybar &&
                       structurally_equal(na.edge, nb.edge);
            }
        },
        a->node());
}

namespace {

void collect_free(const FormulaRef& f, std::set<Var>& bound, std::set<Var>& out) {
    auto with_bound = [&](const std::vector<Var>& vars, const FormulaRef& sub) {
        std::vector<Var> added;
        for (const Var& v : vars)
            if (bound.insert(v).second) added.push_back(v);
        collect_free(sub, bound, out);
        for (const Var& v : added) bound.erase(v);
    };
    auto leaf = [&](const Var& v) {
        if (!bound.count(v)) out.insert(v);
    };
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, TrueF>) {
            } else if constexpr (std::is_same_v<T, EqualF> || std::is_same_v<T, AdjF>) {
                leaf(n.a);
                leaf(n.b);
            } else if constexpr (std::is_same_v<T, NotF>) {
                collect_free(n.f, bound, out);
            } else if constexpr (std::is_same_v<T, AndF> || std::is_same_v<T, OrF>) {
                for (const auto& s : n.fs) collect_free(s, bound, out);
            } else if constexpr (std::is_same_v<T, ImpliesF>) {
                collect_free(n.a, bound, out);
                collect_free(n.b, bound, out);
            } else if constexpr (std::is_same_v<T, ExistsF> || std::is_same_v<T, ForallF>) {
                with_bound(n.vars, n.body);
            } else if constexpr (std::is_same_v<T, QWeakF>) {
                with_bound({n.x, n.y}, n.edge);
            } else if constexpr (std::is_same_v<T, QRelF>) {
                with_bound({n.v}, n.dom);
                with_bound({n.x, n.y}, n.edge);
            } else if constexpr (std::is_same_v<T, QEqF>) {
                with_bound({n.v}, n.dom);
                with_bound({n.u, n.w}, n.eq);
                with_bound({n.x, n.y}, n.edge);
            } else if constexpr (std::is_same_v<T, QTuF>) {
                with_bound(n.vbar, n.dom);
                std::vector<Var> uw = n.ubar;
                uw.insert(uw.end(), n.wbar.begin(), n.wbar.end());
                with_bound(uw, n.eq);
                std::vector<Var> xy = n.xbar;
                xy.insert(xy.end(), n.ybar.begin(), n.ybar.end());
                with_bound(xy, n.edge);
            }
        },
        f->node());
}

bool has_duplicates(const std::vector<Var>& vars) {
    std::set<Var> seen;
    for (const Var& v : vars)
        if (!seen.insert(v).second) return true;
    return false;
}

void check_node(const FormulaRef& f, std::vector<Diagnostic>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            auto binder_check = [&](const std::vector<Var>& vars) {
                if (has_duplicates(vars))
                    out.push_back({"duplicate-binder", "duplicate variable in binder list"});
            };
            auto qname_check = [&](const QuantName& q) {
                if (q.kind == QuantName::Kind::Chr && q.chr_k < 1)
                    out.push_back({"bad-quant-name", "chr quantifier needs k >= 1"});
            };
            if constexpr (std::is_same_v<T, NotF>) {
                check_node(n.f, out);
            } else if constexpr (std::is_same_v<T, AndF> || std::is_same_v<T, OrF>) {
                for (const auto& s : n.fs) check_node(s, out);
            } else if constexpr (std::is_same_v<T, ImpliesF>) {
                check_node(n.a, out);
                check_node(n.b, out);
            } else if constexpr (std::is_same_v<T, ExistsF> || std::is_same_v<T, ForallF>) {
                binder_check(n.vars);
                if (n.vars.empty()) out.push_back({"empty-binder", "quantifier binds no variables"});
                check_node(n.body, out);
            } else if constexpr (std::is_same_v<T, QWeakF>) {
                qname_check(n.q);
                binder_check({n.x, n.y});
                check_node(n.edge, out);
            } else if constexpr (std::is_same_v<T, QRelF>) {
                qname_check(n.q);
                binder_check({n.x, n.y});
                check_node(n.dom, out);
                check_node(n.edge, out);
            } else if constexpr (std::is_same_v<T, QEqF>) {
                qname_check(n.q);
                binder_check({n.u, n.w});
                binder_check({n.x, n.y});
                check_node(n.dom, out);
                check_node(n.eq, out);
                check_node(n.edge, out);
            } else if constexpr (std::is_same_v<T, QTuF>) {
                qname_check(n.q);
                const std::size_t l = static_cast<std::size_t>(n.len);
                if (n.len < 1) out.push_back({"length-mismatch", "tuple length must be >= 1"});
                if (n.vbar.size() != l || n.ubar.size() != l || n.wbar.size() != l ||
                    n.xbar.size() != l || n.ybar.size() != l)
                    out.push_back({"length-mismatch", "tuple variable lists must all have length l"});
                binder_check(n.vbar);
                std::vector<Var> uw = n.ubar;
                uw.insert(uw.end(), n.wbar.begin(), n.wbar.end());
                binder_check(uw);
                std::vector<Var> xy = n.xbar;
                xy.insert(xy.end(), n.ybar.begin(), n.ybar.end());
                binder_check(xy);
                check_node(n.dom, out);
                check_node(n.eq, out);
                check_node(n.edge, out);
            }
        },
        f->node());
}

} // namespace

std::set<Var> free_vars(const FormulaRef& f) {
    std::set<Var> bound, out;
    collect_free(f, bound, out);
    return out;
}

std::vector<Diagnostic> check_wellformed(const FormulaRef& f) {
    std::vector<Diagnostic> out;
    check_node(f, out);
    return out;
}

namespace {

bool contains_var(const std::vector<Var>& vars, const Var& v) {
    return std::find(vars.begin(), vars.end(), v) != vars.end();
}

} // namespace

FormulaRef substitute_var(const FormulaRef& f, const Var& from, const Var& to) {
    using namespace fml;
    auto sub = [&](const FormulaRef& s) { return substitute_var(s, from, to); };
    auto subst_leaf = [&](const Var& v) { return v == from ? to : v; };
    return std::visit(
        [&](const auto& n) -> FormulaRef {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, TrueF>) {
                return f;
            } else if constexpr (std::is_same_v<T, EqualF>) {
                return equal(subst_leaf(n.a), subst_leaf(n.b));
            } else if constexpr (std::is_same_v<T, AdjF>) {
                return adj(subst_leaf(n.a), subst_leaf(n.b));
            } else if constexpr (std::is_same_v<T, NotF>) {
                return nott(sub(n.f));
            } else if constexpr (std::is_same_v<T, AndF>) {
                std::vector<FormulaRef> fs;
                for (const auto& s : n.fs) fs.push_back(sub(s));
                return conj(std::move(fs));
            } else if constexpr (std::is_same_v<T, OrF>) {
                std::vector<FormulaRef> fs;
                for (const auto& s : n.fs) fs.push_back(sub(s));
                return disj(std::move(fs));
            } else if constexpr (std::is_same_v<T, ImpliesF>) {
                return implies(sub(n.a), sub(n.b));
            } else if constexpr (std::is_same_v<T, ExistsF>) {
                return contains_var(n.vars, from) ? f : exists(n.vars, sub(n.body));
            } else if constexpr (std::is_same_v<T, ForallF>) {
                return contains_var(n.vars, from) ? f : forall(n.vars, sub(n.body));
            } else if constexpr (std::is_same_v<T, QWeakF>) {
                if (n.x == from || n.y == from) return f;
                return qweak(n.q, n.x, n.y, sub(n.edge));
            } else if constexpr (std::is_same_v<T, QRelF>) {
                FormulaRef dom = (n.v == from) ? n.dom : sub(n.dom);
                FormulaRef edge = (n.x == from || n.y == from) ? n.edge : sub(n.edge);
                return qrel(n.q, n.v, dom, n.x, n.y, edge);
            } else if constexpr (std::is_same_v<T, QEqF>) {
                FormulaRef dom = (n.v == from) ? n.dom : sub(n.dom);
                FormulaRef eq = (n.u == from || n.w == from) ? n.eq : sub(n.eq);
                FormulaRef edge = (n.x == from || n.y == from) ? n.edge : sub(n.edge);
                return qeq(n.q, n.v, dom, n.u, n.w, eq, n.x, n.y, edge);
            } else if constexpr (std::is_same_v<T, QTuF>) {
                FormulaRef dom = contains_var(n.vbar, from) ? n.dom : sub(n.dom);
                bool eq_bound = contains_var(n.ubar, from) || contains_var(n.wbar, from);
                FormulaRef eq = eq_bound ? n.eq : sub(n.eq);
                bool edge_bound = contains_var(n.xbar, from) || contains_var(n.ybar, from);
                FormulaRef edge = edge_bound ? n.edge : sub(n.edge);
                return qtu(n.q, n.len, n.vbar, dom, n.ubar, n.wbar, eq, n.xbar, n.ybar, edge);
            }
        },
        f->node());
}

namespace {

void collect_names(const FormulaRef& f, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            auto add = [&](const Var& v) { out.insert(v.name); };
            auto add_all = [&](const std::vector<Var>& vs) { for (const auto& v : vs) out.insert(v.name); };
            if constexpr (std::is_same_v<T, EqualF> || std::is_same_v<T, AdjF>) {
                add(n.a);
                add(n.b);
            } else if constexpr (std::is_same_v<T, NotF>) {
                collect_names(n.f, out);
            } else if constexpr (std::is_same_v<T, AndF> || std::is_same_v<T, OrF>) {
                for (const auto& s : n.fs) collect_names(s, out);
            } else if constexpr (std::is_same_v<T, ImpliesF>) {
                collect_names(n.a, out);
                collect_names(n.b, out);
            } else if constexpr (std::is_same_v<T, ExistsF> || std::is_same_v<T, ForallF>) {
                add_all(n.vars);
                collect_names(n.body, out);
            } else if constexpr (std::is_same_v<T, QWeakF>) {
                add(n.x); add(n.y);
                collect_names(n.edge, out);
            } else if constexpr (std::is_same_v<T, QRelF>) {
                add(n.v); add(n.x); add(n.y);
                collect_names(n.dom, out);
                collect_names(n.edge, out);
            } else if constexpr (std::is_same_v<T, QEqF>) {
                add(n.v); add(n.u); add(n.w); add(n.x); add(n.y);
                collect_names(n.dom, out);
                collect_names(n.eq, out);
                collect_names(n.edge, out);
            } else if constexpr (std::is_same_v<T, QTuF>) {
                add_all(n.vbar); add_all(n.ubar); add_all(n.wbar); add_all(n.xbar); add_all(n.ybar);
                collect_names(n.dom, out);
                collect_names(n.eq, out);
                collect_names(n.edge, out);
            }
        },
        f->node());
}

} // namespace

std::set<std::string> all_var_names(const FormulaRef& f) {
    std::set<std::string> out;
    collect_names(f, out);
    return out;
}

Var FreshNames::fresh(const std::string& base) {
    while (true) {
        std::string name = base + std::to_string(counter_++);
        if (used_.insert(name).second) return Var(name);
    }
}

} // namespace zolaw
