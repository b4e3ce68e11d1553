#include "zolaw/ham_arith.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace zolaw {

Bitset realize(const Graph& g, const SetDef& def, const EvalLimits& limits) {
    return definable_set(g, def.formula, def.element, def.params, limits);
}

namespace {

std::set<std::string> names_of(const SetDef& def) {
    std::set<std::string> out = all_var_names(def.formula);
    out.insert(def.element.name);
    for (const auto& [k, v] : def.params) out.insert(k);
    return out;
}

} // namespace

FormulaRef build_preceq(const SetDef& a, const SetDef& b) {
    namespace F = fml;
    std::set<std::string> used = names_of(a);
    std::set<std::string> more = names_of(b);
    used.insert(more.begin(), more.end());
    FreshNames fresh(used);
    Var x = fresh.fresh("px");
    Var y = fresh.fresh("py");
    auto in_a = [&](const Var& t) { return substitute_var(a.formula, a.element, t); };
    auto in_b = [&](const Var& t) { return substitute_var(b.formula, b.element, t); };
    auto in_amb = [&](const Var& t) { return F::conj({in_a(t), F::nott(in_b(t))}); }; // A \ B
    auto in_bma = [&](const Var& t) { return F::conj({in_b(t), F::nott(in_a(t))}); }; // B \ A
    FormulaRef psi = F::conj({F::nott(F::equal(x, y)),
                              F::disj({F::conj({in_amb(x), in_bma(y)}),
                                       F::conj({in_amb(y), in_bma(x)}),
                                       F::conj({F::nott(in_amb(x)), F::nott(in_amb(y))})})});
    return F::qweak(QuantName::ham(), x, y, psi);
}

FormulaRef build_degree_class_formula(const Var& x, const Var& v) {
    namespace F = fml;
    FreshNames fresh({x.name, v.name});
    Var z1 = fresh.fresh("z");
    Var z2 = fresh.fresh("z");
    SetDef nx{F::adj(z1, x), z1, {}};
    SetDef nv{F::adj(z2, v), z2, {}};
    // d(x) = d(v) iff the two comparisons agree; the plain conjunction fails
    // on equal-size sets whose symmetric difference leaves outside vertices.
    return F::iff(build_preceq(nx, nv), build_preceq(nv, nx));
}

namespace {

std::vector<int> mask_to_vertices(unsigned mask, const std::vector<int>& base) {
    std::vector<int> out;
    for (std::size_t i = 0; i < base.size(); ++i)
        if ((mask >> i) & 1u) out.push_back(base[i]);
    return out;
}

} // namespace

ReprCertificate check_powerset_repr(const Graph& g, const std::vector<int>& s,
                                    bool exclude_s, int cap) {
    if (static_cast<int>(s.size()) > cap) throw CapExceeded("check_powerset_repr: |S| exceeds cap");
    ReprCertificate cert;
    cert.kind = ReprCertificate::Kind::PowersetRepr;
    cert.s = s;
    Bitset s_bits(static_cast<std::size_t>(g.n()));
    for (int v : s) s_bits.set(static_cast<std::size_t>(v));
    std::vector<char> realized(1u << s.size(), 0);
    for (int v = 0; v < g.n(); ++v) {
        if (exclude_s && s_bits.test(static_cast<std::size_t>(v))) continue;
        unsigned mask = 0;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (g.adjacent(v, s[i])) mask |= (1u << i);
        realized[mask] = 1;
    }
    for (unsigned mask = 0; mask < realized.size(); ++mask)
        if (!realized[mask]) cert.missing.push_back(mask_to_vertices(mask, s));
    return cert;
}

ReprCertificate check_double_powerset_repr(const Graph& g, const SetDef& phi0,
                                           const SetDef& phi1, int cap,
                                           const EvalLimits& limits) {
    Bitset s_bits = realize(g, phi0, limits);
    std::vector<int> s = s_bits.to_vector();
    if (static_cast<int>(s.size()) > cap) throw CapExceeded("check_double_powerset_repr: |S| exceeds cap");

    ReprCertificate cert;
    cert.kind = ReprCertificate::Kind::DoublePowersetRepr;
    cert.s = s;

    // (i) powerset representation of S by witnesses from all of V
    std::vector<char> realized_s(1u << s.size(), 0);
    for (int v = 0; v < g.n(); ++v) {
        unsigned mask = 0;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (g.adjacent(v, s[i])) mask |= (1u << i);
        realized_s[mask] = 1;
    }
    for (unsigned mask = 0; mask < realized_s.size(); ++mask)
        if (!realized_s[mask]) cert.missing.push_back(mask_to_vertices(mask, s));

    // (ii) B = {x in S | phi1(x)} nonempty
    Bitset b_bits = realize(g, phi1, limits);
    b_bits &= s_bits;
    std::vector<int> b = b_bits.to_vector();
    cert.b = b;
    cert.f_value = static_cast<int>(b.size());
    cert.b_nonempty = !b.empty();

    // (iii) every subset of B occurs as the full S-neighborhood of some v in S
    std::vector<char> realized_b(1u << b.size(), 0);
    for (int v : s) {
        Bitset nb = g.neighbors(v) & s_bits;
        if (!nb.is_subset_of(b_bits)) continue;
        unsigned mask = 0;
        for (std::size_t i = 0; i < b.size(); ++i)
            if (g.adjacent(v, b[i])) mask |= (1u << i);
        realized_b[mask] = 1;
    }
    for (unsigned mask = 0; mask < realized_b.size(); ++mask)
        if (!realized_b[mask]) cert.missing.push_back(mask_to_vertices(mask, b));
    return cert;
}

Testbed build_testbed(int b) {
    if (b < 1 || b > 3) throw std::invalid_argument("build_testbed: b must be in 1..3");
    const int p_count = 1 << b;
    const int s_count = b + p_count;
    const int w_count = 1 << s_count;
    const int n = s_count + w_count + 2;
    Graph g(n);
    Testbed t;
    // ids: base 0..b-1, then P, then W, then the two markers
    for (int i = 0; i < b; ++i) t.base.push_back(i);
    for (int i = 0; i < s_count; ++i) t.s_set.push_back(i);
    const int p_off = b;
    const int w_off = s_count;
    t.m_s = n - 2;
    t.m_b = n - 1;
    for (int mask = 0; mask < p_count; ++mask)
        for (int i = 0; i < b; ++i)
            if ((mask >> i) & 1) g.add_edge(p_off + mask, i);
    for (int mask = 0; mask < w_count; ++mask)
        for (int i = 0; i < s_count; ++i)
            if ((mask >> i) & 1) g.add_edge(w_off + mask, i);
    for (int i = 0; i < s_count; ++i) g.add_edge(t.m_s, i);
    for (int i = 0; i < b; ++i) g.add_edge(t.m_b, i);
    t.graph = std::move(g);
    return t;
}

SetDef testbed_phi0(const Testbed& t) {
    return SetDef{fml::adj(Var("x"), Var("mS")), Var("x"), {{"mS", t.m_s}}};
}

SetDef testbed_phi1(const Testbed& t) {
    return SetDef{fml::adj(Var("x"), Var("mB")), Var("x"), {{"mB", t.m_b}}};
}

// ---------------------------------------------------------------------------
// Arith / LogStar
// ---------------------------------------------------------------------------

namespace {

namespace S = sof;

struct ArithVocab {
    Var lt{"Lt"}, add{"Add"}, mul{"Mul"}, pw{"Pow"}, tw{"Tow"}, md{"Mod"};
    std::vector<Var> consts; // x0..xr

    explicit ArithVocab(int r) {
        for (int i = 0; i <= r; ++i) consts.emplace_back("x" + std::to_string(i));
    }

    SORef lt_of(Var a, Var b) const { return S::rel(lt, {std::move(a), std::move(b)}); }

    // a's immediate successor is b
    SORef succ(const Var& a, const Var& b, FreshNames& fresh) const {
        Var z = fresh.fresh("z");
        return S::conj({lt_of(a, b), S::nott(S::exists({z}, S::conj({lt_of(a, z), lt_of(z, b)})))});
    }

    // chain of j successor steps from a to b
    SORef succ_chain(const Var& a, const Var& b, int j, FreshNames& fresh) const {
        if (j == 1) return succ(a, b, fresh);
        std::vector<Var> mids;
        for (int i = 0; i < j - 1; ++i) mids.push_back(fresh.fresh("z"));
        std::vector<SORef> steps;
        steps.push_back(succ(a, mids[0], fresh));
        for (int i = 1; i < j - 1; ++i)
            steps.push_back(succ(mids[static_cast<std::size_t>(i - 1)], mids[static_cast<std::size_t>(i)], fresh));
        steps.push_back(succ(mids.back(), b, fresh));
        return S::exists(mids, S::conj(std::move(steps)));
    }
};

std::vector<SORef> order_axioms(const ArithVocab& v) {
    Var a("u"), b("w"), c("t");
    return {
        S::forall({a}, S::nott(v.lt_of(a, a))),
        S::forall({a, b}, S::implies(S::nott(S::equal(a, b)), S::disj({v.lt_of(a, b), v.lt_of(b, a)}))),
        S::forall({a, b}, S::implies(v.lt_of(a, b), S::nott(v.lt_of(b, a)))),
        S::forall({a, b, c}, S::implies(S::conj({v.lt_of(a, b), v.lt_of(b, c)}), v.lt_of(a, c))),
    };
}

std::vector<SORef> const_axioms(const ArithVocab& v, FreshNames& fresh) {
    Var z("u");
    std::vector<SORef> out;
    out.push_back(S::forall({z}, S::nott(v.lt_of(z, v.consts[0]))));
    for (std::size_t i = 1; i < v.consts.size(); ++i)
        out.push_back(v.succ(v.consts[i - 1], v.consts[i], fresh));
    return out;
}

std::vector<SORef> add_axioms(const ArithVocab& v, FreshNames& fresh) {
    Var u("u"), w("w"), w2("w2"), t("t"), t2("t2");
    return {
        S::forall({u, w}, S::iff(S::rel(v.add, {u, v.consts[0], w}), S::equal(u, w))),
        S::forall({u, w, w2, t2},
                  S::implies(v.succ(w, w2, fresh),
                             S::iff(S::rel(v.add, {u, w2, t2}),
                                    S::exists({t}, S::conj({v.succ(t, t2, fresh), S::rel(v.add, {u, w, t})}))))),
    };
}

std::vector<SORef> mul_axioms(const ArithVocab& v, FreshNames& fresh) {
    Var u("u"), w("w"), w2("w2"), t("t"), t2("t2");
    return {
        S::forall({u, w}, S::iff(S::rel(v.mul, {u, v.consts[0], w}), S::equal(w, v.consts[0]))),
        S::forall({u, w, w2, t2},
                  S::implies(v.succ(w, w2, fresh),
                             S::iff(S::rel(v.mul, {u, w2, t2}),
                                    S::exists({t}, S::conj({S::rel(v.mul, {u, w, t}), S::rel(v.add, {t, u, t2})}))))),
    };
}

std::vector<SORef> pow_axioms(const ArithVocab& v, FreshNames& fresh) {
    Var u("u"), u2("u2"), w("w"), w2("w2");
    return {
        S::forall({w}, S::iff(S::rel(v.pw, {v.consts[0], w}), S::equal(w, v.consts[1]))),
        S::forall({u, u2, w2},
                  S::implies(v.succ(u, u2, fresh),
                             S::iff(S::rel(v.pw, {u2, w2}),
                                    S::exists({w}, S::conj({S::rel(v.pw, {u, w}), S::rel(v.add, {w, w, w2})}))))),
    };
}

std::vector<SORef> tow_axioms(const ArithVocab& v, FreshNames& fresh) {
    Var u("u"), u2("u2"), w("w"), w2("w2");
    return {
        S::forall({w}, S::iff(S::rel(v.tw, {v.consts[0], w}), S::equal(w, v.consts[1]))),
        S::forall({u, u2, w2},
                  S::implies(v.succ(u, u2, fresh),
                             S::iff(S::rel(v.tw, {u2, w2}),
                                    S::exists({w}, S::conj({S::rel(v.tw, {u, w}), S::rel(v.pw, {w, w2})}))))),
    };
}

std::vector<SORef> mod_axioms(const ArithVocab& v, int q, FreshNames& fresh) {
    Var u("u"), w("w"), t("t");
    std::vector<SORef> out;
    out.push_back(S::forall({u}, S::rel(v.md, {u, u})));
    out.push_back(S::forall({u, w}, S::implies(S::rel(v.md, {u, w}), S::rel(v.md, {w, u}))));
    for (int j = 1; j < q; ++j)
        out.push_back(S::forall({u, w}, S::implies(v.succ_chain(u, w, j, fresh), S::nott(S::rel(v.md, {u, w})))));
    out.push_back(S::forall({u, w, t},
                            S::implies(v.succ_chain(u, w, q, fresh),
                                       S::iff(S::rel(v.md, {t, u}), S::rel(v.md, {t, w})))));
    return out;
}

SORef arith_core(const ArithConfig& cfg, SORef tail) {
    if (cfg.r < 1) throw std::invalid_argument("build_arith: r must be >= 1");
    if (cfg.q < 1) throw std::invalid_argument("build_arith: q must be >= 1");
    ArithVocab v(cfg.r);
    FreshNames fresh({"u", "w", "t", "u2", "w2", "t2"});
    for (const Var& c : v.consts) fresh.reserve({c.name});

    auto block = [](std::vector<SORef> axioms, SORef rest) {
        axioms.push_back(std::move(rest));
        return S::conj(std::move(axioms));
    };

    SORef body = block(mod_axioms(v, cfg.q, fresh), std::move(tail));
    body = S::exists_rel(v.md, 2, body);
    body = S::exists_rel(v.tw, 2, block(tow_axioms(v, fresh), body));
    body = S::exists_rel(v.pw, 2, block(pow_axioms(v, fresh), body));
    body = S::exists_rel(v.mul, 3, block(mul_axioms(v, fresh), body));
    body = S::exists_rel(v.add, 3, block(add_axioms(v, fresh), body));
    // the constant axioms sit inside every x_i scope
    body = block(const_axioms(v, fresh), body);
    for (auto it = v.consts.rbegin(); it != v.consts.rend(); ++it) body = S::exists({*it}, body);
    return S::exists_rel(v.lt, 2, block(order_axioms(v), body));
}

} // namespace

SORef build_arith(const ArithConfig& cfg) { return arith_core(cfg, S::tru()); }

SORef build_logstar(const ArithConfig& cfg) {
    if (cfg.threshold < 1 || cfg.threshold > cfg.q)
        throw std::invalid_argument("build_logstar: need 1 <= threshold <= q");
    if (cfg.threshold > cfg.r + 1)
        throw std::invalid_argument("build_logstar: threshold-1 exceeds the named constants");
    ArithVocab v(cfg.r);
    Var x("lx"), y("ly"), z("lz"), y2("ly2");
    std::vector<SORef> mods;
    for (int j = 0; j < cfg.threshold; ++j)
        mods.push_back(S::rel(v.md, {x, v.consts[static_cast<std::size_t>(j)]}));
    SORef matrix = S::exists(
        {x}, S::conj({S::exists({y}, S::rel(v.tw, {x, y})),
                      S::forall({z}, S::implies(v.lt_of(x, z), S::nott(S::exists({y2}, S::rel(v.tw, {z, y2}))))),
                      mods.size() == 1 ? mods[0] : S::disj(std::move(mods))}));
    return arith_core(cfg, matrix);
}

// ---------------------------------------------------------------------------
// Second-order encoder
// ---------------------------------------------------------------------------

namespace {

namespace F = fml;

// Equality pattern (restricted growth string) and rank permutation of the
// distinct values for one k-tuple shape. The k!-collection idea extends to
// tuples with repeated entries by splitting on the equality pattern first;
// each (pattern, ranking) class is in bijection with d-subsets of B.
struct TupleShape {
    std::vector<int> cls;  // cls[i] in 0..d-1, first-occurrence order
    std::vector<int> rank; // rank[c] = order rank of class c's value, 0-based
    int d = 0;
};

void enumerate_shapes_rec(std::vector<int>& cls, int pos, int k, int used, std::vector<TupleShape>& out) {
    if (pos == k) {
        std::vector<int> perm(static_cast<std::size_t>(used));
        for (int i = 0; i < used; ++i) perm[static_cast<std::size_t>(i)] = i;
        do {
            TupleShape shape;
            shape.cls = cls;
            shape.rank = perm;
            shape.d = used;
            out.push_back(shape);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return;
    }
    for (int c = 0; c <= used; ++c) {
        cls[static_cast<std::size_t>(pos)] = c;
        enumerate_shapes_rec(cls, pos + 1, k, std::max(used, c + 1), out);
    }
}

std::vector<TupleShape> enumerate_shapes(int k) {
    std::vector<int> cls(static_cast<std::size_t>(k), 0);
    std::vector<TupleShape> out;
    enumerate_shapes_rec(cls, 0, k, 0, out);
    return out;
}

struct Encoder {
    const EncoderContext& ctx;
    FreshNames fresh;
    bool has_order = false;
    Var v_order;

    std::map<std::string, std::vector<Var>> elements; // SO element var -> stack of graph vars
    std::map<std::string, std::vector<Var>> sets;     // monadic/arity-1 -> stack of witness vars
    struct RelBinding {
        int arity = 2;
        std::vector<Var> witnesses; // arity 2: [le-branch, gt-branch]; else per shape
        std::vector<TupleShape> shapes;
    };
    std::map<std::string, std::vector<RelBinding>> rels;

    explicit Encoder(const EncoderContext& c) : ctx(c), fresh(collect_used(c)) {}

    static std::set<std::string> collect_used(const EncoderContext& c) {
        std::set<std::string> used = names_of(c.phi0);
        std::set<std::string> more = names_of(c.phi1);
        used.insert(more.begin(), more.end());
        return used;
    }

    FormulaRef in_s(const Var& t) { return substitute_var(ctx.phi0.formula, ctx.phi0.element, t); }
    FormulaRef in_b(const Var& t) {
        return F::conj({in_s(t), substitute_var(ctx.phi1.formula, ctx.phi1.element, t)});
    }

    // x <= y in the order induced by v_order: every chain vertex adjacent to y
    // is adjacent to x.
    FormulaRef le(const Var& x, const Var& y) {
        Var s = fresh.fresh("s");
        return F::forall({s}, F::implies(F::conj({in_s(s), F::adj(s, v_order), F::adj(s, y)}), F::adj(s, x)));
    }

    FormulaRef lt(const Var& x, const Var& y) { return F::conj({le(x, y), F::nott(F::equal(x, y))}); }

    // N(s, B) equals exactly the set of values of `ts`.
    FormulaRef nbhd_is(const Var& s, const std::vector<Var>& ts) {
        Var z = fresh.fresh("z");
        std::vector<FormulaRef> eqs;
        for (const Var& t : ts) eqs.push_back(F::equal(z, t));
        return F::forall({z}, F::implies(in_b(z), F::iff(F::adj(z, s), eqs.size() == 1 ? eqs[0] : F::disj(std::move(eqs)))));
    }

    // exists s in S with N(s,B) = ts and s ~ witness
    FormulaRef witness_read(const Var& witness, const std::vector<Var>& ts) {
        Var s = fresh.fresh("s");
        return F::exists({s}, F::conj({in_s(s), nbhd_is(s, ts), F::adj(s, witness)}));
    }

    // Order(v): the B-neighborhoods of v's neighbors in S form a strict
    // inclusion chain, and every b in B separates two of them.
    FormulaRef order_formula(const Var& v) {
        Var s = fresh.fresh("s");
        Var t = fresh.fresh("t");
        auto subset = [&](const Var& a, const Var& b) {
            Var z = fresh.fresh("z");
            return F::forall({z}, F::implies(F::conj({in_b(z), F::adj(z, a)}), F::adj(z, b)));
        };
        auto strict_subset = [&](const Var& a, const Var& b) {
            Var zw = fresh.fresh("z");
            return F::conj({subset(a, b), F::exists({zw}, F::conj({in_b(zw), F::adj(zw, b), F::nott(F::adj(zw, a))}))});
        };
        FormulaRef chain = F::forall(
            {s, t}, F::implies(F::conj({in_s(s), in_s(t), F::adj(s, v), F::adj(t, v), F::nott(F::equal(s, t))}),
                               F::disj({strict_subset(s, t), strict_subset(t, s)})));
        Var b = fresh.fresh("b");
        Var s2 = fresh.fresh("s");
        Var t2 = fresh.fresh("t");
        Var z2 = fresh.fresh("z");
        // N(t2,B) symdiff N(s2,B) = {b}
        FormulaRef symdiff = F::forall(
            {z2}, F::implies(in_b(z2),
                             F::iff(F::disj({F::conj({F::adj(z2, s2), F::nott(F::adj(z2, t2))}),
                                             F::conj({F::adj(z2, t2), F::nott(F::adj(z2, s2))})}),
                                    F::equal(z2, b))));
        FormulaRef separated = F::forall(
            {b}, F::implies(in_b(b),
                            F::exists({s2}, F::conj({in_s(s2), F::adj(s2, v),
                                                     F::exists({t2}, F::conj({in_s(t2), F::adj(t2, v), symdiff}))}))));
        return F::conj({chain, separated});
    }

    const Var& element(const Var& so_var) {
        auto it = elements.find(so_var.name);
        if (it == elements.end() || it->second.empty())
            throw EvalError("encode_so: unbound element variable '" + so_var.name + "'");
        return it->second.back();
    }

    FormulaRef encode(const SORef& f) {
        return std::visit(
            [&](const auto& n) -> FormulaRef {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, SOTrue>) {
                    return F::tru();
                } else if constexpr (std::is_same_v<T, SOEqual>) {
                    return F::equal(element(n.a), element(n.b));
                } else if constexpr (std::is_same_v<T, SOMember>) {
                    auto it = sets.find(n.set.name);
                    if (it == sets.end() || it->second.empty())
                        throw EvalError("encode_so: unbound set variable '" + n.set.name + "'");
                    return F::adj(element(n.x), it->second.back());
                } else if constexpr (std::is_same_v<T, SORel>) {
                    return encode_rel(n);
                } else if constexpr (std::is_same_v<T, SONot>) {
                    return F::nott(encode(n.f));
                } else if constexpr (std::is_same_v<T, SOAnd>) {
                    std::vector<FormulaRef> fs;
                    for (const auto& s : n.fs) fs.push_back(encode(s));
                    return F::conj(std::move(fs));
                } else if constexpr (std::is_same_v<T, SOOr>) {
                    std::vector<FormulaRef> fs;
                    for (const auto& s : n.fs) fs.push_back(encode(s));
                    return F::disj(std::move(fs));
                } else if constexpr (std::is_same_v<T, SOImplies>) {
                    FormulaRef a = encode(n.a);
                    return F::implies(a, encode(n.b));
                } else if constexpr (std::is_same_v<T, SOExists> || std::is_same_v<T, SOForall>) {
                    constexpr bool universal = std::is_same_v<T, SOForall>;
                    std::vector<Var> bound;
                    std::vector<FormulaRef> guards;
                    for (const Var& v : n.vars) {
                        Var gv = fresh.fresh("e");
                        elements[v.name].push_back(gv);
                        bound.push_back(gv);
                        guards.push_back(in_b(gv));
                    }
                    FormulaRef body = encode(n.body);
                    for (const Var& v : n.vars) elements[v.name].pop_back();
                    FormulaRef guard = guards.size() == 1 ? guards[0] : F::conj(std::move(guards));
                    if (universal) return F::forall(std::move(bound), F::implies(guard, body));
                    return F::exists(std::move(bound), F::conj({guard, body}));
                } else if constexpr (std::is_same_v<T, SOExistsSet>) {
                    Var w = fresh.fresh("vA");
                    sets[n.set.name].push_back(w);
                    FormulaRef body = encode(n.body);
                    sets[n.set.name].pop_back();
                    return F::exists({w}, F::conj({in_s(w), body}));
                } else {
                    return encode_exists_rel(*f->as<SOExistsRel>());
                }
            },
            f->node());
    }

    FormulaRef encode_exists_rel(const SOExistsRel& n) {
        if (n.arity > ctx.arity_cap)
            throw CapExceeded("encode_so: relation arity exceeds cap");
        if (n.arity == 1) {
            Var w = fresh.fresh("vA");
            sets[n.rel.name].push_back(w);
            FormulaRef body = encode(n.body);
            sets[n.rel.name].pop_back();
            return F::exists({w}, F::conj({in_s(w), body}));
        }
        RelBinding binding;
        binding.arity = n.arity;
        if (n.arity == 2) {
            binding.witnesses.push_back(fresh.fresh("w"));
            binding.witnesses.push_back(fresh.fresh("w"));
        } else {
            binding.shapes = enumerate_shapes(n.arity);
            for (std::size_t i = 0; i < binding.shapes.size(); ++i)
                binding.witnesses.push_back(fresh.fresh("w"));
        }
        rels[n.rel.name].push_back(binding);
        FormulaRef body = encode(n.body);
        rels[n.rel.name].pop_back();
        for (auto it = binding.witnesses.rbegin(); it != binding.witnesses.rend(); ++it)
            body = F::exists({*it}, body);
        return body;
    }

    FormulaRef encode_rel(const SORel& n) {
        // arity-1 relations live in the set map
        if (n.args.size() == 1) {
            auto set_it = sets.find(n.rel.name);
            if (set_it != sets.end() && !set_it->second.empty())
                return F::adj(element(n.args[0]), set_it->second.back());
        }
        auto it = rels.find(n.rel.name);
        if (it == rels.end() || it->second.empty())
            throw EvalError("encode_so: unbound relation variable '" + n.rel.name + "'");
        const RelBinding& binding = it->second.back();
        if (static_cast<int>(n.args.size()) != binding.arity)
            throw EvalError("encode_so: arity mismatch for '" + n.rel.name + "'");
        std::vector<Var> args;
        for (const Var& a : n.args) args.push_back(element(a));
        if (binding.arity == 2) {
            // pairs split by the order; the diagonal rides the le-branch
            const Var& x = args[0];
            const Var& y = args[1];
            return F::disj({F::conj({le(x, y), witness_read(binding.witnesses[0], {x, y})}),
                            F::conj({F::nott(le(x, y)), witness_read(binding.witnesses[1], {x, y})})});
        }
        std::vector<FormulaRef> branches;
        for (std::size_t si = 0; si < binding.shapes.size(); ++si) {
            const TupleShape& shape = binding.shapes[si];
            std::vector<FormulaRef> guard;
            std::vector<Var> reps(static_cast<std::size_t>(shape.d));
            std::vector<bool> seen(static_cast<std::size_t>(shape.d), false);
            for (std::size_t i = 0; i < args.size(); ++i) {
                int c = shape.cls[i];
                if (!seen[static_cast<std::size_t>(c)]) {
                    reps[static_cast<std::size_t>(c)] = args[i];
                    seen[static_cast<std::size_t>(c)] = true;
                    for (std::size_t j = 0; j < i; ++j)
                        guard.push_back(F::nott(F::equal(args[j], args[i])));
                } else {
                    guard.push_back(F::equal(reps[static_cast<std::size_t>(c)], args[i]));
                }
            }
            // rank guard: the class representatives in increasing order
            std::vector<int> by_rank(static_cast<std::size_t>(shape.d));
            for (int c = 0; c < shape.d; ++c)
                by_rank[static_cast<std::size_t>(shape.rank[static_cast<std::size_t>(c)])] = c;
            for (int rnk = 0; rnk + 1 < shape.d; ++rnk)
                guard.push_back(lt(reps[static_cast<std::size_t>(by_rank[static_cast<std::size_t>(rnk)])],
                                   reps[static_cast<std::size_t>(by_rank[static_cast<std::size_t>(rnk + 1)])]));
            guard.push_back(witness_read(binding.witnesses[si], reps));
            branches.push_back(F::conj(std::move(guard)));
        }
        return F::disj(std::move(branches));
    }

    static bool needs_order(const SORef& f) {
        bool found = false;
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, SONot>) {
                    found = needs_order(n.f);
                } else if constexpr (std::is_same_v<T, SOAnd> || std::is_same_v<T, SOOr>) {
                    for (const auto& s : n.fs)
                        if (needs_order(s)) { found = true; return; }
                } else if constexpr (std::is_same_v<T, SOImplies>) {
                    found = needs_order(n.a) || needs_order(n.b);
                } else if constexpr (std::is_same_v<T, SOExists> || std::is_same_v<T, SOForall>) {
                    found = needs_order(n.body);
                } else if constexpr (std::is_same_v<T, SOExistsSet>) {
                    found = needs_order(n.body);
                } else if constexpr (std::is_same_v<T, SOExistsRel>) {
                    found = n.arity >= 2 || needs_order(n.body);
                }
            },
            f->node());
        return found;
    }
};

} // namespace

FormulaRef encode_so(const SORef& phi, const EncoderContext& ctx) {
    Encoder enc(ctx);
    if (Encoder::needs_order(phi)) {
        enc.has_order = true;
        enc.v_order = enc.fresh.fresh("vo");
        FormulaRef core = enc.encode(phi);
        return F::exists({enc.v_order}, F::conj({enc.order_formula(enc.v_order), core}));
    }
    return enc.encode(phi);
}

// ---------------------------------------------------------------------------
// NonConv
// ---------------------------------------------------------------------------

FormulaRef build_nonconv(const ArithConfig& cfg) {
    Var v("v"), u("u"), x("x");
    EncoderContext ctx;
    ctx.phi0 = SetDef{build_degree_class_formula(x, v), x, {}};
    ctx.phi1 = SetDef{F::adj(Var("y1"), u), Var("y1"), {}};
    FormulaRef arith = encode_so(build_arith(cfg), ctx);
    FormulaRef logstar = encode_so(build_logstar(cfg), ctx);

    std::set<std::string> used = all_var_names(arith);
    std::set<std::string> more = all_var_names(logstar);
    used.insert(more.begin(), more.end());
    FreshNames fresh(used);
    Var v2 = fresh.fresh("vp");
    Var u2 = fresh.fresh("up");
    FormulaRef arith2 = substitute_var(substitute_var(arith, v, v2), u, u2);

    // z in N(u', D(v')) for the two pairs
    auto nb_in_dclass = [&](const Var& uu, const Var& vv) {
        Var e = fresh.fresh("nz");
        return SetDef{F::conj({F::adj(e, uu), build_degree_class_formula(e, vv)}), e, {}};
    };
    SetDef mine = nb_in_dclass(u, v);
    SetDef other = nb_in_dclass(u2, v2);
    FormulaRef strictly_bigger = F::conj({build_preceq(mine, other), F::nott(build_preceq(other, mine))});
    FormulaRef maximal = F::forall({v2, u2}, F::implies(arith2, F::nott(strictly_bigger)));
    return F::exists({v, u}, F::conj({arith, maximal, logstar}));
}

// ---------------------------------------------------------------------------
// Degree class statistics
// ---------------------------------------------------------------------------

DClassStats dclass_stats(const Graph& g, int m, double p) {
    if (g.n() <= 16) throw std::invalid_argument("dclass_stats: requires n >= 17");
    DClassStats out;
    out.m = m;
    double lln = std::log(std::log(static_cast<double>(g.n())));
    out.epsilon = std::log(lln) / std::sqrt(lln);
    Bitset dm = degree_class(g, m);
    std::vector<int> members = dm.to_vector();
    out.size = static_cast<int>(members.size());
    double deg_center = p * out.size;
    double deg_lo = (1.0 - out.epsilon) * deg_center;
    double deg_hi = (1.0 + out.epsilon) * deg_center;
    for (int v : members) {
        int d = static_cast<int>(g.neighbors(v).intersect_count(dm));
        ++out.deg_total;
        if (d >= deg_lo && d <= deg_hi) ++out.deg_in_tol;
    }
    double co_center = p * p * out.size;
    double co_lo = (1.0 - out.epsilon) * co_center;
    double co_hi = (1.0 + out.epsilon) * co_center;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            Bitset common = g.neighbors(members[i]) & g.neighbors(members[j]);
            int c = static_cast<int>(common.intersect_count(dm));
            ++out.codeg_total;
            if (c >= co_lo && c <= co_hi) ++out.codeg_in_tol;
        }
    return out;
}

} // namespace zolaw
