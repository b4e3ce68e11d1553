#pragma once

#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace zolaw {

// Variable over vertices. Names match [a-zA-Z][a-zA-Z0-9_]*.
struct Var {
    std::string name;

    Var() = default;
    Var(std::string n) : name(std::move(n)) {}
    Var(const char* n) : name(n) {}

    bool operator==(const Var& o) const { return name == o.name; }
    bool operator<(const Var& o) const { return name < o.name; }
};

bool valid_var_name(const std::string& name);

// Quantifier name: Conn, Ham, or Chr(k) with k a literal constant >= 1.
struct QuantName {
    enum class Kind { Conn, Ham, Chr };
    Kind kind = Kind::Conn;
    int chr_k = 0;

    static QuantName conn() { return {Kind::Conn, 0}; }
    static QuantName ham() { return {Kind::Ham, 0}; }
    static QuantName chr(int k) { return {Kind::Chr, k}; }

    bool operator==(const QuantName& o) const { return kind == o.kind && chr_k == o.chr_k; }
    std::string text() const;
};

class Formula;
using FormulaRef = std::shared_ptr<const Formula>;

struct TrueF {};
struct EqualF { Var a, b; };
struct AdjF { Var a, b; };
struct NotF { FormulaRef f; };
struct AndF { std::vector<FormulaRef> fs; };
struct OrF { std::vector<FormulaRef> fs; };
struct ImpliesF { FormulaRef a, b; };
struct ExistsF { std::vector<Var> vars; FormulaRef body; };
struct ForallF { std::vector<Var> vars; FormulaRef body; };
struct QWeakF { QuantName q; Var x, y; FormulaRef edge; };
struct QRelF { QuantName q; Var v; FormulaRef dom; Var x, y; FormulaRef edge; };
struct QEqF { QuantName q; Var v; FormulaRef dom; Var u, w; FormulaRef eq; Var x, y; FormulaRef edge; };
struct QTuF {
    QuantName q;
    int len = 1;
    std::vector<Var> vbar; FormulaRef dom;
    std::vector<Var> ubar, wbar; FormulaRef eq;
    std::vector<Var> xbar, ybar; FormulaRef edge;
};

class Formula {
public:
    using Node = std::variant<TrueF, EqualF, AdjF, NotF, AndF, OrF, ImpliesF,
                              ExistsF, ForallF, QWeakF, QRelF, QEqF, QTuF>;

    explicit Formula(Node n) : node_(std::move(n)) {}
    const Node& node() const { return node_; }

    template <typename T> const T* as() const { return std::get_if<T>(&node_); }
    template <typename T> bool is() const { return std::holds_alternative<T>(node_); }

private:
    Node node_;
};

// Construction helpers; all formulas are immutable and freely shared.
namespace fml {
FormulaRef tru();
FormulaRef equal(Var a, Var b);
FormulaRef adj(Var a, Var b);
FormulaRef nott(FormulaRef f);
FormulaRef conj(std::vector<FormulaRef> fs);
FormulaRef disj(std::vector<FormulaRef> fs);
FormulaRef implies(FormulaRef a, FormulaRef b);
FormulaRef iff(FormulaRef a, FormulaRef b); // spelled with and/implies
FormulaRef exists(std::vector<Var> vars, FormulaRef body);
FormulaRef forall(std::vector<Var> vars, FormulaRef body);
FormulaRef qweak(QuantName q, Var x, Var y, FormulaRef edge);
FormulaRef qrel(QuantName q, Var v, FormulaRef dom, Var x, Var y, FormulaRef edge);
FormulaRef qeq(QuantName q, Var v, FormulaRef dom, Var u, Var w, FormulaRef eq,
               Var x, Var y, FormulaRef edge);
FormulaRef qtu(QuantName q, int len, std::vector<Var> vbar, FormulaRef dom,
               std::vector<Var> ubar, std::vector<Var> wbar, FormulaRef eq,
               std::vector<Var> xbar, std::vector<Var> ybar, FormulaRef edge);
} // namespace fml

bool structurally_equal(const FormulaRef& a, const FormulaRef& b);

std::set<Var> free_vars(const FormulaRef& f);

struct Diagnostic {
    std::string code;    // "duplicate-binder" | "length-mismatch" | "bad-quant-name"
    std::string message;
};

// Static well-formedness checks; diagnostics are returned, never thrown.
std::vector<Diagnostic> check_wellformed(const FormulaRef& f);

// Rename free occurrences of `from` to `to`. `to` must not collide with any
// binder in scope of a renamed occurrence; the builders only call this with
// fresh names.
FormulaRef substitute_var(const FormulaRef& f, const Var& from, const Var& to);

// All variable names appearing anywhere in f (free or bound).
std::set<std::string> all_var_names(const FormulaRef& f);

// Fresh-name supply: yields base0, base1, ... skipping a used set.
class FreshNames {
public:
    explicit FreshNames(std::set<std::string> used = {}) : used_(std::move(used)) {}
    void reserve(const std::set<std::string>& more) { used_.insert(more.begin(), more.end()); }
    Var fresh(const std::string& base);

private:
    std::set<std::string> used_;
    int counter_ = 0;
};

} // namespace zolaw
