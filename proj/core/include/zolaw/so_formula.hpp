#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "zolaw/formula.hpp"

namespace zolaw {

// Second-order formulas over an abstract finite universe (sets only, no
// adjacency atom). Element variables and relation variables share the Var
// namespace but are distinguished structurally. Relation variables have a
// fixed declared arity (monadic sets are introduced by ExistsSet).
class SOFormula;
using SORef = std::shared_ptr<const SOFormula>;

struct SOTrue {};
struct SOEqual { Var a, b; };
struct SOMember { Var x; Var set; };
struct SORel { Var rel; std::vector<Var> args; };
struct SONot { SORef f; };
struct SOAnd { std::vector<SORef> fs; };
struct SOOr { std::vector<SORef> fs; };
struct SOImplies { SORef a, b; };
struct SOExists { std::vector<Var> vars; SORef body; };
struct SOForall { std::vector<Var> vars; SORef body; };
struct SOExistsSet { Var set; SORef body; };
struct SOExistsRel { Var rel; int arity; SORef body; };

class SOFormula {
public:
    using Node = std::variant<SOTrue, SOEqual, SOMember, SORel, SONot, SOAnd, SOOr,
                              SOImplies, SOExists, SOForall, SOExistsSet, SOExistsRel>;

    explicit SOFormula(Node n) : node_(std::move(n)) {}
    const Node& node() const { return node_; }

    template <typename T> const T* as() const { return std::get_if<T>(&node_); }
    template <typename T> bool is() const { return std::holds_alternative<T>(node_); }

private:
    Node node_;
};

namespace sof {
SORef tru();
SORef equal(Var a, Var b);
SORef member(Var x, Var set);
SORef rel(Var r, std::vector<Var> args);
SORef nott(SORef f);
SORef conj(std::vector<SORef> fs);
SORef disj(std::vector<SORef> fs);
SORef implies(SORef a, SORef b);
SORef iff(SORef a, SORef b);
SORef exists(std::vector<Var> vars, SORef body);
SORef forall(std::vector<Var> vars, SORef body);
SORef exists_set(Var set, SORef body);
SORef exists_rel(Var r, int arity, SORef body);
} // namespace sof

bool so_structurally_equal(const SORef& a, const SORef& b);

// Grammar mirrors the first-order one plus (member x A), (rel R x1 ... xk),
// (existsSet (A) f), (existsRel (R k) f).
SORef so_parse(const std::string& text);
std::string so_print(const SORef& f);

} // namespace zolaw
