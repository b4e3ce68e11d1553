#pragma once

#include <map>
#include <string>
#include <vector>

#include "zolaw/errors.hpp"
#include "zolaw/formula.hpp"
#include "zolaw/graph.hpp"
#include "zolaw/solvers.hpp"

namespace zolaw {

// Partial map from variable names to vertex ids.
using Assignment = std::map<std::string, int>;

struct EvalLimits {
    int ham_cap = 64;           // is_hamiltonian input size
    int chr_exact_cap = 64;     // chromatic_number computation
    int colorability_cap = 512; // k-colorability decisions behind Chr(k)
    long long tuple_domain_cap = 20000; // n^l for Qtu
};

struct TraceEntry {
    std::string formula;
    Assignment env;
    bool value;
};

struct TraceSink {
    std::vector<TraceEntry> entries;
    std::size_t max_entries = 100000;
    bool truncated = false;
};

// The structure a Lindstrom quantifier applies its property to. Domain
// elements are classes of l-tuples; weak and relativized graphs have
// singleton classes of 1-tuples.
struct DerivedGraph {
    enum class Provenance { Weak, Relativized, Equality, Tuple };
    Provenance provenance = Provenance::Weak;
    int tuple_len = 1;
    std::vector<std::vector<std::vector<int>>> classes;
    Graph graph; // symmetric irreflexive edges on class indices
};

// Exact model checking of f on g under env. Standard Tarskian semantics;
// quantifier variants build their derived graph and verify the definitions'
// side conditions dynamically (antireflexive/symmetric edge formula,
// equivalence and well-definedness for Qeq/Qtu), failing loudly on violation.
bool eval(const Graph& g, const FormulaRef& f, const Assignment& env = {},
          const EvalLimits& limits = {}, TraceSink* trace = nullptr);

// { a | g |= f[free := a] } under env.
Bitset definable_set(const Graph& g, const FormulaRef& f, const Var& free,
                     const Assignment& env = {}, const EvalLimits& limits = {});

// Internal entries exercised by eval, exposed for direct testing. Each builds
// the derived graph for one quantifier variant and applies the property.
bool eval_qrl(const Graph& g, QuantName q, const Var& v, const FormulaRef& dom,
              const Var& x, const Var& y, const FormulaRef& edge,
              const Assignment& env = {}, const EvalLimits& limits = {});
bool eval_qeq(const Graph& g, QuantName q, const Var& v, const FormulaRef& dom,
              const Var& u, const Var& w, const FormulaRef& eq,
              const Var& x, const Var& y, const FormulaRef& edge,
              const Assignment& env = {}, const EvalLimits& limits = {});
bool eval_qtu(const Graph& g, QuantName q, int len,
              const std::vector<Var>& vbar, const FormulaRef& dom,
              const std::vector<Var>& ubar, const std::vector<Var>& wbar, const FormulaRef& eq,
              const std::vector<Var>& xbar, const std::vector<Var>& ybar, const FormulaRef& edge,
              const Assignment& env = {}, const EvalLimits& limits = {});

// Derived-graph construction without applying the property (for inspection).
DerivedGraph build_weak_derived(const Graph& g, const Var& x, const Var& y,
                                const FormulaRef& edge, const Assignment& env = {},
                                const EvalLimits& limits = {});
DerivedGraph build_tuple_derived(const Graph& g, int len,
                                 const std::vector<Var>& vbar, const FormulaRef& dom,
                                 const std::vector<Var>& ubar, const std::vector<Var>& wbar,
                                 const FormulaRef& eq,
                                 const std::vector<Var>& xbar, const std::vector<Var>& ybar,
                                 const FormulaRef& edge,
                                 const Assignment& env = {}, const EvalLimits& limits = {});

} // namespace zolaw
