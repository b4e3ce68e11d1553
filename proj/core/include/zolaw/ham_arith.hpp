#pragma once

#include <vector>

#include "zolaw/evaluator.hpp"
#include "zolaw/formula.hpp"
#include "zolaw/graph.hpp"
#include "zolaw/so_formula.hpp"

namespace zolaw {

// A definable vertex set: a formula with one designated free element variable;
// remaining free variables are parameters, optionally pinned by `params`.
struct SetDef {
    FormulaRef formula;
    Var element;
    Assignment params;
};

Bitset realize(const Graph& g, const SetDef& def, const EvalLimits& limits = {});

// Cardinality comparison |A| <= |B| as a Ham-quantifier sentence: a Hamilton
// cycle must exist in the graph with all edges between A\B and B\A and all
// edges within V\(A\B). The equivalence with |A| <= |B| has boundary
// exceptions (n < 3, and |A\B| = |B\A| >= 1 with V\(A\B)\(B\A) nonempty);
// see the README and the oracle tests for the exact characterization.
FormulaRef build_preceq(const SetDef& a, const SetDef& b);

// Membership in D(v) = {x | d(x) = d(v)}: the two preceq instances over the
// neighborhood sets combined as an equivalence (each implies the other).
FormulaRef build_degree_class_formula(const Var& x, const Var& v);

struct ReprCertificate {
    enum class Kind { PowersetRepr, DoublePowersetRepr };
    Kind kind = Kind::PowersetRepr;
    std::vector<int> s;
    std::vector<int> b;                      // empty for PowersetRepr
    std::vector<std::vector<int>> missing;   // subsets lacking a witness
    bool b_nonempty = true;                  // double variant requires nonempty B
    int f_value = 0;                         // |B|

    bool valid() const { return missing.empty() && b_nonempty; }
};

// Every subset A of S must occur as N(v,S) for some v in the pool (V, or V\S
// when exclude_s). |S| <= cap since all 2^|S| subsets are enumerated.
ReprCertificate check_powerset_repr(const Graph& g, const std::vector<int>& s,
                                    bool exclude_s, int cap = 20);

// Double powerset representation: S from phi0 is powerset-represented by V,
// B = {x in S | phi1(x)} is nonempty, and every subset of B occurs as N(v,S)
// for some v in S.
ReprCertificate check_double_powerset_repr(const Graph& g, const SetDef& phi0,
                                           const SetDef& phi1, int cap = 20,
                                           const EvalLimits& limits = {});

// Synthetic witness instance: b base vertices B; 2^b subset representatives
// p_A with N(p_A, S) = A; S = B u P; one vertex per subset T of S with
// N(w,S) = T; marker vertices adjacent to exactly S and exactly B. Passes
// check_double_powerset_repr with phi0(x) = x ~ m_s, phi1(x) = x ~ m_b.
struct Testbed {
    Graph graph;
    int m_s = 0;
    int m_b = 0;
    std::vector<int> base;  // B
    std::vector<int> s_set; // S
};

Testbed build_testbed(int b);

SetDef testbed_phi0(const Testbed& t);
SetDef testbed_phi1(const Testbed& t);

// Parameters of the arithmetic sentence; paper values r = 100, q = 100,
// threshold = 50.
struct ArithConfig {
    int r = 100;
    int q = 100;
    int threshold = 50;
};

// Existential second-order sentence: a linear order Lt, the r+1 smallest
// elements x0..xr, and relations Add/Mul/Pow/Tow pinned as the graphs of
// addition, multiplication, base-2 power and base-2 tower on order indices by
// recursion over the successor, plus Mod = congruence of order index mod q.
// Satisfiable exactly on universes of size >= r+1. The axiom list is
// documented in the README.
SORef build_arith(const ArithConfig& cfg);

// Arith plus the clause: the largest x with a tower successor satisfies
// Mod(x, x_j) for some j < threshold. Requires threshold <= min(q, r+1).
SORef build_logstar(const ArithConfig& cfg);

struct EncoderContext {
    SetDef phi0; // defines S
    SetDef phi1; // defines B within S
    int arity_cap = 3;
};

// Second-order-to-graph-formula compiler: first-order variables relativize to
// B, monadic variables become S-vertices read through adjacency, binary
// relations become two pair-list witnesses split by a definable linear order,
// and ternary relations decompose by equality pattern and argument order.
// The output's free variables are the parameters of phi0/phi1.
FormulaRef encode_so(const SORef& phi, const EncoderContext& ctx);

// The nonconverging sentence: some pair (v,u) carries an arithmetic model on
// B = N(u, D(v)), no other pair carries a strictly larger one, and the
// log-star clause holds there.
FormulaRef build_nonconv(const ArithConfig& cfg);

struct DClassStats {
    int m = 0;
    int size = 0;       // |D(m)|
    double epsilon = 0; // lnlnln(n) / sqrt(lnln(n))
    long long deg_in_tol = 0, deg_total = 0;     // v in D(m): d(v,D(m)) in (1 +- eps) p |D(m)|
    long long codeg_in_tol = 0, codeg_total = 0; // pairs in D(m): codegree in (1 +- eps) p^2 |D(m)|
};

DClassStats dclass_stats(const Graph& g, int m, double p);

} // namespace zolaw
