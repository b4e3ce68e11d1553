#pragma once

#include <memory>
#include <string>
#include <vector>

#include "zolaw/errors.hpp"
#include "zolaw/formula.hpp"

namespace zolaw {

struct UnsupportedFragment : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DeciderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Symbolic description of the relations among a parameter tuple: a partition
// of the parameters into equality blocks plus an irreflexive symmetric
// adjacency relation on the blocks. Complete: every pair of blocks has a
// determined equal/unequal and adjacent/non-adjacent status.
class ParamConfig {
public:
    ParamConfig() = default;

    int param_count() const { return static_cast<int>(params_.size()); }
    int block_count() const { return static_cast<int>(block_adj_.size()); }
    const std::vector<std::string>& params() const { return params_; }
    int block_of(const std::string& name) const;
    bool blocks_adjacent(int b1, int b2) const { return b1 != b2 && block_adj_[b1][b2]; }

    // New parameter equal to an existing block (adjacency inherited).
    ParamConfig with_merged(const std::string& name, int block) const;
    // New parameter in a fresh block; bit i of pattern = adjacency to block i.
    ParamConfig with_fresh(const std::string& name, unsigned pattern) const;

private:
    std::vector<std::string> params_;
    std::vector<int> param_block_;
    std::vector<std::vector<char>> block_adj_;
};

// The equivalence classes of E_a: one singleton class per parameter block plus
// one class per adjacency pattern over the blocks. Exactly
// block_count + 2^block_count classes.
struct ClassDesc {
    enum class Kind { Singleton, Pattern };
    Kind kind;
    int block = -1;       // Singleton
    unsigned pattern = 0; // Pattern: bit i = adjacent to block i
};

std::vector<ClassDesc> class_system(const ParamConfig& cfg);

enum class InternalPattern { None, AlwaysFalse, AlwaysTrue, AgreesWithAdjacency, DisagreesWithAdjacency };

// Quotient graph on the classes: an edge where some legal pair relation makes
// the edge formula limit-true, plus the within-class behaviour (loops) needed
// by the chromatic rule.
struct QuotientH {
    std::vector<ClassDesc> classes;
    std::vector<std::vector<char>> edge;    // symmetric, cross-class
    std::vector<InternalPattern> internal;  // None for singletons
};

// Derivation trace: which rule fired at each node, with enough recorded to
// recompute the verdict bottom-up.
struct DecideTrace;
using TraceRef = std::shared_ptr<const DecideTrace>;

struct DecideTrace {
    std::string rule;     // atom-equal | atom-adj | true | not | and | or | implies |
                          // exists | forall | qconn | qchr
    int verdict = 0;
    std::string detail;   // rule-specific (class chosen, H summary, ...)
    std::vector<TraceRef> children;
};

struct LimitVerdict {
    int value = 0; // limiting probability, 0 or 1
    TraceRef trace;
};

std::string trace_to_json(const TraceRef& trace);

// Limiting truth value of f under cfg; f must lie in the weak-variant
// fragment over Conn/Chr(k) and have its free variables among cfg's params.
int limit_truth(const FormulaRef& f, const ParamConfig& cfg);
int limit_truth(const FormulaRef& f, const ParamConfig& cfg, TraceRef* trace);

// Limiting probability of a sentence in G(n,p) for constant 0 < p < 1. The
// result is 0 or 1 and does not depend on p. Throws UnsupportedFragment for
// Ham quantifiers or the relativized/equality/tuple forms.
LimitVerdict decide(const FormulaRef& f);

// Connectivity rule: verdict for QWeak(Conn) given the quotient graph.
int conn_rule(const QuotientH& h, const ParamConfig& cfg);
// Chromatic rule: verdict for QWeak(Chr k).
int chr_rule(const QuotientH& h, int k, const ParamConfig& cfg);

} // namespace zolaw
