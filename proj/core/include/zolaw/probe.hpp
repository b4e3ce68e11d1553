#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zolaw/decider.hpp"
#include "zolaw/evaluator.hpp"
#include "zolaw/formula.hpp"

namespace zolaw {

// Wilson score interval at confidence z (default 95%).
std::pair<double, double> wilson_interval(long long successes, long long trials,
                                          double z = 1.959963984540054);

// Per-trial stream index: (n << 32) | trial. Injective, so adding grid points
// never reshuffles existing trials.
std::uint64_t trial_stream(int n, int trial);

struct ProbeConfig {
    FormulaRef formula;
    double p = 0.5;
    std::vector<int> n_grid;
    int trials = 200;
    std::uint64_t master_seed = 0;
    EvalLimits limits;
    double one_threshold = 0.95;
    double zero_threshold = 0.05;
    int jobs = 1;
};

enum class Classification { ConsistentWithOne, ConsistentWithZero, Inconclusive };

std::string classification_name(Classification c);

struct ProbePoint {
    int n = 0;
    int trials = 0;
    int successes = 0;
    int errors = 0; // cap / equivalence / well-definedness failures, per trial
    double estimate = 0;
    double ci_lo = 0;
    double ci_hi = 0;
};

struct ProbeReport {
    std::string formula_text;
    double p = 0;
    std::uint64_t master_seed = 0;
    std::vector<ProbePoint> points;
    Classification classification = Classification::Inconclusive;
    std::optional<int> decider_verdict;
    bool disagreement = false;

    std::string to_json() const;
    std::string to_csv() const; // columns: n,trials,successes,estimate,ci_lo,ci_hi,errors
};

// Monte Carlo estimate of Pr[G(n,p) |= formula] over the n-grid. Deterministic
// for a fixed config regardless of the worker count. A SemanticsViolation
// aborts with the offending trial's seed in the message; cap and equivalence
// violations are counted per trial.
ProbeReport probe(const ProbeConfig& cfg);

// probe plus the symbolic verdict; flags disagreement when the empirical
// classification contradicts it. UnsupportedFragment propagates.
ProbeReport compare_with_decider(const ProbeConfig& cfg);

struct DClassCampaignConfig {
    int n = 20000;
    double p = 0.5;
    double alpha = 0.0;
    int seeds = 30;
    std::uint64_t master_seed = 0;
    int subset_size = 3; // |S| for the powerset checks inside D(m)
};

struct DClassCampaignReport {
    int n = 0;
    double p = 0;
    double alpha = 0;
    int seeds = 0;
    int m = 0;
    double h = 0;
    double epsilon = 0;
    double mu_exact = 0; // n * Pr[Bin(n-1,p) = m]
    std::vector<int> sizes;
    double mean_dsize = 0;
    long long deg_in_tol = 0, deg_total = 0;
    long long codeg_in_tol = 0, codeg_total = 0;
    double deg_fraction = 0;   // pooled over all seeds
    double codeg_fraction = 0; // pooled over all seeds
    int powerset_trials = 0;
    int powerset_valid = 0;

    std::string to_json() const;
};

// Exact Pr[Bin(n,p) = m] via log-gamma.
double binomial_pmf(int n, double p, int m);

// Samples graphs, computes the degree target, pools dclass_stats fractions and
// runs powerset checks on small random subsets of D(m).
DClassCampaignReport dclass_campaign(const DClassCampaignConfig& cfg);

} // namespace zolaw
