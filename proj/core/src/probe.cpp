#include "zolaw/probe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include <json.hpp>

#include "zolaw/ham_arith.hpp"
#include "zolaw/parse.hpp"

namespace zolaw {

std::pair<double, double> wilson_interval(long long successes, long long trials, double z) {
    if (trials <= 0) return {0.0, 1.0};
    double n = static_cast<double>(trials);
    double phat = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::uint64_t trial_stream(int n, int trial) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(trial));
}

std::string classification_name(Classification c) {
    switch (c) {
        case Classification::ConsistentWithOne: return "ConsistentWithOne";
        case Classification::ConsistentWithZero: return "ConsistentWithZero";
        case Classification::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

struct QuantUse {
    bool has_ham = false;
    bool has_chr = false;
    int max_tuple_len = 0;
};

void scan_quants(const FormulaRef& f, QuantUse& use) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            auto qn = [&](const QuantName& q) {
                if (q.kind == QuantName::Kind::Ham) use.has_ham = true;
                if (q.kind == QuantName::Kind::Chr) use.has_chr = true;
            };
            if constexpr (std::is_same_v<T, NotF>) {
                scan_quants(n.f, use);
            } else if constexpr (std::is_same_v<T, AndF> || std::is_same_v<T, OrF>) {
                for (const auto& s : n.fs) scan_quants(s, use);
            } else if constexpr (std::is_same_v<T, ImpliesF>) {
                scan_quants(n.a, use);
                scan_quants(n.b, use);
            } else if constexpr (std::is_same_v<T, ExistsF> || std::is_same_v<T, ForallF>) {
                scan_quants(n.body, use);
            } else if constexpr (std::is_same_v<T, QWeakF>) {
                qn(n.q);
                scan_quants(n.edge, use);
            } else if constexpr (std::is_same_v<T, QRelF>) {
                qn(n.q);
                scan_quants(n.dom, use);
                scan_quants(n.edge, use);
            } else if constexpr (std::is_same_v<T, QEqF>) {
                qn(n.q);
                scan_quants(n.dom, use);
                scan_quants(n.eq, use);
                scan_quants(n.edge, use);
            } else if constexpr (std::is_same_v<T, QTuF>) {
                qn(n.q);
                use.max_tuple_len = std::max(use.max_tuple_len, n.len);
                scan_quants(n.dom, use);
                scan_quants(n.eq, use);
                scan_quants(n.edge, use);
            }
        },
        f->node());
}

void validate_caps(const ProbeConfig& cfg) {
    QuantUse use;
    scan_quants(cfg.formula, use);
    for (int n : cfg.n_grid) {
        if (n < 0) throw std::invalid_argument("probe: negative n");
        if (use.has_ham && n > cfg.limits.ham_cap)
            throw std::invalid_argument("probe: n exceeds the Ham solver cap for this formula");
        if (use.has_chr && n > cfg.limits.colorability_cap)
            throw std::invalid_argument("probe: n exceeds the colorability cap for this formula");
        if (use.max_tuple_len > 0) {
            long long total = 1;
            for (int i = 0; i < use.max_tuple_len; ++i) {
                total *= n;
                if (total > cfg.limits.tuple_domain_cap)
                    throw std::invalid_argument("probe: n^l exceeds the tuple domain cap");
            }
        }
    }
}

enum class TrialOutcome : unsigned char { False = 0, True = 1, Error = 2 };

} // namespace

ProbeReport probe(const ProbeConfig& cfg) {
    if (!cfg.formula) throw std::invalid_argument("probe: missing formula");
    if (!free_vars(cfg.formula).empty())
        throw std::invalid_argument("probe: formula must be a sentence");
    if (cfg.trials < 1) throw std::invalid_argument("probe: trials must be >= 1");
    if (!(cfg.p > 0.0 && cfg.p < 1.0)) throw std::invalid_argument("probe: p must lie in (0,1)");
    validate_caps(cfg);

    const int jobs = std::max(1, cfg.jobs);
    const std::size_t total = cfg.n_grid.size() * static_cast<std::size_t>(cfg.trials);
    std::vector<TrialOutcome> slots(total, TrialOutcome::False);
    // Aborts are recorded per slot and the lowest index wins, so the reported
    // violation does not depend on the worker count.
    std::vector<std::string> abort_at(total);

    auto run_slice = [&](int worker) {
        for (std::size_t idx = static_cast<std::size_t>(worker); idx < total; idx += static_cast<std::size_t>(jobs)) {
            int gi = static_cast<int>(idx / static_cast<std::size_t>(cfg.trials));
            int trial = static_cast<int>(idx % static_cast<std::size_t>(cfg.trials));
            int n = cfg.n_grid[static_cast<std::size_t>(gi)];
            RngSpec spec{cfg.master_seed, trial_stream(n, trial)};
            try {
                Graph g = sample_gnp(n, cfg.p, spec);
                slots[idx] = eval(g, cfg.formula, {}, cfg.limits) ? TrialOutcome::True : TrialOutcome::False;
            } catch (const SemanticsViolation& e) {
                abort_at[idx] = std::string(e.what()) + " (n=" + std::to_string(n) +
                                ", trial=" + std::to_string(trial) +
                                ", seed=" + std::to_string(cfg.master_seed) +
                                ", stream=" + std::to_string(spec.stream_index) + ")";
                return;
            } catch (const EvalError&) {
                slots[idx] = TrialOutcome::Error;
            }
        }
    };

    if (jobs == 1) {
        run_slice(0);
    } else {
        std::vector<std::thread> workers;
        for (int w = 0; w < jobs; ++w) workers.emplace_back(run_slice, w);
        for (auto& t : workers) t.join();
    }
    for (const std::string& a : abort_at)
        if (!a.empty()) throw SemanticsViolation(a);

    ProbeReport report;
    report.formula_text = print(cfg.formula);
    report.p = cfg.p;
    report.master_seed = cfg.master_seed;
    for (std::size_t gi = 0; gi < cfg.n_grid.size(); ++gi) {
        ProbePoint pt;
        pt.n = cfg.n_grid[gi];
        pt.trials = cfg.trials;
        for (int t = 0; t < cfg.trials; ++t) {
            TrialOutcome o = slots[gi * static_cast<std::size_t>(cfg.trials) + static_cast<std::size_t>(t)];
            if (o == TrialOutcome::True) ++pt.successes;
            if (o == TrialOutcome::Error) ++pt.errors;
        }
        pt.estimate = static_cast<double>(pt.successes) / static_cast<double>(pt.trials);
        auto [lo, hi] = wilson_interval(pt.successes, pt.trials);
        pt.ci_lo = lo;
        pt.ci_hi = hi;
        report.points.push_back(pt);
    }

    // Classification: thresholds apply at the largest n; the estimate sequence
    // must be monotone within CI slack (adjacent intervals may not contradict
    // the direction).
    const ProbePoint& last = report.points.back();
    auto monotone = [&](bool increasing) {
        for (std::size_t i = 0; i + 1 < report.points.size(); ++i) {
            const ProbePoint& a = report.points[i];
            const ProbePoint& b = report.points[i + 1];
            double slack = (a.ci_hi - a.ci_lo) / 2.0 + (b.ci_hi - b.ci_lo) / 2.0;
            if (increasing && b.estimate < a.estimate - slack) return false;
            if (!increasing && b.estimate > a.estimate + slack) return false;
        }
        return true;
    };
    if (last.estimate >= cfg.one_threshold && monotone(true))
        report.classification = Classification::ConsistentWithOne;
    else if (last.estimate <= cfg.zero_threshold && monotone(false))
        report.classification = Classification::ConsistentWithZero;
    else
        report.classification = Classification::Inconclusive;
    return report;
}

ProbeReport compare_with_decider(const ProbeConfig& cfg) {
    LimitVerdict verdict = decide(cfg.formula); // UnsupportedFragment passes through
    ProbeReport report = probe(cfg);
    report.decider_verdict = verdict.value;
    report.disagreement =
        (verdict.value == 1 && report.classification == Classification::ConsistentWithZero) ||
        (verdict.value == 0 && report.classification == Classification::ConsistentWithOne);
    return report;
}

std::string ProbeReport::to_json() const {
    nlohmann::ordered_json j;
    j["formula"] = formula_text;
    j["p"] = p;
    j["master_seed"] = master_seed;
    auto arr = nlohmann::ordered_json::array();
    for (const ProbePoint& pt : points) {
        nlohmann::ordered_json pj;
        pj["n"] = pt.n;
        pj["trials"] = pt.trials;
        pj["successes"] = pt.successes;
        pj["estimate"] = pt.estimate;
        pj["ci_lo"] = pt.ci_lo;
        pj["ci_hi"] = pt.ci_hi;
        pj["errors"] = pt.errors;
        arr.push_back(std::move(pj));
    }
    j["points"] = std::move(arr);
    j["classification"] = classification_name(classification);
    if (decider_verdict) {
        j["decider_verdict"] = *decider_verdict;
        j["disagreement"] = disagreement;
    }
    return j.dump();
}

std::string ProbeReport::to_csv() const {
    std::string out = "n,trials,successes,estimate,ci_lo,ci_hi,errors\n";
    char line[160];
    for (const ProbePoint& pt : points) {
        std::snprintf(line, sizeof(line), "%d,%d,%d,%.6f,%.6f,%.6f,%d\n", pt.n, pt.trials,
                      pt.successes, pt.estimate, pt.ci_lo, pt.ci_hi, pt.errors);
        out += line;
    }
    return out;
}

double binomial_pmf(int n, double p, int m) {
    if (m < 0 || m > n) return 0.0;
    double logc = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0);
    return std::exp(logc + m * std::log(p) + (n - m) * std::log1p(-p));
}

DClassCampaignReport dclass_campaign(const DClassCampaignConfig& cfg) {
    if (cfg.seeds < 1) throw std::invalid_argument("dclass_campaign: seeds must be >= 1");
    DegreeTarget target = degree_target(cfg.n, cfg.p, cfg.alpha); // rejects n <= 16
    DClassCampaignReport report;
    report.n = cfg.n;
    report.p = cfg.p;
    report.alpha = cfg.alpha;
    report.seeds = cfg.seeds;
    report.m = target.m;
    report.h = target.h;
    report.mu_exact = cfg.n * binomial_pmf(cfg.n - 1, cfg.p, target.m);

    for (int seed = 0; seed < cfg.seeds; ++seed) {
        Graph g = sample_gnp(cfg.n, cfg.p, RngSpec{cfg.master_seed, static_cast<std::uint64_t>(seed)});
        DClassStats stats = dclass_stats(g, target.m, cfg.p);
        report.epsilon = stats.epsilon;
        report.sizes.push_back(stats.size);
        report.deg_in_tol += stats.deg_in_tol;
        report.deg_total += stats.deg_total;
        report.codeg_in_tol += stats.codeg_in_tol;
        report.codeg_total += stats.codeg_total;
        // powerset check on a small random subset of D(m)
        Bitset dm = degree_class(g, target.m);
        std::vector<int> members = dm.to_vector();
        if (!members.empty()) {
            RngStream pick(RngSpec{cfg.master_seed, (1ull << 40) | static_cast<std::uint64_t>(seed)});
            std::vector<int> pool = members;
            std::vector<int> s;
            int want = std::min<int>(cfg.subset_size, static_cast<int>(pool.size()));
            for (int i = 0; i < want; ++i) {
                std::size_t at = static_cast<std::size_t>(pick.next_below(pool.size()));
                s.push_back(pool[at]);
                pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
            }
            std::sort(s.begin(), s.end());
            ReprCertificate cert = check_powerset_repr(g, s, /*exclude_s=*/true);
            ++report.powerset_trials;
            if (cert.valid()) ++report.powerset_valid;
        }
    }
    long long total_size = 0;
    for (int s : report.sizes) total_size += s;
    report.mean_dsize = static_cast<double>(total_size) / static_cast<double>(cfg.seeds);
    report.deg_fraction = report.deg_total ? static_cast<double>(report.deg_in_tol) / static_cast<double>(report.deg_total) : 0.0;
    report.codeg_fraction = report.codeg_total ? static_cast<double>(report.codeg_in_tol) / static_cast<double>(report.codeg_total) : 0.0;
    return report;
}

std::string DClassCampaignReport::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["p"] = p;
    j["alpha"] = alpha;
    j["seeds"] = seeds;
    j["m"] = m;
    j["h"] = h;
    j["epsilon"] = epsilon;
    j["mu_exact"] = mu_exact;
    j["sizes"] = sizes;
    j["mean_dsize"] = mean_dsize;
    j["deg_in_tol"] = deg_in_tol;
    j["deg_total"] = deg_total;
    j["deg_fraction"] = deg_fraction;
    j["codeg_in_tol"] = codeg_in_tol;
    j["codeg_total"] = codeg_total;
    j["codeg_fraction"] = codeg_fraction;
    j["powerset_trials"] = powerset_trials;
    j["powerset_valid"] = powerset_valid;
    return j.dump();
}

} // namespace zolaw
