// Command-line front end: sampling, evaluation, the limiting-probability
// decider, Monte Carlo probes and the arithmetization builders.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "zolaw/decider.hpp"
#include "zolaw/evaluator.hpp"
#include "zolaw/ham_arith.hpp"
#include "zolaw/parse.hpp"
#include "zolaw/probe.hpp"
#include "zolaw/so_formula.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitSemantics = 3;
constexpr int kExitCap = 4;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text << std::endl;
    else
        spit(out_path, text);
}

zolaw::Assignment parse_env(const std::string& text) {
    zolaw::Assignment env;
    if (text.empty()) return env;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw std::runtime_error("bad --env entry '" + item + "'");
        env[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
    }
    return env;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stoi(item));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zolaw: zero-one law workbench for random graphs"};
    app.require_subcommand(1);

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula on a graph");
    std::string eval_graph, eval_formula, eval_env, eval_trace_out;
    bool eval_trace = false;
    eval_cmd->add_option("graph", eval_graph, "graph JSON file")->required();
    eval_cmd->add_option("formula", eval_formula, "formula file")->required();
    eval_cmd->add_option("--env", eval_env, "assignment, e.g. a=3,b=7");
    eval_cmd->add_flag("--trace", eval_trace, "emit a JSON evaluation trace");

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "Sample G(n,p)");
    int sample_n = 0;
    double sample_p = 0.5;
    std::uint64_t sample_seed = 0, sample_stream = 0;
    std::string sample_out;
    sample_cmd->add_option("--n", sample_n, "vertex count")->required();
    sample_cmd->add_option("--p", sample_p, "edge probability")->required();
    sample_cmd->add_option("--seed", sample_seed, "master seed");
    sample_cmd->add_option("--stream", sample_stream, "stream index");
    sample_cmd->add_option("--out", sample_out, "output file (default stdout)");

    // decide
    auto* decide_cmd = app.add_subcommand("decide", "Limiting probability of a sentence");
    std::string decide_formula;
    decide_cmd->add_option("formula", decide_formula, "formula file")->required();

    // probe
    auto* probe_cmd = app.add_subcommand("probe", "Monte Carlo probe over an n-grid");
    std::string probe_formula, probe_grid = "10,20,40", probe_out, probe_format = "json";
    double probe_p = 0.5;
    int probe_trials = 200, probe_jobs = 1;
    std::uint64_t probe_seed = 0;
    bool probe_decide = false;
    probe_cmd->add_option("--formula", probe_formula, "formula file")->required();
    probe_cmd->add_option("--p", probe_p, "edge probability");
    probe_cmd->add_option("--n", probe_grid, "comma-separated n grid");
    probe_cmd->add_option("--trials", probe_trials, "trials per grid point");
    probe_cmd->add_option("--seed", probe_seed, "master seed");
    probe_cmd->add_option("--jobs", probe_jobs, "worker threads");
    probe_cmd->add_option("--out", probe_out, "output file (default stdout)");
    probe_cmd->add_option("--format", probe_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    probe_cmd->add_flag("--decide", probe_decide, "compare against the decider verdict");

    // encode
    auto* encode_cmd = app.add_subcommand("encode", "Encode a second-order sentence");
    std::string enc_so, enc_phi0, enc_phi1, enc_out;
    std::string enc_phi0_var = "x", enc_phi1_var = "x";
    encode_cmd->add_option("so", enc_so, "second-order formula file")->required();
    encode_cmd->add_option("--phi0", enc_phi0, "formula file defining S")->required();
    encode_cmd->add_option("--phi1", enc_phi1, "formula file defining B within S")->required();
    encode_cmd->add_option("--phi0-var", enc_phi0_var, "element variable of phi0");
    encode_cmd->add_option("--phi1-var", enc_phi1_var, "element variable of phi1");
    encode_cmd->add_option("--out", enc_out, "output file (default stdout)");

    // check-repr
    auto* repr_cmd = app.add_subcommand("check-repr", "Powerset representation certificates");
    std::string repr_graph, repr_s, repr_phi0, repr_phi1, repr_env;
    std::string repr_phi0_var = "x", repr_phi1_var = "x";
    bool repr_exclude = false;
    repr_cmd->add_option("graph", repr_graph, "graph JSON file")->required();
    repr_cmd->add_option("--S", repr_s, "comma-separated vertex set (single powerset check)");
    repr_cmd->add_flag("--exclude-S", repr_exclude, "witnesses from V \\ S");
    repr_cmd->add_option("--phi0", repr_phi0, "formula file for S (double check)");
    repr_cmd->add_option("--phi1", repr_phi1, "formula file for B (double check)");
    repr_cmd->add_option("--phi0-var", repr_phi0_var, "element variable of phi0");
    repr_cmd->add_option("--phi1-var", repr_phi1_var, "element variable of phi1");
    repr_cmd->add_option("--env", repr_env, "parameter assignment, e.g. mS=70,mB=71");

    // testbed
    auto* testbed_cmd = app.add_subcommand("testbed", "Build the synthetic witness graph");
    int testbed_b = 2;
    std::string testbed_out;
    testbed_cmd->add_option("--b", testbed_b, "base set size (1..3)")->required();
    testbed_cmd->add_option("--out", testbed_out, "graph output file");

    // nonconv
    auto* nonconv_cmd = app.add_subcommand("nonconv", "Build the nonconverging sentence");
    int nc_r = 100, nc_q = 100, nc_threshold = 50;
    std::string nc_out;
    nonconv_cmd->add_option("--r", nc_r, "named constants");
    nonconv_cmd->add_option("--q", nc_q, "modulus");
    nonconv_cmd->add_option("--threshold", nc_threshold, "log* threshold");
    nonconv_cmd->add_option("--out", nc_out, "output file (default stdout)");

    // dclass
    auto* dclass_cmd = app.add_subcommand("dclass", "Degree-class statistics campaign");
    int dc_n = 20000, dc_seeds = 30;
    double dc_p = 0.5, dc_alpha = 0.0;
    std::uint64_t dc_seed = 0;
    std::string dc_out;
    dclass_cmd->add_option("--n", dc_n, "vertex count");
    dclass_cmd->add_option("--p", dc_p, "edge probability");
    dclass_cmd->add_option("--alpha", dc_alpha, "degree target shift");
    dclass_cmd->add_option("--seeds", dc_seeds, "number of sampled graphs");
    dclass_cmd->add_option("--seed", dc_seed, "master seed");
    dclass_cmd->add_option("--out", dc_out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*eval_cmd) {
            zolaw::Graph g = zolaw::Graph::from_json(slurp(eval_graph));
            zolaw::FormulaRef f = zolaw::parse(slurp(eval_formula));
            zolaw::Assignment env = parse_env(eval_env);
            zolaw::TraceSink trace;
            bool value = zolaw::eval(g, f, env, {}, eval_trace ? &trace : nullptr);
            nlohmann::ordered_json j;
            j["value"] = value;
            if (eval_trace) {
                auto arr = nlohmann::ordered_json::array();
                for (const auto& e : trace.entries) {
                    nlohmann::ordered_json ej;
                    ej["formula"] = e.formula;
                    ej["env"] = e.env;
                    ej["value"] = e.value;
                    arr.push_back(std::move(ej));
                }
                j["trace"] = std::move(arr);
                j["trace_truncated"] = trace.truncated;
            }
            std::cout << j.dump() << std::endl;
        } else if (*sample_cmd) {
            zolaw::Graph g = zolaw::sample_gnp(sample_n, sample_p, {sample_seed, sample_stream});
            emit(sample_out, g.to_json());
        } else if (*decide_cmd) {
            zolaw::FormulaRef f = zolaw::parse(slurp(decide_formula));
            zolaw::LimitVerdict verdict = zolaw::decide(f);
            nlohmann::ordered_json j;
            j["verdict"] = verdict.value;
            j["trace"] = nlohmann::ordered_json::parse(zolaw::trace_to_json(verdict.trace));
            std::cout << j.dump() << std::endl;
        } else if (*probe_cmd) {
            zolaw::ProbeConfig cfg;
            cfg.formula = zolaw::parse(slurp(probe_formula));
            cfg.p = probe_p;
            cfg.n_grid = parse_int_list(probe_grid);
            cfg.trials = probe_trials;
            cfg.master_seed = probe_seed;
            cfg.jobs = probe_jobs;
            zolaw::ProbeReport report = probe_decide ? zolaw::compare_with_decider(cfg) : zolaw::probe(cfg);
            emit(probe_out, probe_format == "csv" ? report.to_csv() : report.to_json());
        } else if (*encode_cmd) {
            zolaw::SORef phi = zolaw::so_parse(slurp(enc_so));
            zolaw::EncoderContext ctx;
            ctx.phi0 = {zolaw::parse(slurp(enc_phi0)), zolaw::Var(enc_phi0_var), {}};
            ctx.phi1 = {zolaw::parse(slurp(enc_phi1)), zolaw::Var(enc_phi1_var), {}};
            emit(enc_out, zolaw::print(zolaw::encode_so(phi, ctx)));
        } else if (*repr_cmd) {
            zolaw::Graph g = zolaw::Graph::from_json(slurp(repr_graph));
            zolaw::ReprCertificate cert;
            if (!repr_s.empty()) {
                cert = zolaw::check_powerset_repr(g, parse_int_list(repr_s), repr_exclude);
            } else if (!repr_phi0.empty() && !repr_phi1.empty()) {
                zolaw::Assignment env = parse_env(repr_env);
                zolaw::SetDef phi0{zolaw::parse(slurp(repr_phi0)), zolaw::Var(repr_phi0_var), env};
                zolaw::SetDef phi1{zolaw::parse(slurp(repr_phi1)), zolaw::Var(repr_phi1_var), env};
                cert = zolaw::check_double_powerset_repr(g, phi0, phi1);
            } else {
                throw std::runtime_error("check-repr needs either --S or both --phi0 and --phi1");
            }
            nlohmann::ordered_json j;
            j["kind"] = cert.kind == zolaw::ReprCertificate::Kind::PowersetRepr ? "powerset" : "double-powerset";
            j["S"] = cert.s;
            j["B"] = cert.b;
            j["f_value"] = cert.f_value;
            j["missing"] = cert.missing;
            j["valid"] = cert.valid();
            std::cout << j.dump() << std::endl;
        } else if (*testbed_cmd) {
            zolaw::Testbed t = zolaw::build_testbed(testbed_b);
            if (!testbed_out.empty()) spit(testbed_out, t.graph.to_json());
            nlohmann::ordered_json j;
            j["n"] = t.graph.n();
            j["m_S"] = t.m_s;
            j["m_B"] = t.m_b;
            j["base"] = t.base;
            j["S"] = t.s_set;
            if (testbed_out.empty()) j["graph"] = nlohmann::ordered_json::parse(t.graph.to_json());
            std::cout << j.dump() << std::endl;
        } else if (*nonconv_cmd) {
            zolaw::ArithConfig cfg{nc_r, nc_q, nc_threshold};
            emit(nc_out, zolaw::print(zolaw::build_nonconv(cfg)));
        } else if (*dclass_cmd) {
            zolaw::DClassCampaignConfig cfg;
            cfg.n = dc_n;
            cfg.p = dc_p;
            cfg.alpha = dc_alpha;
            cfg.seeds = dc_seeds;
            cfg.master_seed = dc_seed;
            emit(dc_out, zolaw::dclass_campaign(cfg).to_json());
        }
    } catch (const zolaw::ParseError& e) {
        std::cerr << "parse error: " << e.what() << std::endl;
        return kExitParse;
    } catch (const zolaw::GraphFormatError& e) {
        std::cerr << "graph format error: " << e.what() << std::endl;
        return kExitParse;
    } catch (const zolaw::CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << std::endl;
        return kExitCap;
    } catch (const zolaw::SemanticsViolation& e) {
        std::cerr << "semantics violation: " << e.what() << std::endl;
        return kExitSemantics;
    } catch (const zolaw::EquivalenceViolation& e) {
        std::cerr << "equivalence violation: " << e.what() << std::endl;
        return kExitSemantics;
    } catch (const zolaw::WellDefinednessViolation& e) {
        std::cerr << "well-definedness violation: " << e.what() << std::endl;
        return kExitSemantics;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
