// dss: simulate container recovery, analyze array codes, evaluate
// predictions and exact oracles, and test Gumbel limit laws.
//
// Exit codes: 0 ok, 2 bad flags or input, 3 budget exceeded, 4 oracle
// mismatch, 1 anything else.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dnastore/asymptotics.hpp"
#include "dnastore/code_analysis.hpp"
#include "dnastore/exact_oracle.hpp"
#include "dnastore/io.hpp"
#include "dnastore/parallel.hpp"
#include "dnastore/sim_engine.hpp"

namespace {

using namespace dnastore;

constexpr const char* kVersion = "0.1.0";

enum Exit : int { kOk = 0, kFailure = 1, kBadInput = 2, kBudget = 3, kMismatch = 4 };

struct Options {
    std::string process;
    std::uint64_t n = 0;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
    std::size_t m = 1;
    std::size_t rho = 0;
    std::size_t ell = 1;
    std::size_t M = 0;
    std::size_t r = 0;
    std::string code;
    std::size_t p = 0; // 1-based
    std::string format = "json";
    std::string out;
    std::string emit_samples;
    std::string emit_z;
    std::string manifest;
    unsigned threads = 0;
    bool brute_check = false;
    std::string samples;
    double mu = 0.0;
    double beta = 1.0;
    std::string manifest_file;
};

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::size_t failed_index(const Options& o, const ArrayCodeSpec& code) {
    require(o.p >= 1 && o.p <= code.M, ErrorCode::PositionOutOfRange,
            "--p must lie in [1, " + std::to_string(code.M) + "]");
    return o.p - 1;
}

void write_manifest(const Options& o, const std::vector<std::string>& argv, const json& config,
                    double wall_seconds) {
    if (o.manifest.empty()) return;
    json j;
    j["command"] = argv.empty() ? "" : argv.front();
    std::vector<std::string> args;
    for (std::size_t i = 0; i < argv.size(); ++i) {
        if (argv[i] == "--manifest") {
            ++i;
            continue;
        }
        args.push_back(argv[i]);
    }
    j["argv"] = args;
    j["config"] = config;
    j["seed"] = o.seed;
    j["version"] = kVersion;
    json outputs = json::object();
    if (!o.out.empty()) outputs["out"] = o.out;
    if (!o.emit_samples.empty()) outputs["samples"] = o.emit_samples;
    if (!o.emit_z.empty()) outputs["z"] = o.emit_z;
    j["outputs"] = outputs;
    j["wall_time_s"] = number12(wall_seconds);
    emit(o.manifest, dump(j));
}

std::optional<Prediction> prediction_for(const SimAggregate& agg, const BadBlockReport* report) {
    const auto& c = agg.config;
    const double n = double(c.n);
    switch (c.kind) {
    case ProcessKind::ScalarMds:
        if (c.n >= 2) return predict_scalar(n, c.m, c.rho);
        break;
    case ProcessKind::CcpMax:
        if (c.n >= 3 || (c.ell == 1 && c.n >= 1)) return predict_ccp_max(n, c.m, c.ell);
        break;
    case ProcessKind::ArrayBlock:
        if (report && report->alpha_star >= 1) return predict_regen_bound(n, *report);
        break;
    }
    return std::nullopt;
}

int cmd_simulate(const Options& o, const std::vector<std::string>& argv) {
    const auto start = std::chrono::steady_clock::now();
    const unsigned threads = resolve_threads(o.threads);
    SimAggregate agg;
    std::optional<BadBlockReport> report;
    if (o.process == "ccp") {
        agg = sim_ccp_max(o.n, o.ell, o.m, o.trials, o.seed, threads);
    } else if (o.process == "scalar") {
        agg = sim_scalar_mds(o.n, o.m, o.rho, o.trials, o.seed, threads);
    } else if (o.process == "array") {
        require(!o.code.empty(), ErrorCode::InvalidArgument, "--process array needs --code");
        const auto code = parse_code_spec(o.code);
        report = analyze(code, failed_index(o, code), threads);
        agg = sim_array(code, *report, o.n, o.trials, o.seed, threads);
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown process '" + o.process + "'");
    }

    if (!o.emit_samples.empty()) {
        std::ostringstream s;
        write_samples_csv(s, agg);
        emit(o.emit_samples, s.str());
    }
    if (!o.emit_z.empty()) {
        std::ostringstream s;
        write_z_csv(s, agg);
        emit(o.emit_z, s.str());
    }

    json j = aggregate_to_json(agg);
    if (!o.emit_samples.empty()) j["samples_path"] = o.emit_samples;
    if (!o.emit_z.empty()) j["z_path"] = o.emit_z;
    if (o.format == "csv") {
        std::ostringstream s;
        write_samples_csv(s, agg);
        emit(o.out, s.str());
    } else {
        emit(o.out, dump(j));
    }

    std::fprintf(stderr, "mean %.6g +/- %.3g (stderr) over %llu trials\n", agg.mean, agg.std_error,
                 static_cast<unsigned long long>(agg.samples.size()));
    if (const auto pred = prediction_for(agg, report ? &*report : nullptr)) {
        std::fprintf(stderr, "predicted %s %.6g, relative deviation %+.4f\n", std::string(to_string(pred->kind)).c_str(),
                     pred->value, (agg.mean - pred->value) / pred->value);
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(o, argv, j["config"], wall);
    return kOk;
}

int cmd_analyze(const Options& o, const std::vector<std::string>& argv) {
    const auto start = std::chrono::steady_clock::now();
    const auto code = parse_code_spec(o.code);
    const std::size_t p = failed_index(o, code);
    const auto report = analyze(code, p, resolve_threads(o.threads));
    if (o.brute_check) {
        const auto oracle = brute_force_analyze(code, p);
        if (!same_report(report, oracle)) {
            std::fprintf(stderr, "brute-force classification disagrees with rank-based analysis\n");
            emit(o.out, dump(report_to_json(report, code.name)));
            return kMismatch;
        }
        std::fprintf(stderr, "brute-force check passed\n");
    }
    const json j = report_to_json(report, code.name);
    emit(o.out, dump(j));
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(o, argv, json{{"code", code.name}, {"p", o.p}}, wall);
    return kOk;
}

int cmd_predict(const Options& o) {
    const double n = double(o.n);
    Prediction pred;
    if (o.process == "scalar") {
        pred = predict_scalar(n, o.m, o.rho);
    } else if (o.process == "corollary") {
        pred = predict_corollary(n, o.M, o.r);
    } else if (o.process == "ccp") {
        pred = predict_ccp_max(n, o.m, o.ell);
    } else if (o.process == "regen" || o.process == "array") {
        const auto code = parse_code_spec(o.code);
        pred = predict_regen_bound(n, analyze(code, failed_index(o, code), resolve_threads(o.threads)));
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown process '" + o.process + "'");
    }
    emit(o.out, dump(prediction_to_json(pred)));
    return kOk;
}

int cmd_exact(const Options& o) {
    ExactResult res;
    if (o.process == "ccp") {
        if (o.m == 1 && o.ell == 1) res = {exact_ccp_mean(o.n), std::size_t(o.n + 1)};
        else if (o.ell == 1) res = exact_max_ccp_mean(o.n, o.m);
        else if (o.m == 1) res = exact_ccp_l_mean(o.n, o.ell);
        else throw Error(ErrorCode::InvalidArgument, "exact ccp supports either --m > 1 or --l > 1, not both");
    } else if (o.process == "scalar") {
        res = exact_scalar_process_mean(o.n, o.m, o.rho);
    } else if (o.process == "array") {
        const auto code = parse_code_spec(o.code);
        res = exact_block_process_mean(analyze(code, failed_index(o, code)), o.n);
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown process '" + o.process + "'");
    }
    emit(o.out, dump(json{{"value", number12(res.value)}, {"states", res.states}}));
    return kOk;
}

int cmd_gumbel_check(const Options& o) {
    std::ifstream in(o.samples);
    require(in.good(), ErrorCode::ParseError, "cannot open samples '" + o.samples + "'");
    const auto values = read_z_csv(in);
    const double d = ks_distance(values, o.mu, o.beta);
    json j;
    j["ks_distance"] = number12(d);
    j["mu"] = number12(o.mu);
    j["beta"] = number12(o.beta);
    j["n_samples"] = values.size();
    emit(o.out, dump(j));
    return kOk;
}

int run(const std::vector<std::string>& argv);

int cmd_manifest(const Options& o) {
    std::ifstream in(o.manifest_file);
    require(in.good(), ErrorCode::ParseError, "cannot open manifest '" + o.manifest_file + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("invalid manifest: ") + e.what());
    }
    require(j.contains("argv") && j["argv"].is_array(), ErrorCode::ParseError, "manifest has no argv");
    return run(j["argv"].get<std::vector<std::string>>());
}

int run(const std::vector<std::string>& argv) {
    CLI::App app{"DNA storage container recovery toolkit", "dss"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options o;

    auto add_threads = [&](CLI::App* sub) {
        sub->add_option("--threads", o.threads, "worker threads (default: DSS_THREADS or all cores)");
    };

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo recovery-time simulation");
    simulate->add_option("--process", o.process, "ccp | scalar | array")
        ->required()
        ->check(CLI::IsMember({"ccp", "scalar", "array"}));
    simulate->add_option("--n", o.n, "strands per container")->required()->check(CLI::PositiveNumber);
    simulate->add_option("--trials", o.trials, "number of trials")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", o.seed, "master seed");
    simulate->add_option("--m", o.m, "collectors (ccp) or data columns (scalar)")->check(CLI::PositiveNumber);
    simulate->add_option("--rho", o.rho, "extra surviving columns (scalar)");
    simulate->add_option("--l", o.ell, "copies required (ccp)")->check(CLI::PositiveNumber);
    simulate->add_option("--code", o.code, "code spec file or builtin (array)");
    simulate->add_option("--p", o.p, "failed container, 1-based (array)");
    simulate->add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    simulate->add_option("--out", o.out, "output path (default stdout)");
    simulate->add_option("--emit-samples", o.emit_samples, "write raw samples, one per line");
    simulate->add_option("--emit-z", o.emit_z, "write normalized samples as trial,z");
    simulate->add_option("--manifest", o.manifest, "write a run manifest");
    add_threads(simulate);

    auto* analyze_cmd = app.add_subcommand("analyze", "bad-blocks configuration of an array code");
    analyze_cmd->add_option("--code", o.code, "code spec file or builtin")->required();
    analyze_cmd->add_option("--p", o.p, "failed container, 1-based")->required();
    analyze_cmd->add_flag("--brute-check", o.brute_check, "cross-check against codeword enumeration");
    analyze_cmd->add_option("--out", o.out, "output path (default stdout)");
    analyze_cmd->add_option("--manifest", o.manifest, "write a run manifest");
    add_threads(analyze_cmd);

    auto* predict = app.add_subcommand("predict", "closed-form expectation or bound");
    predict->add_option("--process", o.process, "scalar | corollary | ccp | regen")
        ->required()
        ->check(CLI::IsMember({"scalar", "corollary", "ccp", "regen", "array"}));
    predict->add_option("--n", o.n, "strands per container")->required()->check(CLI::PositiveNumber);
    predict->add_option("--m", o.m, "data columns (scalar) or collectors (ccp)")->check(CLI::PositiveNumber);
    predict->add_option("--rho", o.rho, "extra surviving columns (scalar)");
    predict->add_option("--l", o.ell, "copies required (ccp)")->check(CLI::PositiveNumber);
    predict->add_option("--M", o.M, "containers (corollary)");
    predict->add_option("--r", o.r, "redundancy (corollary)");
    predict->add_option("--code", o.code, "code spec (regen)");
    predict->add_option("--p", o.p, "failed container, 1-based (regen)");
    predict->add_option("--out", o.out, "output path (default stdout)");
    add_threads(predict);

    auto* exact = app.add_subcommand("exact", "exact expected stopping time for small instances");
    exact->add_option("--process", o.process, "ccp | scalar | array")
        ->required()
        ->check(CLI::IsMember({"ccp", "scalar", "array"}));
    exact->add_option("--n", o.n, "strands per container")->required()->check(CLI::PositiveNumber);
    exact->add_option("--m", o.m, "collectors (ccp) or data columns (scalar)")->check(CLI::PositiveNumber);
    exact->add_option("--rho", o.rho, "extra surviving columns (scalar)");
    exact->add_option("--l", o.ell, "copies required (ccp)")->check(CLI::PositiveNumber);
    exact->add_option("--code", o.code, "code spec (array)");
    exact->add_option("--p", o.p, "failed container, 1-based (array)");
    exact->add_option("--out", o.out, "output path (default stdout)");

    auto* gumbel = app.add_subcommand("gumbel-check", "KS distance of normalized samples from Gumbel(mu, beta)");
    gumbel->add_option("--samples", o.samples, "CSV written by simulate --emit-z")->required();
    gumbel->add_option("--mu", o.mu, "location")->required();
    gumbel->add_option("--beta", o.beta, "scale")->check(CLI::PositiveNumber);
    gumbel->add_option("--out", o.out, "output path (default stdout)");

    auto* manifest = app.add_subcommand("manifest", "re-run the command recorded in a manifest");
    manifest->add_option("file", o.manifest_file, "manifest JSON")->required();

    std::vector<const char*> cargv{"dss"};
    for (const auto& a : argv) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::Success& e) {
        app.exit(e);
        return kOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadInput;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(o, argv);
        if (analyze_cmd->parsed()) return cmd_analyze(o, argv);
        if (predict->parsed()) return cmd_predict(o);
        if (exact->parsed()) return cmd_exact(o);
        if (gumbel->parsed()) return cmd_gumbel_check(o);
        if (manifest->parsed()) return cmd_manifest(o);
    } catch (const Error& e) {
        std::fprintf(stderr, "dss: %s\n", e.what());
        return e.is_budget() ? kBudget : kBadInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "dss: %s\n", e.what());
        return kFailure;
    }
    return kBadInput;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args);
}
