// Command-line front end: instance generation, simulation runs, oracle
// certification, comparison reports and plot-data export.
//
// Exit codes: 0 success/converged/PASS, 1 usage or validation failure,
// 2 horizon reached/INCONCLUSIVE, 3 diverged/oracle failure/FAIL.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "sylnet/bundle.hpp"
#include "sylnet/dynamics.hpp"
#include "sylnet/generators.hpp"
#include "sylnet/kkt.hpp"
#include "sylnet/matrix_io.hpp"
#include "sylnet/metrics.hpp"
#include "sylnet/oracles.hpp"
#include "sylnet/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sylnet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitHorizon = 2;
constexpr int kExitDiverged = 3;

unsigned threads_from_env() {
    const char* env = std::getenv("SYLNET_THREADS");
    if (!env) return 1;
    const long v = std::strtol(env, nullptr, 10);
    return v > 0 ? static_cast<unsigned>(v) : 1;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open " + path.string());
    os << text;
}

void write_json(const fs::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

json read_json(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open " + path.string());
    json j;
    is >> j;
    return j;
}

std::string status_name(RunStatus s) {
    switch (s) {
        case RunStatus::converged: return "converged";
        case RunStatus::horizon_reached: return "horizon_reached";
        case RunStatus::diverged: return "diverged";
    }
    return "unknown";
}

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::least_squares: return "ls";
        case Algorithm::exact: return "exact";
        case Algorithm::regularized: return "reg";
    }
    return "unknown";
}

// ---- generate ----

struct GenerateArgs {
    std::string kind = "exact";
    std::size_t m = 8, r = 8, n = 4;
    std::string topology = "complete";
    double er_probability = 0.5;
    std::uint64_t seed = 0;
    std::string penalty = "none";
    double alpha = 0.0;
    std::string alpha_mode = "as-written";
    std::string out;
};

Network make_topology(const GenerateArgs& a) {
    if (a.topology == "complete") return complete_graph(a.n);
    if (a.topology == "ring") return ring_graph(a.n);
    if (a.topology == "path") return path_graph(a.n);
    if (a.topology == "er") return erdos_renyi_graph(a.n, a.er_probability, a.seed ^ 0x9e3779b97f4a7c15ull);
    throw validation_error("unknown topology " + a.topology);
}

int cmd_generate(const GenerateArgs& args) {
    const auto partition = BlockPartition::equal_blocks(args.m, args.r, args.n);
    const Network network = make_topology(args);

    PenaltySpec penalty = PenaltySpec::none();
    double agent_alpha = 0.0;
    if (args.penalty == "l1") {
        if (args.alpha <= 0.0)
            throw validation_error("--penalty l1 requires --alpha > 0");
        agent_alpha = args.alpha_mode == "centralized"
                          ? args.alpha / static_cast<double>(args.n)
                          : args.alpha;
        penalty = PenaltySpec::l1(agent_alpha);
    }

    const fs::path dir(args.out);
    std::optional<DenseMatrix> x_star;
    SylvesterProblem prob = [&] {
        if (args.kind == "exact") {
            auto [p, x] = gen_exact_instance(partition, network, args.seed);
            x_star = std::move(x);
            return p;
        }
        if (args.kind == "inconsistent")
            return gen_inconsistent_instance(partition, network, args.seed);
        throw validation_error("unknown kind " + args.kind);
    }();
    prob.penalty = penalty;
    write_problem_bundle(dir, prob, x_star ? &*x_star : nullptr);

    json manifest{
        {"kind", args.kind},
        {"m", args.m},
        {"r", args.r},
        {"n", args.n},
        {"topology", args.topology},
        {"seed", args.seed},
        {"partition", format_partition(partition)},
        {"penalty",
         {{"kind", args.penalty},
          {"alpha_input", args.alpha},
          {"alpha_mode", args.alpha_mode},
          {"alpha_per_agent", agent_alpha}}},
        {"files", {"A.mat", "B.mat", "C.mat", "partition.txt", "graph.txt", "penalty.txt"}},
        {"has_reference", x_star.has_value()},
    };
    if (args.topology == "er") manifest["er_probability"] = args.er_probability;
    write_json(dir / "manifest.json", manifest);
    std::cout << "bundle written to " << dir.string() << "\n";
    return kExitOk;
}

// ---- run ----

struct RunArgs {
    std::string bundle;
    std::string algorithm = "ls";
    std::string out;
    double step = 0.0;
    double max_time = 500.0;
    double stop_tol = 1e-9;
    std::size_t record_every = 10;
    std::uint64_t seed = 0;
    std::string init = "zeros";
    double init_scale = 1.0;
    std::string integrator = "euler";
    bool step_overridden = false;
};

Algorithm parse_algorithm(const std::string& name) {
    if (name == "ls") return Algorithm::least_squares;
    if (name == "exact") return Algorithm::exact;
    if (name == "reg") return Algorithm::regularized;
    throw validation_error("unknown algorithm " + name);
}

json rate_to_json(const std::optional<RateFit>& fit) {
    if (!fit) return nullptr;
    return json{{"slope", fit->slope}, {"r_squared", fit->r_squared},
                {"samples_used", fit->samples_used}};
}

json run_manifest_json(const RunArgs& args, const SimConfig& cfg, double h_used,
                       const json& report) {
    return json{
        {"problem", args.bundle},
        {"output", args.out},
        {"config",
         {{"algorithm", algorithm_name(cfg.algorithm)},
          {"step", h_used},
          {"step_source", args.step_overridden ? "override" : "default"},
          {"max_time", cfg.max_time},
          {"integrator", cfg.integrator == IntegratorKind::rk4 ? "rk4" : "euler"},
          {"stop_tol", cfg.stop_tol},
          {"record_every", cfg.record_every},
          {"seed", cfg.seed},
          {"init", cfg.init == InitKind::random ? "random" : "zeros"},
          {"init_scale", cfg.init_scale},
          {"threads", cfg.threads}}},
        {"report", report},
    };
}

int cmd_run(const RunArgs& args) {
    const SylvesterProblem prob = read_problem_bundle(args.bundle);
    const auto x_ref = read_bundle_reference(args.bundle);

    SimConfig cfg;
    cfg.algorithm = parse_algorithm(args.algorithm);
    cfg.step = args.step;
    cfg.max_time = args.max_time;
    cfg.stop_tol = args.stop_tol;
    cfg.record_every = args.record_every;
    cfg.seed = args.seed;
    cfg.init = args.init == "random" ? InitKind::random : InitKind::zeros;
    cfg.init_scale = args.init_scale;
    cfg.integrator = args.integrator == "rk4" ? IntegratorKind::rk4 : IntegratorKind::euler;
    cfg.threads = threads_from_env();
    validate_config(cfg, prob);

    const auto wall_start = std::chrono::steady_clock::now();
    const RunResult result = run(prob, cfg, x_ref ? &*x_ref : nullptr);
    const double wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

    const fs::path out(args.out);
    fs::create_directories(out);
    write_trace_csv(out / "trace.csv", result.trace);
    const DenseMatrix x_bar = mean_estimate(result.state);
    write_matrix(out / "X_bar.mat", x_bar);

    std::optional<RateFit> rate;
    try {
        rate = fit_rate(result.trace);
    } catch (const validation_error&) {
        // not enough decaying samples; reported as n/a
    }

    const TraceSample& last = result.trace.samples.back();
    const double run_residual = residual(prob, x_bar);
    json final_metrics{
        {"residual", run_residual},
        {"consensus", last.consensus},
        {"kkt", last.kkt},
        {"field_norm", last.field_norm},
        {"time", result.end_time},
        {"steps", result.steps},
    };
    if (last.estimation) final_metrics["estimation"] = *last.estimation;
    if (prob.penalty.kind == PenaltyKind::l1) {
        double distributed = 0.0;
        for (std::size_t i = 0; i < prob.agent_count(); ++i) {
            const AgentData d = agent_data(prob, i);
            const AgentState& a = result.state.agents[i];
            DenseMatrix blk = a.Z - d.C;
            multiply_add_into(blk, a.X, d.B);
            distributed += 0.5 * frobenius_inner(blk, blk);
            distributed += prob.penalty.alpha * entrywise_l1(a.X);
        }
        final_metrics["distributed_objective"] = distributed;
        final_metrics["consensus_objective"] = objective_value(prob, x_bar);
        final_metrics["l1_norm"] = entrywise_l1(x_bar);
    }

    json report{
        {"status", status_name(result.status)},
        {"final", final_metrics},
        {"rate", rate_to_json(rate)},
        {"oracle_comparison", nullptr},
    };
    write_json(out / "report.json", report);
    write_json(out / "manifest.json",
               run_manifest_json(args, cfg, args.step > 0.0 ? args.step : default_step(prob),
                                 report));

    std::ostringstream text;
    text << "status: " << status_name(result.status) << "\n"
         << "steps: " << result.steps << "  end_time: " << format_double(result.end_time) << "\n"
         << "residual(X_bar): " << format_double(run_residual) << "\n"
         << "consensus_error: " << format_double(last.consensus) << "\n"
         << "kkt_residual: " << format_double(last.kkt) << "\n"
         << "field_norm: " << format_double(last.field_norm) << "\n";
    if (last.estimation) text << "estimation_error: " << format_double(*last.estimation) << "\n";
    if (rate)
        text << "rate_fit: slope " << format_double(rate->slope) << ", r^2 "
             << format_double(rate->r_squared) << " (first 20% of samples discarded)\n";
    else
        text << "rate_fit: n/a\n";
    // footer; everything below the divider varies between invocations
    text << "---\n";
    {
        std::time_t now = std::time(nullptr);
        char stamp[64];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        text << "wall_time_s: " << wall_s << "\ngenerated_at: " << stamp << "\n";
    }
    write_text(out / "report.txt", text.str());

    std::cout << "status: " << status_name(result.status) << " (residual "
              << format_double(run_residual) << ")\n";
    switch (result.status) {
        case RunStatus::converged: return kExitOk;
        case RunStatus::horizon_reached: return kExitHorizon;
        case RunStatus::diverged:
            std::cout << "integration diverged at step "
                      << format_double(args.step > 0.0 ? args.step : default_step(prob))
                      << "; try halving the step\n";
            return kExitDiverged;
    }
    return kExitOk;
}

// ---- oracle ----

int cmd_oracle(const std::string& bundle, const std::string& out_dir) {
    const SylvesterProblem prob = read_problem_bundle(bundle);
    const fs::path out(out_dir);
    fs::create_directories(out);

    const OracleSolution ls = oracle_least_squares(prob);
    json report{
        {"least_squares",
         {{"residual", ls.residual},
          {"objective", ls.objective},
          {"unique", ls.unique},
          {"minimal_residual", ls.minimal_residual}}},
        {"regularized", nullptr},
    };
    write_matrix(out / "X_ls.mat", ls.X_star);

    if (prob.penalty.kind == PenaltyKind::l1) {
        const OracleSolution reg = oracle_regularized(prob);
        report["regularized"] = {{"residual", reg.residual},
                                 {"objective", reg.objective},
                                 {"unique", reg.unique},
                                 {"l1_norm", entrywise_l1(reg.X_star)},
                                 {"alpha_effective", prob.effective_alpha()}};
        write_matrix(out / "X_reg.mat", reg.X_star);
        write_matrix(out / "X_oracle.mat", reg.X_star);
    } else {
        write_matrix(out / "X_oracle.mat", ls.X_star);
    }
    write_json(out / "oracle.json", report);

    std::cout << "oracle residual: " << format_double(ls.residual)
              << "  unique: " << (ls.unique ? "true" : "false") << "\n";
    return kExitOk;
}

// ---- compare ----

struct CompareArgs {
    std::string bundle;
    std::string run_dir;
    double est_tol = 1e-5;
    double res_tol = 1e-4;
    double obj_tol = 1e-3;
};

int cmd_compare(const CompareArgs& args) {
    const SylvesterProblem prob = read_problem_bundle(args.bundle);
    const fs::path run_dir(args.run_dir);
    const json report = read_json(run_dir / "report.json");
    const json manifest = read_json(run_dir / "manifest.json");
    const DenseMatrix x_bar = read_matrix(run_dir / "X_bar.mat");
    const std::string status = report.at("status");
    const std::string algo = manifest.at("config").at("algorithm");

    json cmp{{"status", status}, {"algorithm", algo}};
    std::ostringstream text;

    if (status != "converged") {
        cmp["verdict"] = "INCONCLUSIVE";
        write_json(run_dir / "compare.json", cmp);
        std::cout << "INCONCLUSIVE: run status is " << status << "\n";
        return status == "diverged" ? kExitDiverged : kExitHorizon;
    }

    bool pass = true;
    if (algo == "reg") {
        const OracleSolution reg = oracle_regularized(prob);
        const double run_obj = objective_value(prob, x_bar);
        const double gap = std::abs(run_obj - reg.objective);
        const bool ok = gap <= args.obj_tol * (1.0 + std::abs(reg.objective));
        pass = ok;
        cmp["objective"] = {{"run", run_obj},
                            {"oracle", reg.objective},
                            {"gap", gap},
                            {"tolerance", args.obj_tol},
                            {"pass", ok}};
        text << "objective: run " << format_double(run_obj) << " oracle "
             << format_double(reg.objective) << " gap " << format_double(gap)
             << (ok ? " PASS" : " FAIL") << "\n";
        cmp["l1_norm"] = {{"run", entrywise_l1(x_bar)}, {"oracle", entrywise_l1(reg.X_star)}};
    } else {
        const OracleSolution ls = oracle_least_squares(prob);
        const double run_res = residual(prob, x_bar);
        const double abs_gap = std::abs(run_res - ls.residual);
        const double rel_gap = abs_gap / (1.0 + ls.residual);
        const bool res_ok = abs_gap <= args.res_tol * (1.0 + ls.residual);
        pass = res_ok;
        cmp["residual"] = {{"run", run_res},
                           {"oracle", ls.residual},
                           {"gap_abs", abs_gap},
                           {"gap_rel", rel_gap},
                           {"tolerance", args.res_tol},
                           {"pass", res_ok}};
        text << "residual: run " << format_double(run_res) << " oracle "
             << format_double(ls.residual) << " |gap| " << format_double(abs_gap) << " (rel "
             << format_double(rel_gap) << ")" << (res_ok ? " PASS" : " FAIL") << "\n";
        if (ls.unique) {
            const double est = frobenius_norm(x_bar - ls.X_star);
            const bool est_ok = est <= args.est_tol;
            pass = pass && est_ok;
            cmp["estimation"] = {{"error", est}, {"tolerance", args.est_tol}, {"pass", est_ok}};
            text << "estimation vs unique X*: " << format_double(est)
                 << (est_ok ? " PASS" : " FAIL") << "\n";
        }
    }

    cmp["verdict"] = pass ? "PASS" : "FAIL";
    write_json(run_dir / "compare.json", cmp);
    text << (pass ? "PASS" : "FAIL") << "\n";
    std::cout << text.str();
    return pass ? kExitOk : kExitDiverged;
}

// ---- export ----

int cmd_export(const std::string& run_dir, std::string out_file) {
    const fs::path dir(run_dir);
    const Trace trace = read_trace_csv(dir / "trace.csv");
    if (out_file.empty()) out_file = (dir / "plot.csv").string();

    std::ofstream os(out_file);
    if (!os) throw io_error("cannot open " + out_file);
    os << "t,log10_E,log10_consensus,log10_kkt,log10_fieldnorm,lyapunov\n";
    auto log_cell = [](std::ostream& o, double v) {
        if (v > 0.0) o << format_double(std::log10(v));
    };
    for (const TraceSample& s : trace.samples) {
        os << format_double(s.t) << ',';
        if (s.estimation) log_cell(os, *s.estimation);
        os << ',';
        log_cell(os, s.consensus);
        os << ',';
        log_cell(os, s.kkt);
        os << ',';
        log_cell(os, s.field_norm);
        os << ',';
        if (s.lyapunov) os << format_double(*s.lyapunov);
        os << '\n';
    }
    std::cout << "plot data written to " << out_file << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributed Sylvester equation solver over simulated multi-agent networks"};
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* g = app.add_subcommand("generate", "generate a problem bundle");
    g->add_option("--kind", gen.kind, "exact|inconsistent")
        ->check(CLI::IsMember({"exact", "inconsistent"}));
    g->add_option("--m", gen.m, "row dimension")->required();
    g->add_option("--r", gen.r, "column dimension")->required();
    g->add_option("--n", gen.n, "agent count")->required();
    g->add_option("--topology", gen.topology, "complete|ring|path|er")
        ->check(CLI::IsMember({"complete", "ring", "path", "er"}));
    g->add_option("--er-p", gen.er_probability, "edge probability for er topology");
    g->add_option("--seed", gen.seed, "generator seed")->required();
    g->add_option("--penalty", gen.penalty, "none|l1")->check(CLI::IsMember({"none", "l1"}));
    g->add_option("--alpha", gen.alpha, "L1 weight");
    g->add_option("--alpha-mode", gen.alpha_mode,
                  "as-written: alpha per agent; centralized: alpha/n per agent")
        ->check(CLI::IsMember({"as-written", "centralized"}));
    g->add_option("--out", gen.out, "output bundle directory")->required();

    RunArgs runa;
    CLI::App* r = app.add_subcommand("run", "simulate a distributed algorithm on a bundle");
    r->add_option("--bundle", runa.bundle, "problem bundle directory")->required();
    r->add_option("--algorithm", runa.algorithm, "ls|exact|reg")
        ->check(CLI::IsMember({"ls", "exact", "reg"}));
    r->add_option("--out", runa.out, "output run directory")->required();
    CLI::Option* step_opt = r->add_option("--step", runa.step, "integration step (default: auto)");
    r->add_option("--max-time", runa.max_time, "time horizon");
    r->add_option("--stop-tol", runa.stop_tol, "field-norm stopping tolerance (inf disables)");
    r->add_option("--record-every", runa.record_every, "trace sampling stride in steps");
    r->add_option("--seed", runa.seed, "initialization seed");
    r->add_option("--init", runa.init, "zeros|random")->check(CLI::IsMember({"zeros", "random"}));
    r->add_option("--init-scale", runa.init_scale, "random initialization scale");
    r->add_option("--integrator", runa.integrator, "euler|rk4")
        ->check(CLI::IsMember({"euler", "rk4"}));

    std::string oracle_bundle, oracle_out;
    CLI::App* o = app.add_subcommand("oracle", "centralized certification of a bundle");
    o->add_option("--bundle", oracle_bundle, "problem bundle directory")->required();
    o->add_option("--out", oracle_out, "output directory")->required();

    CompareArgs cmp;
    CLI::App* c = app.add_subcommand("compare", "compare a run against the oracle");
    c->add_option("--bundle", cmp.bundle, "problem bundle directory")->required();
    c->add_option("--run", cmp.run_dir, "run output directory")->required();
    c->add_option("--est-tol", cmp.est_tol, "estimation error tolerance");
    c->add_option("--res-tol", cmp.res_tol, "relative residual tolerance");
    c->add_option("--obj-tol", cmp.obj_tol, "relative objective tolerance");

    std::string export_run, export_out;
    CLI::App* x = app.add_subcommand("export", "write log-scale plot data from a run trace");
    x->add_option("--run", export_run, "run output directory")->required();
    x->add_option("--out", export_out, "output csv (default: <run>/plot.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (g->parsed()) return cmd_generate(gen);
        if (r->parsed()) {
            runa.step_overridden = step_opt->count() > 0;
            return cmd_run(runa);
        }
        if (o->parsed()) return cmd_oracle(oracle_bundle, oracle_out);
        if (c->parsed()) return cmd_compare(cmp);
        if (x->parsed()) return cmd_export(export_run, export_out);
    } catch (const oracle_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const divergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
