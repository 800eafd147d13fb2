#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "sylnet/dynamics.hpp"
#include "sylnet/generators.hpp"
#include "sylnet/kkt.hpp"
#include "sylnet/oracles.hpp"
#include "sylnet/simulator.hpp"
#include "test_helpers.hpp"

using namespace sylnet;
using sylnet_test::max_abs_diff;
using sylnet_test::small_exact_problem;

TEST_SUITE_BEGIN("simulator");

TEST_CASE("initial states are deterministic under the seed") {
    auto [prob, x_star] = small_exact_problem(3, 3, 3, 101);
    SimConfig cfg;
    cfg.init = InitKind::random;
    cfg.seed = 5;
    NetworkState a = init_state(prob, cfg);
    NetworkState b = init_state(prob, cfg);
    CHECK(half_squared_distance(a, b) == 0.0);

    cfg.seed = 6;
    NetworkState c = init_state(prob, cfg);
    CHECK(half_squared_distance(a, c) > 0.0);

    cfg.init_scale = 0.0;
    NetworkState zeros = init_state(prob, cfg);
    CHECK(state_norm(zeros) == 0.0);
    SimConfig zcfg;
    CHECK(half_squared_distance(zeros, init_state(prob, zcfg)) == 0.0);
}

TEST_CASE("config validation") {
    auto [prob, x_star] = small_exact_problem(3, 3, 3, 102);
    SimConfig cfg;
    cfg.step = 10.0;
    cfg.max_time = 1.0;
    CHECK_THROWS_AS(validate_config(cfg, prob), validation_error);

    SimConfig reg;
    reg.algorithm = Algorithm::regularized;
    CHECK_THROWS_AS(validate_config(reg, prob), validation_error); // no penalty

    SylvesterProblem with_pen = prob;
    with_pen.penalty = PenaltySpec::l1(0.1);
    reg.integrator = IntegratorKind::rk4;
    CHECK_THROWS_AS(validate_config(reg, with_pen), validation_error);
    reg.integrator = IntegratorKind::euler;
    CHECK_NOTHROW(validate_config(reg, with_pen));
}

TEST_CASE("a zero-field point is a fixed point of the step") {
    BlockPartition p({1, 1}, {1, 1});
    SylvesterProblem zero(DenseMatrix(2, 2), DenseMatrix(2, 2), DenseMatrix(2, 2), p,
                          complete_graph(2));
    NetworkState s = make_zero_state(p, Algorithm::least_squares);
    SimConfig cfg;
    cfg.step = 0.05;
    NetworkState next = step(zero, s, cfg);
    CHECK(half_squared_distance(s, next) == 0.0);
}

TEST_CASE("the least-squares step is affine in the state") {
    auto [prob, x_star] = small_exact_problem(3, 3, 3, 103);
    SimConfig cfg;
    cfg.step = 0.01;
    SimConfig rnd = cfg;
    rnd.init = InitKind::random;

    rnd.seed = 1;
    NetworkState s1 = init_state(prob, rnd);
    rnd.seed = 2;
    NetworkState s2 = init_state(prob, rnd);
    NetworkState s0 = init_state(prob, cfg); // zeros

    NetworkState lhs = state_sub(state_add(step(prob, s1, cfg), step(prob, s2, cfg)),
                                 step(prob, s0, cfg));
    NetworkState rhs = step(prob, state_add(s1, s2), cfg);
    const double diff = std::sqrt(2.0 * half_squared_distance(lhs, rhs));
    CHECK(diff <= 1e-10);
}

TEST_CASE("Euler and RK4 agree to second order on a smooth instance") {
    auto [prob, x_star] = small_exact_problem(3, 3, 2, 104);
    SimConfig rnd;
    rnd.init = InitKind::random;
    rnd.seed = 7;
    rnd.init_scale = 0.5;
    NetworkState s = init_state(prob, rnd);

    for (double h : {1e-3, 5e-4}) {
        SimConfig euler;
        euler.step = h;
        SimConfig rk4 = euler;
        rk4.integrator = IntegratorKind::rk4;
        const double diff = std::sqrt(
            2.0 * half_squared_distance(step(prob, s, euler), step(prob, s, rk4)));
        CHECK(diff <= 10.0 * h * h);
    }
}

TEST_CASE("huge steps diverge and report the step size") {
    auto [prob, x_star] = small_exact_problem(4, 4, 2, 105);
    SimConfig cfg;
    cfg.step = 1e6;
    cfg.max_time = 1e9;
    cfg.init = InitKind::random;
    NetworkState s = init_state(prob, cfg);
    NetworkState s2 = step(prob, s, cfg); // one huge step is finite
    try {
        for (int k = 0; k < 50; ++k) s2 = step(prob, s2, cfg);
        FAIL("expected divergence_error");
    } catch (const divergence_error& e) {
        CHECK(std::string(e.what()).find("halving") != std::string::npos);
    }

    cfg.stop_tol = 0.0;
    RunResult res = run(prob, cfg);
    CHECK(res.status == RunStatus::diverged);
}

TEST_CASE("exact instances are solved to consensus by the reduced flow") {
    auto [prob, x_star] = small_exact_problem(4, 4, 2, 1);
    SimConfig cfg;
    cfg.algorithm = Algorithm::exact;
    cfg.stop_tol = 1e-11;
    cfg.max_time = 4000.0;
    RunResult res = run(prob, cfg, &x_star);
    CHECK(res.status == RunStatus::converged);
    CHECK(consensus_error(res.state) <= 1e-10);
    CHECK(estimation_error(res.state, x_star) <= 1e-10);
    CHECK(res.trace.samples.back().field_norm <= 1e-11);
}

TEST_CASE("with stopping disabled the run takes exactly ceil(T/h) steps") {
    auto [prob, x_star] = small_exact_problem(3, 3, 3, 106);
    SimConfig cfg;
    cfg.step = 0.3;
    cfg.max_time = 1.0;
    cfg.stop_tol = std::numeric_limits<double>::infinity();
    RunResult res = run(prob, cfg);
    CHECK(res.status == RunStatus::horizon_reached);
    CHECK(res.steps == 4);

    cfg.step = 0.1;
    res = run(prob, cfg);
    CHECK(res.steps == 10);
}

TEST_CASE("the full flow attains the oracle residual on an inconsistent instance") {
    auto part = BlockPartition::equal_blocks(4, 4, 4);
    SylvesterProblem prob = gen_inconsistent_instance(part, ring_graph(4), 2);
    OracleSolution sol = oracle_least_squares(prob);

    SimConfig cfg;
    cfg.stop_tol = 1e-9;
    cfg.max_time = 4000.0;
    RunResult res = run(prob, cfg);
    CHECK(res.status == RunStatus::converged);
    const double run_res = residual(prob, mean_estimate(res.state));
    CHECK(std::abs(run_res - sol.residual) <= 1e-4 * (1.0 + sol.residual));
}

TEST_CASE("rate fit recovers a synthetic exponential") {
    Trace trace;
    for (int k = 0; k <= 100; ++k) {
        TraceSample s;
        s.t = 0.1 * k;
        s.estimation = std::exp(-3.0 * s.t);
        trace.samples.push_back(s);
    }
    RateFit fit = fit_rate(trace);
    CHECK(std::abs(fit.slope + 3.0) <= 1e-6);
    CHECK(fit.r_squared >= 0.999999);
}

TEST_CASE("rate fit of a constant trace is flat") {
    Trace trace;
    for (int k = 0; k < 40; ++k) {
        TraceSample s;
        s.t = 0.5 * k;
        s.estimation = 2.5;
        trace.samples.push_back(s);
    }
    RateFit fit = fit_rate(trace);
    CHECK(fit.slope == 0.0);
    CHECK(fit.r_squared == 1.0);
}

TEST_CASE("rate fit requires enough samples above the floor") {
    Trace trace;
    for (int k = 0; k < 8; ++k) {
        TraceSample s;
        s.t = k;
        s.estimation = 1.0;
        trace.samples.push_back(s);
    }
    CHECK_THROWS_AS(fit_rate(trace), validation_error);
}

TEST_CASE("limits are robust to halving the step") {
    auto [prob, x_star] = small_exact_problem(3, 3, 3, 107);
    SimConfig cfg;
    cfg.stop_tol = 1e-10;
    cfg.max_time = 4000.0;
    RunResult full = run(prob, cfg);
    SimConfig halved = cfg;
    halved.step = 0.5 * default_step(prob);
    RunResult half = run(prob, halved);
    REQUIRE(full.status == RunStatus::converged);
    REQUIRE(half.status == RunStatus::converged);
    CHECK(frobenius_norm(mean_estimate(full.state) - mean_estimate(half.state)) <= 1e-4);
}

TEST_CASE("consensus error at convergence is bounded by the stop tolerance") {
    auto [prob, x_star] = small_exact_problem(4, 4, 2, 108);
    SimConfig cfg;
    cfg.stop_tol = 1e-6;
    cfg.max_time = 4000.0;
    RunResult res = run(prob, cfg);
    REQUIRE(res.status == RunStatus::converged);
    CHECK(consensus_error(res.state) <= 10.0 * cfg.stop_tol * cfg.stop_tol);
}

TEST_CASE("two random starts on a singular instance converge to equilibria") {
    auto part = BlockPartition::equal_blocks(3, 3, 3);
    auto [prob, x0] = gen_singular_consistent_instance(part, complete_graph(3), 109);
    SimConfig cfg;
    cfg.init = InitKind::random;
    cfg.stop_tol = 1e-9;
    cfg.max_time = 4000.0;

    cfg.seed = 1;
    RunResult r1 = run(prob, cfg);
    cfg.seed = 2;
    RunResult r2 = run(prob, cfg);
    REQUIRE(r1.status == RunStatus::converged);
    REQUIRE(r2.status == RunStatus::converged);
    CHECK(kkt_residual_ls(prob, r1.state) <= 1e-6);
    CHECK(kkt_residual_ls(prob, r2.state) <= 1e-6);
    CHECK(residual(prob, mean_estimate(r1.state)) <= 1e-6);
    CHECK(residual(prob, mean_estimate(r2.state)) <= 1e-6);
}

TEST_CASE("Lyapunov samples decay along a least-squares run") {
    auto [prob, x_star] = small_exact_problem(3, 3, 2, 110);
    ReferenceEquilibrium ref{build_kkt_point_ls(prob, oracle_least_squares(prob).X_star), {}};
    SimConfig cfg;
    cfg.step = 1e-3;
    cfg.max_time = 5.0;
    cfg.record_every = 50;
    cfg.init = InitKind::random;
    cfg.seed = 3;
    cfg.stop_tol = 0.0;
    RunResult res = run(prob, cfg, nullptr, &ref);
    REQUIRE(res.trace.samples.size() > 10);
    for (std::size_t k = 1; k < res.trace.samples.size(); ++k) {
        REQUIRE(res.trace.samples[k].lyapunov.has_value());
        CHECK(*res.trace.samples[k].lyapunov <=
              *res.trace.samples[k - 1].lyapunov + 1e-6);
    }
}

TEST_CASE("trace CSV format and round trip") {
    Trace trace;
    TraceSample a;
    a.t = 0.0;
    a.consensus = 1.0;
    a.kkt = 2.0;
    a.field_norm = 3.0;
    trace.samples.push_back(a);
    TraceSample b;
    b.t = 0.5;
    b.estimation = 0.25;
    b.consensus = 0.125;
    b.kkt = 1.5;
    b.lyapunov = 9.0;
    b.field_norm = 2.5;
    trace.samples.push_back(b);

    std::ostringstream os;
    write_trace_csv(os, trace);
    const std::string text = os.str();
    CHECK(text.find("t,E,consensus,kkt,lyapunov,fieldnorm\n") == 0);
    CHECK(text.find("0,,1,2,,3\n") != std::string::npos);

    const auto path = std::filesystem::temp_directory_path() / "sylnet_trace_test.csv";
    write_trace_csv(path, trace);
    Trace back = read_trace_csv(path);
    REQUIRE(back.samples.size() == 2);
    CHECK_FALSE(back.samples[0].estimation.has_value());
    CHECK(back.samples[1].estimation == 0.25);
    CHECK(back.samples[1].lyapunov == 9.0);
    CHECK(back.samples[0].field_norm == 3.0);
    std::filesystem::remove(path);
}

TEST_SUITE_END();
