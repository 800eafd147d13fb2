#include <benchmark/benchmark.h>

#include "sylnet/dynamics.hpp"
#include "sylnet/generators.hpp"
#include "sylnet/oracles.hpp"
#include "sylnet/simulator.hpp"

using namespace sylnet;

namespace {

std::pair<SylvesterProblem, DenseMatrix> bench_instance(std::size_t m, std::size_t n) {
    auto part = BlockPartition::equal_blocks(m, m, n);
    return gen_exact_instance(part, complete_graph(n), 1);
}

void bm_field_least_squares(benchmark::State& state) {
    auto [prob, x_star] = bench_instance(8, 8);
    DynamicsWorkspace ws(prob);
    SimConfig cfg;
    cfg.init = InitKind::random;
    NetworkState s = init_state(prob, cfg);
    NetworkDerivative d = make_zero_derivative(prob.partition, Algorithm::least_squares);
    for (auto _ : state) {
        vf_least_squares(prob, ws, s, d);
        benchmark::DoNotOptimize(d.agents[0].X(0, 0));
    }
}
BENCHMARK(bm_field_least_squares);

void bm_field_exact(benchmark::State& state) {
    auto [prob, x_star] = bench_instance(8, 8);
    DynamicsWorkspace ws(prob);
    SimConfig cfg;
    cfg.algorithm = Algorithm::exact;
    cfg.init = InitKind::random;
    NetworkState s = init_state(prob, cfg);
    NetworkDerivative d = make_zero_derivative(prob.partition, Algorithm::exact);
    for (auto _ : state) {
        vf_exact(prob, ws, s, d);
        benchmark::DoNotOptimize(d.agents[0].X(0, 0));
    }
}
BENCHMARK(bm_field_exact);

void bm_field_regularized(benchmark::State& state) {
    auto [prob, x_star] = bench_instance(8, 8);
    prob.penalty = PenaltySpec::l1(0.1);
    DynamicsWorkspace ws(prob);
    SimConfig cfg;
    cfg.algorithm = Algorithm::regularized;
    cfg.init = InitKind::random;
    NetworkState s = init_state(prob, cfg);
    NetworkDerivative d = make_zero_derivative(prob.partition, Algorithm::regularized);
    for (auto _ : state) {
        vf_regularized(prob, ws, s, d);
        benchmark::DoNotOptimize(d.agents[0].X(0, 0));
    }
}
BENCHMARK(bm_field_regularized);

void bm_euler_step(benchmark::State& state) {
    auto [prob, x_star] = bench_instance(8, 8);
    SimConfig cfg;
    cfg.init = InitKind::random;
    NetworkState s = init_state(prob, cfg);
    for (auto _ : state) {
        s = step(prob, s, cfg);
        benchmark::DoNotOptimize(s.agents[0].X(0, 0));
    }
}
BENCHMARK(bm_euler_step);

void bm_oracle_least_squares(benchmark::State& state) {
    auto [prob, x_star] = bench_instance(8, 4);
    for (auto _ : state) {
        OracleSolution sol = oracle_least_squares(prob);
        benchmark::DoNotOptimize(sol.residual);
    }
}
BENCHMARK(bm_oracle_least_squares);

} // namespace

BENCHMARK_MAIN();
