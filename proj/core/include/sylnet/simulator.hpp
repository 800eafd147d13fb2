#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sylnet/metrics.hpp"
#include "sylnet/problem.hpp"
#include "sylnet/state.hpp"

namespace sylnet {

enum class IntegratorKind { euler, rk4 };
enum class InitKind { zeros, random };
enum class RunStatus { converged, horizon_reached, diverged };

struct SimConfig {
    Algorithm algorithm = Algorithm::least_squares;
    double step = 0.0; // <= 0 selects default_step(prob)
    double max_time = 500.0;
    IntegratorKind integrator = IntegratorKind::euler;
    double stop_tol = 1e-9; // +inf disables early stopping
    std::size_t record_every = 10;
    std::uint64_t seed = 0;
    InitKind init = InitKind::zeros;
    double init_scale = 1.0;
    unsigned threads = 1;
};

/// Throws validation_error on inconsistent settings. RK4 is rejected for
/// the regularized dynamics: its intermediate stages are meaningless on a
/// discontinuous field.
void validate_config(const SimConfig& cfg, const SylvesterProblem& prob);

/// Conservative default step 0.1 / (1 + ||A||_F^2 + ||B||_F^2 + 2 max_i L_ii).
double default_step(const SylvesterProblem& prob);

struct TraceSample {
    double t = 0.0;
    std::optional<double> estimation; // (1/n) sum ||X_i - X_ref||^2, when X_ref known
    double consensus = 0.0;
    double kkt = 0.0;
    std::optional<double> lyapunov; // when a reference equilibrium is supplied
    double field_norm = 0.0;
};

struct Trace {
    std::vector<TraceSample> samples;
};

/// Reference equilibrium for Lyapunov recording; h_star is required for
/// the regularized dynamics and ignored otherwise.
struct ReferenceEquilibrium {
    NetworkState state;
    std::vector<DenseMatrix> h_star;
};

struct RunResult {
    NetworkState state;
    Trace trace;
    RunStatus status = RunStatus::horizon_reached;
    double end_time = 0.0;
    std::size_t steps = 0;
};

/// Zeros or seeded uniform [-scale, scale] blocks.
NetworkState init_state(const SylvesterProblem& prob, const SimConfig& cfg);

/// One synchronous round: explicit Euler s + h f(s) or classical RK4.
/// Throws divergence_error if the result is not finite.
NetworkState step(const SylvesterProblem& prob, const NetworkState& s, const SimConfig& cfg);

/// Integrates until the field norm falls to stop_tol or time reaches
/// max_time, recording metrics every record_every steps and at the end.
RunResult run(const SylvesterProblem& prob, const SimConfig& cfg,
              const DenseMatrix* x_ref = nullptr,
              const ReferenceEquilibrium* reference = nullptr);

struct RateFit {
    double slope = 0.0;
    double r_squared = 0.0;
    std::size_t samples_used = 0;
};

/// Least-squares line through (t, ln E(t)) after dropping samples at the
/// 1e-14 floor and the first 20% of the rest (transient).
RateFit fit_rate(const Trace& trace);

/// CSV with header t,E,consensus,kkt,lyapunov,fieldnorm; unavailable
/// metrics are empty cells; 17 significant digits.
void write_trace_csv(std::ostream& os, const Trace& trace);
void write_trace_csv(const std::filesystem::path& path, const Trace& trace);
Trace read_trace_csv(const std::filesystem::path& path);

} // namespace sylnet
