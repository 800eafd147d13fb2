#include "sylnet/simulator.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sylnet/dynamics.hpp"
#include "sylnet/generators.hpp"
#include "sylnet/kkt.hpp"
#include "sylnet/matrix_io.hpp"

namespace sylnet {

void validate_config(const SimConfig& cfg, const SylvesterProblem& prob) {
    const double h = cfg.step > 0.0 ? cfg.step : default_step(prob);
    if (!(h > 0.0) || !std::isfinite(h))
        throw validation_error("SimConfig: step must be positive and finite");
    if (!(cfg.max_time > 0.0))
        throw validation_error("SimConfig: max_time must be positive");
    if (h >= cfg.max_time)
        throw validation_error("SimConfig: step must be smaller than max_time");
    if (cfg.record_every == 0)
        throw validation_error("SimConfig: record_every must be positive");
    if (cfg.init_scale < 0.0)
        throw validation_error("SimConfig: init scale must be nonnegative");
    if (cfg.algorithm == Algorithm::regularized) {
        if (prob.penalty.kind != PenaltyKind::l1)
            throw validation_error("SimConfig: regularized run requires an L1 penalty in the problem");
        if (cfg.integrator == IntegratorKind::rk4)
            throw validation_error("SimConfig: RK4 is not defined for the nonsmooth regularized field");
    }
}

double default_step(const SylvesterProblem& prob) {
    const DenseMatrix lap = laplacian(prob.network);
    double max_degree = 0.0;
    for (std::size_t i = 0; i < lap.rows(); ++i) max_degree = std::max(max_degree, lap(i, i));
    const double na = frobenius_norm(prob.A);
    const double nb = frobenius_norm(prob.B);
    return 0.1 / (1.0 + na * na + nb * nb + 2.0 * max_degree);
}

NetworkState init_state(const SylvesterProblem& prob, const SimConfig& cfg) {
    NetworkState s = make_zero_state(prob.partition, cfg.algorithm);
    if (cfg.init == InitKind::random && cfg.init_scale > 0.0) {
        Rng rng(cfg.seed);
        for (AgentState& a : s.agents)
            for (DenseMatrix* b : a.blocks())
                for (double& v : b->data()) v = rng.uniform(-cfg.init_scale, cfg.init_scale);
    }
    return s;
}

namespace {

class Stepper {
public:
    Stepper(const SylvesterProblem& prob, const SimConfig& cfg)
        : prob_(prob), ws_(prob), cfg_(cfg),
          h_(cfg.step > 0.0 ? cfg.step : default_step(prob)),
          k1_(make_zero_derivative(prob.partition, cfg.algorithm)),
          k2_(make_zero_derivative(prob.partition, cfg.algorithm)),
          k3_(make_zero_derivative(prob.partition, cfg.algorithm)),
          k4_(make_zero_derivative(prob.partition, cfg.algorithm)) {}

    double step_size() const { return h_; }

    /// Field norm at s; leaves the field cached for the following advance.
    double field_norm(const NetworkState& s) {
        evaluate_field(prob_, ws_, cfg_.algorithm, s, k1_, cfg_.threads);
        return derivative_norm(k1_);
    }

    /// Advances s in place using the field cached by field_norm(s).
    void advance(NetworkState& s) {
        if (cfg_.integrator == IntegratorKind::euler) {
            state_axpy(s, h_, k1_);
        } else {
            tmp_ = s;
            state_axpy(tmp_, 0.5 * h_, k1_);
            evaluate_field(prob_, ws_, cfg_.algorithm, tmp_, k2_, cfg_.threads);
            tmp_ = s;
            state_axpy(tmp_, 0.5 * h_, k2_);
            evaluate_field(prob_, ws_, cfg_.algorithm, tmp_, k3_, cfg_.threads);
            tmp_ = s;
            state_axpy(tmp_, h_, k3_);
            evaluate_field(prob_, ws_, cfg_.algorithm, tmp_, k4_, cfg_.threads);
            state_axpy(s, h_ / 6.0, k1_);
            state_axpy(s, h_ / 3.0, k2_);
            state_axpy(s, h_ / 3.0, k3_);
            state_axpy(s, h_ / 6.0, k4_);
        }
        if (!state_is_finite(s))
            throw divergence_error("integration diverged at step size " + format_double(h_) +
                                   "; try halving the step");
    }

private:
    const SylvesterProblem& prob_;
    DynamicsWorkspace ws_;
    SimConfig cfg_;
    double h_;
    NetworkDerivative k1_, k2_, k3_, k4_;
    NetworkState tmp_;
};

double lyapunov_sample(const SylvesterProblem& prob, const SimConfig& cfg, const NetworkState& s,
                       const ReferenceEquilibrium& ref) {
    if (cfg.algorithm == Algorithm::regularized) {
        // Reference validated once by run(); recompute only the value here.
        const double alpha = prob.penalty.alpha;
        double v = half_squared_distance(s, ref.state);
        for (std::size_t i = 0; i < s.agent_count(); ++i) {
            const AgentData d = agent_data(prob, i);
            const DenseMatrix dx = s.agents[i].X - ref.state.agents[i].X;
            const DenseMatrix adx = d.A * dx;
            const DenseMatrix dxb = dx * d.B;
            v += 0.5 * frobenius_inner(adx, adx) + 0.5 * frobenius_inner(dxb, dxb);
            v += alpha * (entrywise_l1(s.agents[i].X) - entrywise_l1(ref.state.agents[i].X) -
                          frobenius_inner(ref.h_star[i], dx));
        }
        for (std::size_t i = 0; i < s.agent_count(); ++i)
            for (std::size_t j : prob.network.neighbors(i)) {
                const DenseMatrix d = s.agents[i].X - s.agents[j].X;
                v += 0.25 * prob.network.weight(i, j) * frobenius_inner(d, d);
            }
        return v;
    }
    return half_squared_distance(s, ref.state);
}

} // namespace

NetworkState step(const SylvesterProblem& prob, const NetworkState& s, const SimConfig& cfg) {
    validate_config(cfg, prob);
    Stepper stepper(prob, cfg);
    NetworkState next = s;
    stepper.field_norm(next);
    stepper.advance(next);
    return next;
}

RunResult run(const SylvesterProblem& prob, const SimConfig& cfg, const DenseMatrix* x_ref,
              const ReferenceEquilibrium* reference) {
    validate_config(cfg, prob);
    if (reference) {
        const double res = kkt_residual(prob, reference->state, cfg.algorithm);
        if (res > 1e-9)
            throw validation_error("run: reference state is not an equilibrium (KKT residual " +
                                   std::to_string(res) + ")");
        if (cfg.algorithm == Algorithm::regularized &&
            reference->h_star.size() != prob.agent_count())
            throw validation_error("run: regularized reference needs one h* per agent");
    }

    Stepper stepper(prob, cfg);
    const double h = stepper.step_size();
    const auto target_steps =
        static_cast<std::size_t>(std::ceil(cfg.max_time / h - 1e-9));

    RunResult result;
    result.state = init_state(prob, cfg);
    NetworkState& s = result.state;

    std::size_t last_recorded = static_cast<std::size_t>(-1);
    auto record = [&](std::size_t steps, double t, double fnorm) {
        TraceSample sample;
        sample.t = t;
        if (x_ref) sample.estimation = estimation_error(s, *x_ref);
        sample.consensus = consensus_error(s);
        sample.kkt = kkt_residual(prob, s, cfg.algorithm);
        if (reference) sample.lyapunov = lyapunov_sample(prob, cfg, s, *reference);
        sample.field_norm = fnorm;
        result.trace.samples.push_back(sample);
        last_recorded = steps;
    };

    std::size_t steps = 0;
    for (;;) {
        const double t = static_cast<double>(steps) * h;
        const double fnorm = stepper.field_norm(s);
        const bool converged = std::isfinite(cfg.stop_tol) && fnorm <= cfg.stop_tol;
        const bool horizon = steps >= target_steps;
        if (steps % cfg.record_every == 0 || converged || horizon) {
            if (last_recorded != steps) record(steps, t, fnorm);
        }
        if (converged) {
            result.status = RunStatus::converged;
            break;
        }
        if (horizon) {
            result.status = RunStatus::horizon_reached;
            break;
        }
        try {
            stepper.advance(s);
        } catch (const divergence_error&) {
            result.status = RunStatus::diverged;
            break;
        }
        ++steps;
    }
    result.steps = steps;
    result.end_time = static_cast<double>(steps) * h;
    return result;
}

RateFit fit_rate(const Trace& trace) {
    std::vector<std::pair<double, double>> pts;
    for (const TraceSample& s : trace.samples)
        if (s.estimation && *s.estimation > 1e-14) pts.push_back({s.t, std::log(*s.estimation)});
    if (pts.size() < 10)
        throw validation_error("fit_rate: need at least 10 samples above the 1e-14 floor, have " +
                               std::to_string(pts.size()));
    const std::size_t drop = pts.size() / 5;
    pts.erase(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(drop));

    const double n = static_cast<double>(pts.size());
    double mt = 0.0, my = 0.0;
    for (auto& [t, y] : pts) {
        mt += t;
        my += y;
    }
    mt /= n;
    my /= n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (auto& [t, y] : pts) {
        stt += (t - mt) * (t - mt);
        sty += (t - mt) * (y - my);
        syy += (y - my) * (y - my);
    }
    RateFit fit;
    fit.samples_used = pts.size();
    if (stt <= 0.0) return fit;
    fit.slope = sty / stt;
    const double ss_res = syy - sty * sty / stt;
    fit.r_squared = syy <= 1e-30 ? 1.0 : std::max(0.0, 1.0 - ss_res / syy);
    return fit;
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
    os << "t,E,consensus,kkt,lyapunov,fieldnorm\n";
    for (const TraceSample& s : trace.samples) {
        os << format_double(s.t) << ',';
        if (s.estimation) os << format_double(*s.estimation);
        os << ',' << format_double(s.consensus) << ',' << format_double(s.kkt) << ',';
        if (s.lyapunov) os << format_double(*s.lyapunov);
        os << ',' << format_double(s.field_norm) << '\n';
    }
}

void write_trace_csv(const std::filesystem::path& path, const Trace& trace) {
    std::ofstream os(path);
    if (!os) throw io_error("write_trace_csv: cannot open " + path.string());
    write_trace_csv(os, trace);
}

Trace read_trace_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw io_error("read_trace_csv: cannot open " + path.string());
    std::string line;
    if (!std::getline(is, line)) throw io_error("read_trace_csv: empty file");
    if (line != "t,E,consensus,kkt,lyapunov,fieldnorm")
        throw io_error("read_trace_csv: unexpected header '" + line + "'");
    Trace trace;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        cells.resize(6);
        auto parse = [](const std::string& c) { return std::stod(c); };
        TraceSample s;
        s.t = parse(cells[0]);
        if (!cells[1].empty()) s.estimation = parse(cells[1]);
        s.consensus = parse(cells[2]);
        s.kkt = parse(cells[3]);
        if (!cells[4].empty()) s.lyapunov = parse(cells[4]);
        s.field_norm = parse(cells[5]);
        trace.samples.push_back(s);
    }
    return trace;
}

} // namespace sylnet
