#include "sylnet/metrics.hpp"

#include <cmath>

#include "sylnet/kkt.hpp"

namespace sylnet {

double consensus_error(const NetworkState& s) {
    const std::size_t n = s.agent_count();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const DenseMatrix d = s.agents[i].X - s.agents[j].X;
            acc += frobenius_inner(d, d);
        }
    return acc / static_cast<double>(n);
}

double estimation_error(const NetworkState& s, const DenseMatrix& x_ref) {
    double acc = 0.0;
    for (const AgentState& a : s.agents) {
        const DenseMatrix d = a.X - x_ref;
        acc += frobenius_inner(d, d);
    }
    return acc / static_cast<double>(s.agent_count());
}

DenseMatrix mean_estimate(const NetworkState& s) {
    DenseMatrix x = s.agents[0].X;
    for (std::size_t i = 1; i < s.agent_count(); ++i) x += s.agents[i].X;
    x *= 1.0 / static_cast<double>(s.agent_count());
    return x;
}

namespace {

constexpr double kEquilibriumTol = 1e-9;

bool has_full_duals(const NetworkState& s) {
    return !s.agents.empty() && !s.agents[0].Lambda.empty();
}

} // namespace

double lyapunov_ls(const SylvesterProblem& prob, const NetworkState& s,
                   const NetworkState& s_star) {
    const double res = has_full_duals(s_star) ? kkt_residual_ls(prob, s_star)
                                              : kkt_residual_exact(prob, s_star);
    if (res > kEquilibriumTol)
        throw validation_error("lyapunov_ls: reference state is not an equilibrium (KKT residual " +
                               std::to_string(res) + ")");
    return half_squared_distance(s, s_star);
}

double lyapunov_reg(const SylvesterProblem& prob, const NetworkState& s,
                    const NetworkState& s_star, const std::vector<DenseMatrix>& h_star) {
    if (prob.penalty.kind != PenaltyKind::l1)
        throw validation_error("lyapunov_reg: problem has no L1 penalty");
    const double res = kkt_residual_reg(prob, s_star);
    if (res > kEquilibriumTol)
        throw validation_error("lyapunov_reg: reference state is not an equilibrium (KKT residual " +
                               std::to_string(res) + ")");
    if (h_star.size() != s.agent_count())
        throw dimension_error("lyapunov_reg: one certificate per agent required");

    const double alpha = prob.penalty.alpha;
    const std::size_t n = s.agent_count();

    // Bregman gap of the penalty at the certificate plus the consensus
    // quadratic.
    double v1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const DenseMatrix dx = s.agents[i].X - s_star.agents[i].X;
        v1 += alpha * (entrywise_l1(s.agents[i].X) - entrywise_l1(s_star.agents[i].X) -
                       frobenius_inner(h_star[i], dx));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j : prob.network.neighbors(i)) {
            const DenseMatrix d = s.agents[i].X - s.agents[j].X;
            v1 += 0.25 * prob.network.weight(i, j) * frobenius_inner(d, d);
        }

    double v2 = half_squared_distance(s, s_star);
    for (std::size_t i = 0; i < n; ++i) {
        const AgentData d = agent_data(prob, i);
        const DenseMatrix dx = s.agents[i].X - s_star.agents[i].X;
        const DenseMatrix adx = d.A * dx;
        const DenseMatrix dxb = dx * d.B;
        v2 += 0.5 * frobenius_inner(adx, adx) + 0.5 * frobenius_inner(dxb, dxb);
    }
    return v1 + v2;
}

std::vector<DenseMatrix> recover_equilibrium_subgradient(const SylvesterProblem& prob,
                                                         const NetworkState& s_star) {
    if (prob.penalty.kind != PenaltyKind::l1)
        throw validation_error("recover_equilibrium_subgradient: problem has no L1 penalty");
    const double alpha = prob.penalty.alpha;
    std::vector<DenseMatrix> h;
    h.reserve(prob.agent_count());
    for (std::size_t i = 0; i < prob.agent_count(); ++i) {
        const AgentData d = agent_data(prob, i);
        const AgentState& a = s_star.agents[i];

        DenseMatrix g(prob.m(), prob.r());
        DenseMatrix col_res = a.Z - d.C;
        multiply_add_into(col_res, a.X, d.B);
        multiply_sub_into(g, col_res, d.B.transpose());
        multiply_sub_into(g, d.A.transpose(), a.Upsilon);
        for (std::size_t j : prob.network.neighbors(i)) {
            const double w = prob.network.weight(i, j);
            for (std::size_t k = 0; k < g.size(); ++k)
                g.data()[k] -= w * (a.Lambda.data()[k] - s_star.agents[j].Lambda.data()[k]);
        }
        g *= 1.0 / alpha;
        h.push_back(std::move(g));
    }
    return h;
}

} // namespace sylnet
