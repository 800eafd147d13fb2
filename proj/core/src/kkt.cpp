#include "sylnet/kkt.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace sylnet {

namespace {

DenseMatrix neighbor_diff_sum(const SylvesterProblem& prob, const NetworkState& s,
                              DenseMatrix AgentState::* field, std::size_t i) {
    const DenseMatrix& own = s.agents[i].*field;
    DenseMatrix acc(own.rows(), own.cols());
    for (std::size_t j : prob.network.neighbors(i)) {
        const DenseMatrix& other = s.agents[j].*field;
        const double a = prob.network.weight(i, j);
        for (std::size_t k = 0; k < acc.size(); ++k)
            acc.data()[k] += a * (own.data()[k] - other.data()[k]);
    }
    return acc;
}

/// S_i = X_i B_i - C_i + Z_i, the column-block residual.
DenseMatrix column_residual(const AgentData& d, const AgentState& a) {
    DenseMatrix s = a.Z - d.C;
    multiply_add_into(s, a.X, d.B);
    return s;
}

/// E_i = A_i X_i - Y_i, the row-block residual.
DenseMatrix row_residual(const AgentData& d, const AgentState& a) {
    DenseMatrix e = -a.Y;
    multiply_add_into(e, d.A, a.X);
    return e;
}

DenseMatrix coupling_gap(const SylvesterProblem& prob, const NetworkState& s, std::size_t i) {
    const BlockPartition& p = prob.partition;
    DenseMatrix g = embed_row_block(s.agents[i].Y, i, p);
    g -= embed_col_block(s.agents[i].Z, i, p);
    g -= neighbor_diff_sum(prob, s, &AgentState::W, i);
    return g;
}

/// Smooth part of the stationarity block shared by the least-squares and
/// regularized systems: -(X_i B_i - C_i + Z_i) B_i^T - sum a_ij (Lambda_i -
/// Lambda_j) - A_i^T Upsilon_i.
DenseMatrix stationarity_smooth(const SylvesterProblem& prob, const NetworkState& s,
                                const AgentData& d, std::size_t i) {
    DenseMatrix g = -neighbor_diff_sum(prob, s, &AgentState::Lambda, i);
    multiply_sub_into(g, column_residual(d, s.agents[i]), d.B.transpose());
    multiply_sub_into(g, d.A.transpose(), s.agents[i].Upsilon);
    return g;
}

} // namespace

double kkt_residual_ls(const SylvesterProblem& prob, const NetworkState& s) {
    if (s.agent_count() != prob.agent_count())
        throw dimension_error("kkt_residual_ls: agent count mismatch");
    const BlockPartition& p = prob.partition;
    double worst = 0.0;
    for (std::size_t i = 0; i < prob.agent_count(); ++i) {
        const AgentData d = agent_data(prob, i);
        const AgentState& a = s.agents[i];

        auto track = [&worst](const DenseMatrix& block) {
            worst = std::max(worst, frobenius_norm(block));
        };
        track(neighbor_diff_sum(prob, s, &AgentState::X, i));
        track(row_residual(d, a));
        track(coupling_gap(prob, s, i));
        track(stationarity_smooth(prob, s, d, i));
        DenseMatrix b5 = a.Upsilon - row_band(a.Theta, i, p);
        track(b5);
        DenseMatrix b6 = col_band(a.Theta, i, p) - column_residual(d, a);
        track(b6);
        track(neighbor_diff_sum(prob, s, &AgentState::Theta, i));
    }
    return worst;
}

double kkt_residual_exact(const SylvesterProblem& prob, const NetworkState& s) {
    if (s.agent_count() != prob.agent_count())
        throw dimension_error("kkt_residual_exact: agent count mismatch");
    const BlockPartition& p = prob.partition;
    double worst = 0.0;
    for (std::size_t i = 0; i < prob.agent_count(); ++i) {
        const AgentData d = agent_data(prob, i);
        const AgentState& a = s.agents[i];
        auto track = [&worst](const DenseMatrix& block) {
            worst = std::max(worst, frobenius_norm(block));
        };

        track(coupling_gap(prob, s, i));
        // Stationarity in X of the consensus-free formulation.
        DenseMatrix st = -neighbor_diff_sum(prob, s, &AgentState::X, i);
        const DenseMatrix e = row_residual(d, a);
        multiply_sub_into(st, column_residual(d, a), d.B.transpose());
        multiply_sub_into(st, d.A.transpose(), e);
        track(st);
        DenseMatrix b3 = e - row_band(a.Theta, i, p);
        track(b3);
        DenseMatrix b4 = col_band(a.Theta, i, p) - column_residual(d, a);
        track(b4);
        track(neighbor_diff_sum(prob, s, &AgentState::Theta, i));
    }
    return worst;
}

double kkt_residual_reg(const SylvesterProblem& prob, const NetworkState& s) {
    if (prob.penalty.kind != PenaltyKind::l1)
        throw validation_error("kkt_residual_reg: problem has no L1 penalty");
    if (s.agent_count() != prob.agent_count())
        throw dimension_error("kkt_residual_reg: agent count mismatch");
    const BlockPartition& p = prob.partition;
    const double alpha = prob.penalty.alpha;
    double worst = 0.0;
    for (std::size_t i = 0; i < prob.agent_count(); ++i) {
        const AgentData d = agent_data(prob, i);
        const AgentState& a = s.agents[i];
        auto track = [&worst](double v) { worst = std::max(worst, v); };

        track(frobenius_norm(neighbor_diff_sum(prob, s, &AgentState::X, i)));
        track(frobenius_norm(row_residual(d, a)));
        track(frobenius_norm(coupling_gap(prob, s, i)));

        // Distance from zero to {g - alpha h : h in the entrywise L1
        // subdifferential at X_i}.
        const DenseMatrix g = stationarity_smooth(prob, s, d, i);
        double sq = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double x = a.X.data()[k];
            const double v = g.data()[k];
            double dist;
            if (x > 0.0)
                dist = v - alpha;
            else if (x < 0.0)
                dist = v + alpha;
            else
                dist = std::max(0.0, std::abs(v) - alpha);
            sq += dist * dist;
        }
        track(std::sqrt(sq));

        DenseMatrix b5 = a.Upsilon - row_band(a.Theta, i, p);
        b5 += row_residual(d, a);
        track(frobenius_norm(b5));
        DenseMatrix b6 = col_band(a.Theta, i, p) - column_residual(d, a);
        track(frobenius_norm(b6));
        track(frobenius_norm(neighbor_diff_sum(prob, s, &AgentState::Theta, i)));
    }
    return worst;
}

double kkt_residual(const SylvesterProblem& prob, const NetworkState& s, Algorithm algo) {
    switch (algo) {
        case Algorithm::least_squares: return kkt_residual_ls(prob, s);
        case Algorithm::exact: return kkt_residual_exact(prob, s);
        case Algorithm::regularized: return kkt_residual_reg(prob, s);
    }
    throw validation_error("kkt_residual: unknown algorithm");
}

namespace {

/// Solves sum_j a_ij (V_i - V_j) = Q_i for the block stack V via the
/// Laplacian pseudo-inverse; requires sum_i Q_i = 0 (checked by the
/// caller's construction).
std::vector<DenseMatrix> laplacian_solve(const SylvesterProblem& prob,
                                         const std::vector<DenseMatrix>& q) {
    const std::size_t n = prob.agent_count();
    const DenseMatrix l = laplacian(prob.network);
    Eigen::MatrixXd le(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) le(i, j) = l(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(le);
    Eigen::VectorXd inv = es.eigenvalues();
    const double tol = 1e-12 * std::max(1.0, inv.cwiseAbs().maxCoeff());
    for (Eigen::Index k = 0; k < inv.size(); ++k)
        inv(k) = std::abs(inv(k)) > tol ? 1.0 / inv(k) : 0.0;
    const Eigen::MatrixXd pinv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();

    std::vector<DenseMatrix> v(n, DenseMatrix(q[0].rows(), q[0].cols()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double w = pinv(i, j);
            if (w != 0.0) v[i].axpy(w, q[j]);
        }
    return v;
}

DenseMatrix full_residual(const SylvesterProblem& prob, const DenseMatrix& x_hat) {
    DenseMatrix res = prob.A * x_hat;
    multiply_add_into(res, x_hat, prob.B);
    res -= prob.C;
    return res;
}

} // namespace

NetworkState build_kkt_point_ls(const SylvesterProblem& prob, const DenseMatrix& x_hat) {
    const BlockPartition& p = prob.partition;
    const std::size_t n = prob.agent_count();
    const DenseMatrix res = full_residual(prob, x_hat);

    NetworkState s = make_zero_state(p, Algorithm::least_squares);
    std::vector<DenseMatrix> lam_rhs(n), w_rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const AgentData d = agent_data(prob, i);
        AgentState& a = s.agents[i];
        a.X = x_hat;
        a.Y = d.A * x_hat;
        a.Z = d.C - x_hat * d.B + col_band(res, i, p);
        a.Theta = res;
        a.Upsilon = row_band(res, i, p);

        DenseMatrix q(p.total_rows(), p.total_cols());
        multiply_sub_into(q, col_band(res, i, p), d.B.transpose());
        multiply_sub_into(q, d.A.transpose(), a.Upsilon);
        lam_rhs[i] = std::move(q);
        w_rhs[i] = embed_row_block(a.Y, i, p) - embed_col_block(a.Z, i, p);
    }
    auto lambda = laplacian_solve(prob, lam_rhs);
    auto w = laplacian_solve(prob, w_rhs);
    for (std::size_t i = 0; i < n; ++i) {
        s.agents[i].Lambda = std::move(lambda[i]);
        s.agents[i].W = std::move(w[i]);
    }
    return s;
}

NetworkState build_kkt_point_exact(const SylvesterProblem& prob, const DenseMatrix& x_hat) {
    const BlockPartition& p = prob.partition;
    const std::size_t n = prob.agent_count();

    NetworkState s = make_zero_state(p, Algorithm::exact);
    std::vector<DenseMatrix> w_rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const AgentData d = agent_data(prob, i);
        AgentState& a = s.agents[i];
        a.X = x_hat;
        a.Y = d.A * x_hat;
        a.Z = d.C - x_hat * d.B;
        w_rhs[i] = embed_row_block(a.Y, i, p) - embed_col_block(a.Z, i, p);
    }
    auto w = laplacian_solve(prob, w_rhs);
    for (std::size_t i = 0; i < n; ++i) s.agents[i].W = std::move(w[i]);
    return s;
}

RegularizedKktPoint build_kkt_point_reg(const SylvesterProblem& prob, const DenseMatrix& x_hat) {
    if (prob.penalty.kind != PenaltyKind::l1)
        throw validation_error("build_kkt_point_reg: problem has no L1 penalty");
    const BlockPartition& p = prob.partition;
    const std::size_t n = prob.agent_count();
    const double alpha = prob.penalty.alpha;
    const DenseMatrix res = full_residual(prob, x_hat);

    // Centralized stationarity certificate, shared by all agents.
    DenseMatrix h = prob.A.transpose() * res;
    multiply_add_into(h, res, prob.B.transpose());
    h *= -1.0 / (static_cast<double>(n) * alpha);

    NetworkState s = make_zero_state(p, Algorithm::regularized);
    std::vector<DenseMatrix> lam_rhs(n), w_rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const AgentData d = agent_data(prob, i);
        AgentState& a = s.agents[i];
        a.X = x_hat;
        a.Y = d.A * x_hat;
        a.Z = d.C - x_hat * d.B + col_band(res, i, p);
        a.Theta = res;
        a.Upsilon = row_band(res, i, p);

        DenseMatrix q = -alpha * h;
        multiply_sub_into(q, col_band(res, i, p), d.B.transpose());
        multiply_sub_into(q, d.A.transpose(), a.Upsilon);
        lam_rhs[i] = std::move(q);
        w_rhs[i] = embed_row_block(a.Y, i, p) - embed_col_block(a.Z, i, p);
    }
    auto lambda = laplacian_solve(prob, lam_rhs);
    auto w = laplacian_solve(prob, w_rhs);
    for (std::size_t i = 0; i < n; ++i) {
        s.agents[i].Lambda = std::move(lambda[i]);
        s.agents[i].W = std::move(w[i]);
    }
    return {std::move(s), std::vector<DenseMatrix>(n, h)};
}

} // namespace sylnet
