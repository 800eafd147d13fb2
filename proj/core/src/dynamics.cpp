#include "sylnet/dynamics.hpp"

#include <algorithm>
#include <thread>

namespace sylnet {

namespace {

/// Runs fn(i) for i in [0, n), split across up to `threads` workers. Every
/// worker writes only its own agents' output blocks, so the result is
/// identical to the serial loop.
template <typename Fn>
void for_each_agent(std::size_t n, unsigned threads, Fn&& fn) {
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

/// acc += sign * sum_j a_ij (field_i - field_j); touches neighbor blocks
/// only.
void add_neighbor_sum(DenseMatrix& acc, const Network& net, const NetworkState& s,
                      DenseMatrix AgentState::* field, std::size_t i, double sign) {
    const DenseMatrix& own = s.agents[i].*field;
    for (std::size_t j : net.neighbors(i)) {
        const DenseMatrix& other = s.agents[j].*field;
        const double a = sign * net.weight(i, j);
        for (std::size_t k = 0; k < acc.size(); ++k)
            acc.data()[k] += a * (own.data()[k] - other.data()[k]);
    }
}

/// dst (m_i x r) += sign * rows [band i] of full (m x r).
void add_row_band_of(DenseMatrix& dst, const DenseMatrix& full, std::size_t i,
                     const BlockPartition& p, double sign) {
    const std::size_t off = p.row_offset(i);
    for (std::size_t k = 0; k < dst.rows(); ++k)
        for (std::size_t j = 0; j < dst.cols(); ++j)
            dst(k, j) += sign * full(off + k, j);
}

/// dst (m x r_i) += sign * cols [band i] of full (m x r).
void add_col_band_of(DenseMatrix& dst, const DenseMatrix& full, std::size_t i,
                     const BlockPartition& p, double sign) {
    const std::size_t off = p.col_offset(i);
    for (std::size_t k = 0; k < dst.rows(); ++k)
        for (std::size_t j = 0; j < dst.cols(); ++j)
            dst(k, j) += sign * full(k, off + j);
}

/// full (m x r) rows [band i] += sign * block (m_i x r).
void add_to_row_band(DenseMatrix& full, const DenseMatrix& block, std::size_t i,
                     const BlockPartition& p, double sign) {
    const std::size_t off = p.row_offset(i);
    for (std::size_t k = 0; k < block.rows(); ++k)
        for (std::size_t j = 0; j < block.cols(); ++j)
            full(off + k, j) += sign * block(k, j);
}

/// full (m x r) cols [band i] += sign * block (m x r_i).
void add_to_col_band(DenseMatrix& full, const DenseMatrix& block, std::size_t i,
                     const BlockPartition& p, double sign) {
    const std::size_t off = p.col_offset(i);
    for (std::size_t k = 0; k < block.rows(); ++k)
        for (std::size_t j = 0; j < block.cols(); ++j)
            full(k, off + j) += sign * block(k, j);
}

/// S_i = X_i B_i - C_i + Z_i.
void column_residual_into(DenseMatrix& s_i, const AgentData& d, const AgentState& a) {
    s_i = a.Z;
    s_i -= d.C;
    multiply_add_into(s_i, a.X, d.B);
}

/// E_i = A_i X_i - Y_i.
void row_residual_into(DenseMatrix& e_i, const AgentData& d, const AgentState& a) {
    e_i = -a.Y;
    multiply_add_into(e_i, d.A, a.X);
}

void check_shapes(const SylvesterProblem& prob, const NetworkState& s,
                  const NetworkDerivative& out) {
    if (s.agent_count() != prob.agent_count() || out.agent_count() != prob.agent_count())
        throw dimension_error("vector field: agent count mismatch");
}

} // namespace

DynamicsWorkspace::DynamicsWorkspace(const SylvesterProblem& prob) {
    const std::size_t n = prob.agent_count();
    data_.reserve(n);
    a_t_.reserve(n);
    b_t_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        data_.push_back(agent_data(prob, i));
        a_t_.push_back(data_.back().A.transpose());
        b_t_.push_back(data_.back().B.transpose());
    }
}

DenseMatrix select_subgradient(const PenaltySpec& penalty, const DenseMatrix& x) {
    if (penalty.kind != PenaltyKind::l1)
        throw validation_error("select_subgradient: penalty is not L1");
    DenseMatrix h(x.rows(), x.cols());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double v = x.data()[k];
        h.data()[k] = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    }
    return h;
}

void vf_least_squares(const SylvesterProblem& prob, const DynamicsWorkspace& ws,
                      const NetworkState& s, NetworkDerivative& out, unsigned threads) {
    check_shapes(prob, s, out);
    const BlockPartition& p = prob.partition;
    const Network& net = prob.network;
    for_each_agent(prob.agent_count(), threads, [&](std::size_t i) {
        const AgentData& d = ws.data(i);
        const AgentState& a = s.agents[i];
        AgentState& da = out.agents[i];

        DenseMatrix s_i(a.Z.rows(), a.Z.cols());
        column_residual_into(s_i, d, a);
        DenseMatrix e_i(a.Y.rows(), a.Y.cols());
        row_residual_into(e_i, d, a);

        da.X.set_zero();
        multiply_sub_into(da.X, s_i, ws.b_transpose(i));
        multiply_sub_into(da.X, ws.a_transpose(i), e_i);
        multiply_sub_into(da.X, ws.a_transpose(i), a.Upsilon);
        add_neighbor_sum(da.X, net, s, &AgentState::Lambda, i, -1.0);
        add_neighbor_sum(da.X, net, s, &AgentState::X, i, -1.0);

        da.Y = a.Upsilon;
        da.Y += e_i;
        add_row_band_of(da.Y, a.Theta, i, p, -1.0);

        da.Z = -s_i;
        add_col_band_of(da.Z, a.Theta, i, p, 1.0);

        da.W.set_zero();
        add_neighbor_sum(da.W, net, s, &AgentState::Theta, i, 1.0);

        da.Lambda.set_zero();
        add_neighbor_sum(da.Lambda, net, s, &AgentState::X, i, 1.0);

        da.Upsilon = e_i;

        da.Theta.set_zero();
        add_to_row_band(da.Theta, a.Y, i, p, 1.0);
        add_to_col_band(da.Theta, a.Z, i, p, -1.0);
        add_neighbor_sum(da.Theta, net, s, &AgentState::W, i, -1.0);
        add_neighbor_sum(da.Theta, net, s, &AgentState::Theta, i, -1.0);
    });
}

void vf_exact(const SylvesterProblem& prob, const DynamicsWorkspace& ws,
              const NetworkState& s, NetworkDerivative& out, unsigned threads) {
    check_shapes(prob, s, out);
    const BlockPartition& p = prob.partition;
    const Network& net = prob.network;
    for_each_agent(prob.agent_count(), threads, [&](std::size_t i) {
        const AgentData& d = ws.data(i);
        const AgentState& a = s.agents[i];
        AgentState& da = out.agents[i];

        DenseMatrix s_i(a.Z.rows(), a.Z.cols());
        column_residual_into(s_i, d, a);
        DenseMatrix e_i(a.Y.rows(), a.Y.cols());
        row_residual_into(e_i, d, a);

        da.X.set_zero();
        multiply_sub_into(da.X, s_i, ws.b_transpose(i));
        multiply_sub_into(da.X, ws.a_transpose(i), e_i);
        add_neighbor_sum(da.X, net, s, &AgentState::X, i, -1.0);

        da.Y = e_i;
        add_row_band_of(da.Y, a.Theta, i, p, -1.0);

        da.Z = -s_i;
        add_col_band_of(da.Z, a.Theta, i, p, 1.0);

        da.W.set_zero();
        add_neighbor_sum(da.W, net, s, &AgentState::Theta, i, 1.0);

        da.Theta.set_zero();
        add_to_row_band(da.Theta, a.Y, i, p, 1.0);
        add_to_col_band(da.Theta, a.Z, i, p, -1.0);
        add_neighbor_sum(da.Theta, net, s, &AgentState::W, i, -1.0);
        add_neighbor_sum(da.Theta, net, s, &AgentState::Theta, i, -1.0);
    });
}

void vf_regularized(const SylvesterProblem& prob, const DynamicsWorkspace& ws,
                    const NetworkState& s, NetworkDerivative& out, unsigned threads) {
    if (prob.penalty.kind != PenaltyKind::l1)
        throw validation_error("vf_regularized: problem has no L1 penalty");
    check_shapes(prob, s, out);
    const BlockPartition& p = prob.partition;
    const Network& net = prob.network;
    const double alpha = prob.penalty.alpha;
    const std::size_t n = prob.agent_count();

    std::vector<DenseMatrix> col_res(n), row_res(n);

    // Phase one: the selected dX of every agent. Nothing below reads
    // out.agents[j].X before this loop completes (barrier between phases).
    for_each_agent(n, threads, [&](std::size_t i) {
        const AgentData& d = ws.data(i);
        const AgentState& a = s.agents[i];
        AgentState& da = out.agents[i];

        col_res[i] = DenseMatrix(a.Z.rows(), a.Z.cols());
        column_residual_into(col_res[i], d, a);
        row_res[i] = DenseMatrix(a.Y.rows(), a.Y.cols());
        row_residual_into(row_res[i], d, a);

        da.X.set_zero();
        multiply_sub_into(da.X, col_res[i], ws.b_transpose(i));
        multiply_sub_into(da.X, ws.a_transpose(i), row_res[i]);
        multiply_sub_into(da.X, ws.a_transpose(i), a.Upsilon);
        add_neighbor_sum(da.X, net, s, &AgentState::Lambda, i, -1.0);
        add_neighbor_sum(da.X, net, s, &AgentState::X, i, -1.0);
        da.X.axpy(-alpha, select_subgradient(prob.penalty, a.X));
    });

    // Phase two: feed the selected dX back into the remaining lines. The
    // dLambda line also consumes the neighbors' dX, which the exchange
    // therefore includes.
    for_each_agent(n, threads, [&](std::size_t i) {
        const AgentData& d = ws.data(i);
        const AgentState& a = s.agents[i];
        AgentState& da = out.agents[i];

        da.Y = a.Upsilon;
        da.Y += row_res[i];
        add_row_band_of(da.Y, a.Theta, i, p, -1.0);
        multiply_sub_into(da.Y, d.A, da.X);

        da.Z = -col_res[i];
        add_col_band_of(da.Z, a.Theta, i, p, 1.0);
        multiply_add_into(da.Z, da.X, d.B);

        da.W.set_zero();
        add_neighbor_sum(da.W, net, s, &AgentState::Theta, i, 1.0);

        da.Lambda.set_zero();
        add_neighbor_sum(da.Lambda, net, s, &AgentState::X, i, 1.0);
        // sum_j a_ij (dX_i - dX_j) over the derivative snapshot.
        const DenseMatrix& own_dx = da.X;
        for (std::size_t j : net.neighbors(i)) {
            const DenseMatrix& other_dx = out.agents[j].X;
            const double w = net.weight(i, j);
            for (std::size_t k = 0; k < da.Lambda.size(); ++k)
                da.Lambda.data()[k] += w * (own_dx.data()[k] - other_dx.data()[k]);
        }

        da.Upsilon = row_res[i];
        multiply_add_into(da.Upsilon, d.A, da.X);

        da.Theta.set_zero();
        add_to_row_band(da.Theta, a.Y, i, p, 1.0);
        add_to_col_band(da.Theta, a.Z, i, p, -1.0);
        add_neighbor_sum(da.Theta, net, s, &AgentState::W, i, -1.0);
        add_neighbor_sum(da.Theta, net, s, &AgentState::Theta, i, -1.0);
    });
}

namespace {

NetworkDerivative run_standalone(const SylvesterProblem& prob, const NetworkState& s,
                                 Algorithm algo) {
    DynamicsWorkspace ws(prob);
    NetworkDerivative out = make_zero_derivative(prob.partition, algo);
    evaluate_field(prob, ws, algo, s, out);
    return out;
}

} // namespace

NetworkDerivative vf_least_squares(const SylvesterProblem& prob, const NetworkState& s) {
    return run_standalone(prob, s, Algorithm::least_squares);
}

NetworkDerivative vf_exact(const SylvesterProblem& prob, const NetworkState& s) {
    return run_standalone(prob, s, Algorithm::exact);
}

NetworkDerivative vf_regularized(const SylvesterProblem& prob, const NetworkState& s) {
    return run_standalone(prob, s, Algorithm::regularized);
}

void evaluate_field(const SylvesterProblem& prob, const DynamicsWorkspace& ws, Algorithm algo,
                    const NetworkState& s, NetworkDerivative& out, unsigned threads) {
    switch (algo) {
        case Algorithm::least_squares: vf_least_squares(prob, ws, s, out, threads); return;
        case Algorithm::exact: vf_exact(prob, ws, s, out, threads); return;
        case Algorithm::regularized: vf_regularized(prob, ws, s, out, threads); return;
    }
    throw validation_error("evaluate_field: unknown algorithm");
}

} // namespace sylnet
