#pragma once

#include "sylnet/dense_matrix.hpp"
#include "sylnet/network.hpp"
#include "sylnet/partition.hpp"

namespace sylnet {

enum class PenaltyKind { none, l1 };

/// Optional entrywise-L1 penalty with per-agent weight alpha.
struct PenaltySpec {
    PenaltyKind kind = PenaltyKind::none;
    double alpha = 0.0;

    static PenaltySpec none() { return {PenaltyKind::none, 0.0}; }
    static PenaltySpec l1(double alpha);

    friend bool operator==(const PenaltySpec&, const PenaltySpec&) = default;
};

/// Entrywise L1 norm |X|_1 = sum |X_ij|.
double entrywise_l1(const DenseMatrix& x);

/// The data of AX + XB = C together with its block split and the
/// communication graph over which it is solved.
struct SylvesterProblem {
    DenseMatrix A; // m x m
    DenseMatrix B; // r x r
    DenseMatrix C; // m x r
    BlockPartition partition;
    Network network;
    PenaltySpec penalty;

    SylvesterProblem(DenseMatrix a, DenseMatrix b, DenseMatrix c,
                     BlockPartition part, Network net,
                     PenaltySpec pen = PenaltySpec::none());

    std::size_t m() const { return A.rows(); }
    std::size_t r() const { return B.rows(); }
    std::size_t agent_count() const { return network.agent_count(); }

    /// Penalty weight of the summed objective at consensus: n * alpha.
    double effective_alpha() const {
        return penalty.kind == PenaltyKind::l1
                   ? static_cast<double>(agent_count()) * penalty.alpha
                   : 0.0;
    }
};

/// The slices agent i holds: its rows of A and its columns of B and C.
struct AgentData {
    DenseMatrix A; // m_i x m
    DenseMatrix B; // r x r_i
    DenseMatrix C; // m x r_i
};

AgentData agent_data(const SylvesterProblem& prob, std::size_t i);

/// ||AX + XB - C||_F.
double residual(const SylvesterProblem& prob, const DenseMatrix& x);

/// The vectorized operator I_r (x) A + B^T (x) I_m, so that the equation
/// reads M vec(X) = vec(C).
DenseMatrix sylvester_operator_matrix(const SylvesterProblem& prob);

/// 0.5 ||AX+XB-C||_F^2 plus, for L1 problems, n*alpha*|X|_1. This is the
/// summed multi-agent objective evaluated at a consensual point.
double objective_value(const SylvesterProblem& prob, const DenseMatrix& x);

} // namespace sylnet
