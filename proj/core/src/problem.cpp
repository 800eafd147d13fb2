#include "sylnet/problem.hpp"

#include <cmath>

namespace sylnet {

PenaltySpec PenaltySpec::l1(double alpha) {
    if (alpha <= 0.0) throw validation_error("PenaltySpec: L1 weight must be positive");
    return {PenaltyKind::l1, alpha};
}

double entrywise_l1(const DenseMatrix& x) {
    double s = 0.0;
    for (double v : x.data()) s += std::abs(v);
    return s;
}

SylvesterProblem::SylvesterProblem(DenseMatrix a, DenseMatrix b, DenseMatrix c,
                                   BlockPartition part, Network net, PenaltySpec pen)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)),
      partition(std::move(part)), network(std::move(net)), penalty(pen) {
    if (A.rows() != A.cols()) throw dimension_error("SylvesterProblem: A must be square");
    if (B.rows() != B.cols()) throw dimension_error("SylvesterProblem: B must be square");
    if (C.rows() != A.rows() || C.cols() != B.cols())
        throw dimension_error("SylvesterProblem: C must be m x r");
    if (partition.total_rows() != A.rows() || partition.total_cols() != B.rows())
        throw validation_error("SylvesterProblem: partition does not tile A and B");
    if (partition.agent_count() != network.agent_count())
        throw validation_error("SylvesterProblem: partition and network disagree on agent count");
    if (penalty.kind == PenaltyKind::l1 && penalty.alpha <= 0.0)
        throw validation_error("SylvesterProblem: L1 weight must be positive");
}

AgentData agent_data(const SylvesterProblem& prob, std::size_t i) {
    if (i >= prob.agent_count()) throw dimension_error("agent_data: agent index out of range");
    const BlockPartition& p = prob.partition;
    return {
        prob.A.block(p.row_offset(i), 0, p.row_size(i), prob.m()),
        prob.B.block(0, p.col_offset(i), prob.r(), p.col_size(i)),
        prob.C.block(0, p.col_offset(i), prob.m(), p.col_size(i)),
    };
}

double residual(const SylvesterProblem& prob, const DenseMatrix& x) {
    if (x.rows() != prob.m() || x.cols() != prob.r())
        throw dimension_error("residual: X must be m x r");
    DenseMatrix res = prob.A * x;
    multiply_add_into(res, x, prob.B);
    res -= prob.C;
    return frobenius_norm(res);
}

DenseMatrix sylvester_operator_matrix(const SylvesterProblem& prob) {
    const std::size_t m = prob.m(), r = prob.r();
    DenseMatrix op = kron(DenseMatrix::identity(r), prob.A);
    op += kron(prob.B.transpose(), DenseMatrix::identity(m));
    return op;
}

double objective_value(const SylvesterProblem& prob, const DenseMatrix& x) {
    const double res = residual(prob, x);
    double obj = 0.5 * res * res;
    if (prob.penalty.kind == PenaltyKind::l1)
        obj += prob.effective_alpha() * entrywise_l1(x);
    return obj;
}

} // namespace sylnet
