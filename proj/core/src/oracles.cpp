#include "sylnet/oracles.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

namespace sylnet {

namespace {

Eigen::MatrixXd operator_eigen(const SylvesterProblem& prob) {
    const DenseMatrix op = sylvester_operator_matrix(prob);
    Eigen::MatrixXd e(op.rows(), op.cols());
    for (std::size_t i = 0; i < op.rows(); ++i)
        for (std::size_t j = 0; j < op.cols(); ++j) e(i, j) = op(i, j);
    return e;
}

Eigen::VectorXd vec_eigen(const DenseMatrix& m) {
    Eigen::VectorXd v(m.rows() * m.cols());
    std::size_t k = 0;
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) v(k++) = m(i, j);
    return v;
}

DenseMatrix unvec(const Eigen::VectorXd& v, std::size_t rows, std::size_t cols) {
    DenseMatrix m(rows, cols);
    std::size_t k = 0;
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = v(k++);
    return m;
}

} // namespace

std::vector<double> operator_singular_values(const SylvesterProblem& prob) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(operator_eigen(prob));
    std::vector<double> sv(svd.singularValues().size());
    for (std::size_t k = 0; k < sv.size(); ++k) sv[k] = svd.singularValues()(k);
    return sv;
}

OracleSolution oracle_least_squares(const SylvesterProblem& prob) {
    const std::size_t m = prob.m(), r = prob.r();
    const Eigen::MatrixXd op = operator_eigen(prob);
    const Eigen::VectorXd c = vec_eigen(prob.C);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(op, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    const double smax = sigma.size() ? sigma(0) : 0.0;
    const double cutoff = 1e-10 * smax;

    Eigen::VectorXd coeff = svd.matrixU().transpose() * c;
    std::size_t rank = 0;
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
        if (sigma(k) > cutoff) {
            coeff(k) /= sigma(k);
            ++rank;
        } else {
            coeff(k) = 0.0;
        }
    }
    const Eigen::VectorXd x = svd.matrixV() * coeff;

    OracleSolution sol;
    sol.X_star = unvec(x, m, r);
    sol.residual = residual(prob, sol.X_star);
    sol.objective = 0.5 * sol.residual * sol.residual;
    sol.minimal_residual = true;
    sol.unique = rank == m * r;
    return sol;
}

OracleSolution oracle_regularized(const SylvesterProblem& prob) {
    if (prob.penalty.kind != PenaltyKind::l1)
        throw validation_error("oracle_regularized: problem has no L1 penalty");
    const std::size_t m = prob.m(), r = prob.r();
    const double alpha_eff = prob.effective_alpha();

    const Eigen::MatrixXd op = operator_eigen(prob);
    const Eigen::VectorXd c = vec_eigen(prob.C);
    const Eigen::MatrixXd gram = op.transpose() * op;
    const Eigen::VectorXd opt_c = op.transpose() * c;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(op);
    const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    const double lip = std::max(smax * smax, 1e-30);
    const double shrink = alpha_eff / lip;

    auto objective = [&](const Eigen::VectorXd& x) {
        return 0.5 * (op * x - c).squaredNorm() + alpha_eff * x.lpNorm<1>();
    };

    Eigen::VectorXd x = Eigen::VectorXd::Zero(m * r);
    double f_prev = objective(x);
    constexpr std::size_t kMaxIter = 1000000;
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t iter = 0; iter < kMaxIter; ++iter) {
        const Eigen::VectorXd g = gram * x - opt_c;
        Eigen::VectorXd next = x - g / lip;
        for (Eigen::Index k = 0; k < next.size(); ++k) {
            const double v = next(k);
            next(k) = v > shrink ? v - shrink : (v < -shrink ? v + shrink : 0.0);
        }
        const double f = objective(next);
        gap = std::abs(f_prev - f);
        x = std::move(next);
        f_prev = f;
        if (gap <= 1e-12) {
            OracleSolution sol;
            sol.X_star = unvec(x, m, r);
            sol.residual = residual(prob, sol.X_star);
            sol.objective = f;
            sol.minimal_residual = false;
            std::size_t rank = 0;
            for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
                if (svd.singularValues()(k) > 1e-10 * smax) ++rank;
            sol.unique = rank == m * r;
            return sol;
        }
    }
    throw oracle_error("oracle_regularized: no convergence within budget; last objective gap " +
                       std::to_string(gap));
}

} // namespace sylnet
