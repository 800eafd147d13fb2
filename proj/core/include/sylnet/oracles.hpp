#pragma once

#include <vector>

#include "sylnet/problem.hpp"

namespace sylnet {

/// Centralized reference solution used to certify the distributed runs.
struct OracleSolution {
    DenseMatrix X_star;
    double residual = 0.0;  // ||A X* + X* B - C||_F
    double objective = 0.0; // 0.5 res^2 (+ n alpha |X*|_1 for L1 problems)
    bool minimal_residual = false;
    bool unique = false;
};

/// Minimum-norm least-squares solution of the vectorized system, computed
/// by singular-value pseudo-inverse with cutoff 1e-10 * sigma_max.
OracleSolution oracle_least_squares(const SylvesterProblem& prob);

/// Proximal-gradient (ISTA) minimizer of
///   0.5 ||AX+XB-C||_F^2 + n alpha |X|_1,
/// iterated until the objective decrease falls below 1e-12 (at most 1e6
/// iterations, else an oracle_error reports the last objective gap).
OracleSolution oracle_regularized(const SylvesterProblem& prob);

/// Singular values of the vectorized operator, descending.
std::vector<double> operator_singular_values(const SylvesterProblem& prob);

} // namespace sylnet
