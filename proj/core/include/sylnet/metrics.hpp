#pragma once

#include <vector>

#include "sylnet/problem.hpp"
#include "sylnet/state.hpp"

namespace sylnet {

/// (1/n) sum_i sum_j ||X_i - X_j||_F^2 over ordered pairs.
double consensus_error(const NetworkState& s);

/// (1/n) sum_i ||X_i - X_ref||_F^2.
double estimation_error(const NetworkState& s, const DenseMatrix& x_ref);

/// Mean of the agents' estimates, the reported consensus solution.
DenseMatrix mean_estimate(const NetworkState& s);

/// Quadratic Lyapunov function 0.5 ||P - P*||_F^2 for the smooth
/// dynamics (least-squares and exact layouts alike; absent blocks
/// contribute nothing). s_star must be an equilibrium: its KKT residual is
/// checked against 1e-9.
double lyapunov_ls(const SylvesterProblem& prob, const NetworkState& s,
                   const NetworkState& s_star);

/// Nonsmooth Lyapunov function for the regularized dynamics: a Bregman
/// term of the penalty at the certificate h_star plus the Laplacian and
/// operator quadratics. Zero exactly at s_star.
double lyapunov_reg(const SylvesterProblem& prob, const NetworkState& s,
                    const NetworkState& s_star, const std::vector<DenseMatrix>& h_star);

/// Recovers the per-agent subgradient certificates of an equilibrium of
/// the regularized dynamics from its stationarity block.
std::vector<DenseMatrix> recover_equilibrium_subgradient(const SylvesterProblem& prob,
                                                         const NetworkState& s_star);

} // namespace sylnet
