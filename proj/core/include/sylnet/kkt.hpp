#pragma once

#include <vector>

#include "sylnet/problem.hpp"
#include "sylnet/state.hpp"

namespace sylnet {

/// Largest block Frobenius norm of the first-order optimality system of
/// the least-squares formulation; zero exactly at its KKT points.
double kkt_residual_ls(const SylvesterProblem& prob, const NetworkState& s);

/// Same for the exact-solution formulation (states without Lambda and
/// Upsilon blocks).
double kkt_residual_exact(const SylvesterProblem& prob, const NetworkState& s);

/// Same for the L1-regularized formulation. The stationarity block is a
/// set distance: where an entry of X_i vanishes the subdifferential is an
/// interval and the distance is max(0, |g| - alpha) entrywise.
double kkt_residual_reg(const SylvesterProblem& prob, const NetworkState& s);

/// Chooses the evaluator matching the state layout and penalty.
double kkt_residual(const SylvesterProblem& prob, const NetworkState& s, Algorithm algo);

/// Assembles a full primal-dual KKT point from a centralized solution.
/// X_hat must be a least-squares (resp. exact, resp. L1-regularized)
/// minimizer; the dual blocks are recovered in closed form plus two
/// Laplacian solves.
NetworkState build_kkt_point_ls(const SylvesterProblem& prob, const DenseMatrix& x_hat);
NetworkState build_kkt_point_exact(const SylvesterProblem& prob, const DenseMatrix& x_hat);

struct RegularizedKktPoint {
    NetworkState state;
    /// Per-agent subgradient certificates h_i* from the stationarity block.
    std::vector<DenseMatrix> h_star;
};
RegularizedKktPoint build_kkt_point_reg(const SylvesterProblem& prob, const DenseMatrix& x_hat);

} // namespace sylnet
