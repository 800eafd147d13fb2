#pragma once

#include <vector>

#include "sylnet/problem.hpp"
#include "sylnet/state.hpp"

namespace sylnet {

/// Per-agent problem slices and transposes, precomputed once and reused
/// across field evaluations.
class DynamicsWorkspace {
public:
    explicit DynamicsWorkspace(const SylvesterProblem& prob);

    const AgentData& data(std::size_t i) const { return data_[i]; }
    const DenseMatrix& a_transpose(std::size_t i) const { return a_t_[i]; }
    const DenseMatrix& b_transpose(std::size_t i) const { return b_t_[i]; }

private:
    std::vector<AgentData> data_;
    std::vector<DenseMatrix> a_t_;
    std::vector<DenseMatrix> b_t_;
};

/// Entrywise sign of X (zero at zero): the single-valued selection that
/// turns the regularized differential inclusion into an integrable field.
DenseMatrix select_subgradient(const PenaltySpec& penalty, const DenseMatrix& x);

/// Saddle-point field of the least-squares formulation. Each agent's
/// blocks depend only on its own data and neighbor blocks (X, W, Theta,
/// Lambda); agents may be evaluated in parallel against the snapshot s.
void vf_least_squares(const SylvesterProblem& prob, const DynamicsWorkspace& ws,
                      const NetworkState& s, NetworkDerivative& out, unsigned threads = 1);
NetworkDerivative vf_least_squares(const SylvesterProblem& prob, const NetworkState& s);

/// Reduced field for the exact-solution case (no Lambda/Upsilon blocks).
void vf_exact(const SylvesterProblem& prob, const DynamicsWorkspace& ws,
              const NetworkState& s, NetworkDerivative& out, unsigned threads = 1);
NetworkDerivative vf_exact(const SylvesterProblem& prob, const NetworkState& s);

/// Regularized field with derivative feedback: phase one selects every
/// agent's dX, phase two consumes those values (dY, dZ, dLambda, dUpsilon
/// read dX of the agent and, for dLambda, of its neighbors). The phases
/// are separated by a barrier; within a phase agents are independent.
void vf_regularized(const SylvesterProblem& prob, const DynamicsWorkspace& ws,
                    const NetworkState& s, NetworkDerivative& out, unsigned threads = 1);
NetworkDerivative vf_regularized(const SylvesterProblem& prob, const NetworkState& s);

/// Dispatch on the algorithm tag.
void evaluate_field(const SylvesterProblem& prob, const DynamicsWorkspace& ws, Algorithm algo,
                    const NetworkState& s, NetworkDerivative& out, unsigned threads = 1);

} // namespace sylnet
