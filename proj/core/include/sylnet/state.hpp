#pragma once

#include <array>
#include <vector>

#include "sylnet/dense_matrix.hpp"
#include "sylnet/partition.hpp"

namespace sylnet {

enum class Algorithm { least_squares, exact, regularized };

/// All blocks agent i evolves. The exact-solution algorithm runs without
/// the Lambda and Upsilon multipliers; those blocks are then 0x0 and every
/// generic loop skips them naturally.
struct AgentState {
    DenseMatrix X;       // m x r, solution estimate
    DenseMatrix Y;       // m_i x r, estimate of A_i X
    DenseMatrix Z;       // m x r_i, estimate of C_i - X B_i
    DenseMatrix W;       // m x r, coupling compensator
    DenseMatrix Lambda;  // m x r, consensus multiplier
    DenseMatrix Upsilon; // m_i x r, row-equation multiplier
    DenseMatrix Theta;   // m x r, coupling multiplier

    std::array<DenseMatrix*, 7> blocks() { return {&X, &Y, &Z, &W, &Lambda, &Upsilon, &Theta}; }
    std::array<const DenseMatrix*, 7> blocks() const {
        return {&X, &Y, &Z, &W, &Lambda, &Upsilon, &Theta};
    }
};

struct NetworkState {
    std::vector<AgentState> agents;

    std::size_t agent_count() const { return agents.size(); }
};

/// Same shape as the state it differentiates. For the regularization
/// dynamics the X blocks hold the selected elements of the differential
/// inclusion, which are exactly the values fed back into the other lines.
struct NetworkDerivative {
    std::vector<AgentState> agents;

    std::size_t agent_count() const { return agents.size(); }
};

/// Zero state with the block shapes the given algorithm evolves.
NetworkState make_zero_state(const BlockPartition& p, Algorithm algo);
NetworkDerivative make_zero_derivative(const BlockPartition& p, Algorithm algo);

/// s += h * d, blockwise.
void state_axpy(NetworkState& s, double h, const NetworkDerivative& d);

/// Frobenius norm of the stacked blocks.
double state_norm(const NetworkState& s);
double derivative_norm(const NetworkDerivative& d);

/// 0.5 * || s - t ||_F^2 over all blocks; shapes must agree.
double half_squared_distance(const NetworkState& s, const NetworkState& t);

bool state_is_finite(const NetworkState& s);

NetworkState state_add(const NetworkState& a, const NetworkState& b);
NetworkState state_sub(const NetworkState& a, const NetworkState& b);

} // namespace sylnet
