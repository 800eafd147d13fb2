#include "sylnet/state.hpp"

#include <cmath>

namespace sylnet {

NetworkState make_zero_state(const BlockPartition& p, Algorithm algo) {
    const std::size_t n = p.agent_count();
    const std::size_t m = p.total_rows(), r = p.total_cols();
    const bool full_duals = algo != Algorithm::exact;
    NetworkState s;
    s.agents.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        AgentState& a = s.agents[i];
        a.X = DenseMatrix(m, r);
        a.Y = DenseMatrix(p.row_size(i), r);
        a.Z = DenseMatrix(m, p.col_size(i));
        a.W = DenseMatrix(m, r);
        a.Theta = DenseMatrix(m, r);
        if (full_duals) {
            a.Lambda = DenseMatrix(m, r);
            a.Upsilon = DenseMatrix(p.row_size(i), r);
        }
    }
    return s;
}

NetworkDerivative make_zero_derivative(const BlockPartition& p, Algorithm algo) {
    NetworkDerivative d;
    d.agents = make_zero_state(p, algo).agents;
    return d;
}

void state_axpy(NetworkState& s, double h, const NetworkDerivative& d) {
    if (s.agent_count() != d.agent_count())
        throw dimension_error("state_axpy: agent count mismatch");
    for (std::size_t i = 0; i < s.agents.size(); ++i) {
        auto sb = s.agents[i].blocks();
        auto db = d.agents[i].blocks();
        for (std::size_t k = 0; k < sb.size(); ++k)
            if (!sb[k]->empty()) sb[k]->axpy(h, *db[k]);
    }
}

namespace {

template <typename Agents>
double stacked_norm(const Agents& agents) {
    double sq = 0.0;
    for (const auto& a : agents)
        for (const DenseMatrix* b : a.blocks())
            sq += frobenius_inner(*b, *b);
    return std::sqrt(sq);
}

} // namespace

double state_norm(const NetworkState& s) { return stacked_norm(s.agents); }
double derivative_norm(const NetworkDerivative& d) { return stacked_norm(d.agents); }

double half_squared_distance(const NetworkState& s, const NetworkState& t) {
    if (s.agent_count() != t.agent_count())
        throw dimension_error("half_squared_distance: agent count mismatch");
    double sq = 0.0;
    for (std::size_t i = 0; i < s.agents.size(); ++i) {
        auto sb = s.agents[i].blocks();
        auto tb = t.agents[i].blocks();
        for (std::size_t k = 0; k < sb.size(); ++k) {
            if (!sb[k]->same_shape(*tb[k]))
                throw dimension_error("half_squared_distance: block shape mismatch");
            for (std::size_t e = 0; e < sb[k]->size(); ++e) {
                const double dv = sb[k]->data()[e] - tb[k]->data()[e];
                sq += dv * dv;
            }
        }
    }
    return 0.5 * sq;
}

bool state_is_finite(const NetworkState& s) {
    for (const auto& a : s.agents)
        for (const DenseMatrix* b : a.blocks())
            if (!b->is_finite()) return false;
    return true;
}

NetworkState state_add(const NetworkState& a, const NetworkState& b) {
    if (a.agent_count() != b.agent_count())
        throw dimension_error("state_add: agent count mismatch");
    NetworkState out = a;
    for (std::size_t i = 0; i < out.agents.size(); ++i) {
        auto ob = out.agents[i].blocks();
        auto bb = b.agents[i].blocks();
        for (std::size_t k = 0; k < ob.size(); ++k)
            if (!ob[k]->empty()) *ob[k] += *bb[k];
    }
    return out;
}

NetworkState state_sub(const NetworkState& a, const NetworkState& b) {
    if (a.agent_count() != b.agent_count())
        throw dimension_error("state_sub: agent count mismatch");
    NetworkState out = a;
    for (std::size_t i = 0; i < out.agents.size(); ++i) {
        auto ob = out.agents[i].blocks();
        auto bb = b.agents[i].blocks();
        for (std::size_t k = 0; k < ob.size(); ++k)
            if (!ob[k]->empty()) *ob[k] -= *bb[k];
    }
    return out;
}

} // namespace sylnet
