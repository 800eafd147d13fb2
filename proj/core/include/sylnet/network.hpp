#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sylnet/dense_matrix.hpp"

namespace sylnet {

struct Edge {
    std::size_t i;
    std::size_t j;
    double weight;
};

/// Weighted undirected communication graph. Construction rejects
/// self-loops, nonpositive weights and disconnected graphs, so a Network
/// in hand always satisfies the connectivity assumption.
class Network {
public:
    Network(std::size_t n, const std::vector<Edge>& edges);

    std::size_t agent_count() const { return n_; }
    double weight(std::size_t i, std::size_t j) const { return weights_(i, j); }
    const DenseMatrix& weights() const { return weights_; }

    /// Neighbors of agent i (positive-weight edges only). The dynamics
    /// iterate this list, never the full weight row, which keeps
    /// evaluation local by construction.
    const std::vector<std::size_t>& neighbors(std::size_t i) const { return adjacency_.at(i); }

    std::vector<Edge> edges() const;

private:
    std::size_t n_;
    DenseMatrix weights_;
    std::vector<std::vector<std::size_t>> adjacency_;
};

/// L = D - A; symmetric positive semidefinite, rows sum to zero.
DenseMatrix laplacian(const Network& net);

/// sum_j a_ij (blocks[i] - blocks[j]), reading only neighbor blocks.
DenseMatrix neighbor_sum(const Network& net, std::span<const DenseMatrix> blocks, std::size_t i);

Network complete_graph(std::size_t n, double weight = 1.0);
Network ring_graph(std::size_t n, double weight = 1.0);
Network path_graph(std::size_t n, double weight = 1.0);
/// Erdos-Renyi with edge probability p, redrawn until connected.
Network erdos_renyi_graph(std::size_t n, double p, std::uint64_t seed, double weight = 1.0);

/// Text format: first line "n", then one line per edge "i j weight".
void write_network(const std::filesystem::path& path, const Network& net);
Network read_network(const std::filesystem::path& path);

} // namespace sylnet
