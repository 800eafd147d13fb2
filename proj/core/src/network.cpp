#include "sylnet/network.hpp"

#include <fstream>
#include <queue>
#include <random>
#include <sstream>

#include "sylnet/matrix_io.hpp"

namespace sylnet {

namespace {

std::string describe_components(const std::vector<std::vector<std::size_t>>& comps) {
    std::ostringstream os;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        if (c) os << " | ";
        os << '{';
        for (std::size_t k = 0; k < comps[c].size(); ++k) {
            if (k) os << ',';
            os << comps[c][k];
        }
        os << '}';
    }
    return os.str();
}

} // namespace

Network::Network(std::size_t n, const std::vector<Edge>& edges)
    : n_(n), weights_(n, n), adjacency_(n) {
    if (n == 0) throw validation_error("Network: need at least one agent");
    for (const Edge& e : edges) {
        if (e.i >= n || e.j >= n)
            throw validation_error("Network: edge index out of range");
        if (e.i == e.j)
            throw validation_error("Network: self-loop at node " + std::to_string(e.i));
        if (e.weight <= 0.0)
            throw validation_error("Network: nonpositive weight on edge (" +
                                   std::to_string(e.i) + "," + std::to_string(e.j) + ")");
        weights_(e.i, e.j) = e.weight;
        weights_(e.j, e.i) = e.weight;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (weights_(i, j) > 0.0) adjacency_[i].push_back(j);

    // Breadth-first search; disconnected graphs violate the standing
    // connectivity assumption and are rejected with the components named.
    std::vector<int> comp(n, -1);
    std::vector<std::vector<std::size_t>> comps;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comps.emplace_back();
        std::queue<std::size_t> q;
        q.push(s);
        comp[s] = static_cast<int>(comps.size()) - 1;
        while (!q.empty()) {
            std::size_t v = q.front();
            q.pop();
            comps.back().push_back(v);
            for (std::size_t w : adjacency_[v])
                if (comp[w] < 0) {
                    comp[w] = comp[s];
                    q.push(w);
                }
        }
    }
    if (comps.size() > 1)
        throw validation_error("Network: graph is disconnected; components " +
                               describe_components(comps));
}

std::vector<Edge> Network::edges() const {
    std::vector<Edge> es;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if (weights_(i, j) > 0.0) es.push_back({i, j, weights_(i, j)});
    return es;
}

DenseMatrix laplacian(const Network& net) {
    const std::size_t n = net.agent_count();
    DenseMatrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double deg = 0.0;
        for (std::size_t j : net.neighbors(i)) {
            const double a = net.weight(i, j);
            l(i, j) = -a;
            deg += a;
        }
        l(i, i) = deg;
    }
    return l;
}

DenseMatrix neighbor_sum(const Network& net, std::span<const DenseMatrix> blocks, std::size_t i) {
    if (blocks.size() != net.agent_count())
        throw dimension_error("neighbor_sum: one block per agent required");
    const DenseMatrix& own = blocks[i];
    DenseMatrix acc(own.rows(), own.cols());
    for (std::size_t j : net.neighbors(i)) {
        if (!blocks[j].same_shape(own))
            throw dimension_error("neighbor_sum: block shape mismatch at agent " + std::to_string(j));
        const double a = net.weight(i, j);
        for (std::size_t k = 0; k < acc.size(); ++k)
            acc.data()[k] += a * (own.data()[k] - blocks[j].data()[k]);
    }
    return acc;
}

Network complete_graph(std::size_t n, double weight) {
    std::vector<Edge> es;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) es.push_back({i, j, weight});
    return Network(n, es);
}

Network ring_graph(std::size_t n, double weight) {
    if (n < 3) return path_graph(n, weight);
    std::vector<Edge> es;
    for (std::size_t i = 0; i < n; ++i) es.push_back({i, (i + 1) % n, weight});
    return Network(n, es);
}

Network path_graph(std::size_t n, double weight) {
    std::vector<Edge> es;
    for (std::size_t i = 0; i + 1 < n; ++i) es.push_back({i, i + 1, weight});
    return Network(n, es);
}

Network erdos_renyi_graph(std::size_t n, double p, std::uint64_t seed, double weight) {
    std::mt19937_64 gen(seed);
    auto unit = [&gen] { return (gen() >> 11) * 0x1.0p-53; };
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<Edge> es;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (unit() < p) es.push_back({i, j, weight});
        try {
            return Network(n, es);
        } catch (const validation_error&) {
            // disconnected draw, try again
        }
    }
    throw generation_error("erdos_renyi_graph: no connected draw within budget");
}

void write_network(const std::filesystem::path& path, const Network& net) {
    std::ofstream os(path);
    if (!os) throw io_error("write_network: cannot open " + path.string());
    os << net.agent_count() << '\n';
    for (const Edge& e : net.edges())
        os << e.i << ' ' << e.j << ' ' << format_double(e.weight) << '\n';
}

Network read_network(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw io_error("read_network: cannot open " + path.string());
    std::size_t n = 0;
    if (!(is >> n)) throw io_error("read_network: missing node count");
    std::vector<Edge> es;
    Edge e{};
    while (is >> e.i >> e.j >> e.weight) es.push_back(e);
    return Network(n, es);
}

} // namespace sylnet
