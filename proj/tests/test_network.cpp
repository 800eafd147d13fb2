#include <doctest.h>

#include <Eigen/Dense>
#include <filesystem>
#include <string>

#include "sylnet/generators.hpp"
#include "sylnet/matrix_io.hpp"
#include "sylnet/network.hpp"
#include "test_helpers.hpp"

using namespace sylnet;

namespace {

Eigen::VectorXd symmetric_eigenvalues(const DenseMatrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(e).eigenvalues();
}

} // namespace

TEST_SUITE_BEGIN("network");

TEST_CASE("two-node edge builds a symmetric weight matrix") {
    Network net(2, {{0, 1, 1.0}});
    CHECK(net.weights() == DenseMatrix{{0, 1}, {1, 0}});
}

TEST_CASE("disconnected graphs are rejected naming the components") {
    try {
        Network net(3, {{0, 1, 1.0}});
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("disconnected") != std::string::npos);
        CHECK(msg.find("{0,1}") != std::string::npos);
        CHECK(msg.find("{2}") != std::string::npos);
    }
}

TEST_CASE("self-loops and nonpositive weights are rejected") {
    CHECK_THROWS_AS(Network(2, {{0, 0, 1.0}, {0, 1, 1.0}}), validation_error);
    CHECK_THROWS_AS(Network(2, {{0, 1, 0.0}}), validation_error);
    CHECK_THROWS_AS(Network(2, {{0, 1, -2.0}}), validation_error);
}

TEST_CASE("complete graph on 8 nodes has 28 unit edges") {
    Network k8 = complete_graph(8);
    CHECK(k8.edges().size() == 28);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(k8.weight(i, i) == 0.0);
        for (std::size_t j = 0; j < 8; ++j) {
            CHECK(k8.weight(i, j) == k8.weight(j, i));
            if (i < j && k8.weight(i, j) == 1.0) ++ones;
        }
    }
    CHECK(ones == 28);
}

TEST_CASE("laplacian of the two-node path") {
    CHECK(laplacian(path_graph(2)) == DenseMatrix{{1, -1}, {-1, 1}});
}

TEST_CASE("laplacian of K3, hand computed as D minus adjacency") {
    CHECK(laplacian(complete_graph(3)) ==
          DenseMatrix{{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}});
}

TEST_CASE("laplacian rows sum to zero") {
    Network net = erdos_renyi_graph(6, 0.5, 17);
    DenseMatrix l = laplacian(net);
    DenseMatrix ones(6, 1, 1.0);
    CHECK(frobenius_norm(l * ones) <= 1e-12);
}

TEST_CASE("laplacian is PSD with a single zero eigenvalue when connected") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        Network net = erdos_renyi_graph(5, 0.5, seed);
        auto ev = symmetric_eigenvalues(laplacian(net));
        CHECK(ev(0) >= -1e-12);
        CHECK(std::abs(ev(0)) <= 1e-12);
        CHECK(ev(1) > 1e-9); // algebraic connectivity
    }
}

TEST_CASE("kernel of L kron I is spanned by consensus directions") {
    Network net = ring_graph(4);
    DenseMatrix lk = kron(laplacian(net), DenseMatrix::identity(3));
    Rng rng(5);
    DenseMatrix v = rng.matrix(3, 1);
    DenseMatrix stacked(12, 1);
    for (std::size_t b = 0; b < 4; ++b)
        for (std::size_t k = 0; k < 3; ++k) stacked(b * 3 + k, 0) = v(k, 0);
    CHECK(frobenius_norm(lk * stacked) <= 1e-12);
}

TEST_CASE("neighbor sums") {
    Network path = path_graph(2);
    std::vector<DenseMatrix> blocks{DenseMatrix{{1}}, DenseMatrix{{3}}};
    CHECK(neighbor_sum(path, blocks, 0) == DenseMatrix{{-2}});

    std::vector<DenseMatrix> same{DenseMatrix{{2, 2}}, DenseMatrix{{2, 2}}};
    CHECK(neighbor_sum(path, same, 0) == DenseMatrix(1, 2));

    CHECK_THROWS_AS(neighbor_sum(path, std::vector<DenseMatrix>{DenseMatrix{{1}}, DenseMatrix{{1, 2}}}, 0),
                    dimension_error);
}

TEST_CASE("neighbor sums aggregate to zero and match the stacked Laplacian") {
    Network net = erdos_renyi_graph(5, 0.6, 23);
    Rng rng(29);
    std::vector<DenseMatrix> blocks;
    for (int i = 0; i < 5; ++i) blocks.push_back(rng.matrix(2, 3));

    DenseMatrix total(2, 3);
    for (std::size_t i = 0; i < 5; ++i) total += neighbor_sum(net, blocks, i);
    CHECK(frobenius_norm(total) <= 1e-12);

    // stacked check: (L kron I_2) stack == col{neighbor_sum_i}
    DenseMatrix stack(10, 3);
    for (std::size_t i = 0; i < 5; ++i) stack.set_block(2 * i, 0, blocks[i]);
    DenseMatrix lhs = kron(laplacian(net), DenseMatrix::identity(2)) * stack;
    for (std::size_t i = 0; i < 5; ++i) {
        DenseMatrix want = neighbor_sum(net, blocks, i);
        CHECK(sylnet_test::max_abs_diff(lhs.block(2 * i, 0, 2, 3), want) <= 1e-12);
    }
}

TEST_CASE("topology generators are connected") {
    CHECK(ring_graph(6).edges().size() == 6);
    CHECK(path_graph(4).edges().size() == 3);
    Network er = erdos_renyi_graph(7, 0.3, 99);
    CHECK(er.agent_count() == 7);
}

TEST_CASE("graph text format round-trips") {
    const auto dir = std::filesystem::temp_directory_path() / "sylnet_net_io";
    std::filesystem::create_directories(dir);
    Network net(3, {{0, 1, 0.25}, {1, 2, 2.5}});
    write_network(dir / "g.txt", net);
    Network back = read_network(dir / "g.txt");
    CHECK(back.weights() == net.weights());
    std::filesystem::remove_all(dir);
}

TEST_SUITE_END();
