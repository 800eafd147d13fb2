#include "sylnet/generators.hpp"

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <vector>

#include "sylnet/oracles.hpp"

namespace sylnet {

namespace {

constexpr int kResampleBudget = 256;

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

std::vector<std::complex<double>> eigenvalues(const DenseMatrix& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(m), /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> vals(m.rows());
    for (std::size_t k = 0; k < m.rows(); ++k) vals[k] = es.eigenvalues()(k);
    return vals;
}

bool has_real_eigenvalue(const std::vector<std::complex<double>>& vals, double tol) {
    for (const auto& v : vals)
        if (std::abs(v.imag()) <= tol) return true;
    return false;
}

/// Shifts B so that -lambda is (numerically exactly) an eigenvalue of B,
/// for some real eigenvalue lambda of A. Refines the shift a few times so
/// the overlap lands far below the pseudo-inverse rank cutoff.
bool force_spectrum_overlap(const DenseMatrix& a, DenseMatrix& b) {
    const double real_tol = 1e-9;
    auto eig_a = eigenvalues(a);
    double lambda = std::numeric_limits<double>::quiet_NaN();
    for (const auto& v : eig_a)
        if (std::abs(v.imag()) <= real_tol &&
            (std::isnan(lambda) || std::abs(v.real()) < std::abs(lambda)))
            lambda = v.real();
    if (std::isnan(lambda)) return false;

    for (int iter = 0; iter < 6; ++iter) {
        auto eig_b = eigenvalues(b);
        double err = std::numeric_limits<double>::infinity();
        for (const auto& v : eig_b) {
            if (std::abs(v.imag()) > real_tol) continue;
            const double e = v.real() + lambda;
            if (std::abs(e) < std::abs(err)) err = e;
        }
        if (std::isinf(err)) return false;
        if (std::abs(err) <= 1e-13 * (1.0 + std::abs(lambda))) return true;
        for (std::size_t k = 0; k < b.rows(); ++k) b(k, k) -= err;
    }
    return spectral_gap(a, b) <= 1e-12;
}

} // namespace

double spectral_gap(const DenseMatrix& a, const DenseMatrix& b) {
    auto ea = eigenvalues(a);
    auto eb = eigenvalues(b);
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& la : ea)
        for (const auto& mb : eb) gap = std::min(gap, std::abs(la + mb));
    return gap;
}

std::pair<SylvesterProblem, DenseMatrix>
gen_exact_instance(const BlockPartition& partition, const Network& network, std::uint64_t seed) {
    const std::size_t m = partition.total_rows(), r = partition.total_cols();
    Rng rng(seed);
    for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
        DenseMatrix a = rng.matrix(m, m);
        DenseMatrix b = rng.matrix(r, r);
        if (spectral_gap(a, b) <= 1e-6) continue;
        DenseMatrix x_star = rng.matrix(m, r);
        DenseMatrix c = a * x_star;
        multiply_add_into(c, x_star, b);
        return {SylvesterProblem(std::move(a), std::move(b), std::move(c), partition, network),
                std::move(x_star)};
    }
    throw generation_error("gen_exact_instance: no spectrally disjoint draw within budget");
}

namespace {

/// Draws (A, B) with an exact spectral overlap and a clean numerical rank
/// gap of the associated operator.
std::pair<DenseMatrix, DenseMatrix>
draw_singular_pair(Rng& rng, std::size_t m, std::size_t r,
                   const BlockPartition& partition, const Network& network) {
    for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
        DenseMatrix a = rng.matrix(m, m);
        DenseMatrix b = rng.matrix(r, r);
        if (!has_real_eigenvalue(eigenvalues(a), 1e-9)) continue;
        if (!has_real_eigenvalue(eigenvalues(b), 1e-9)) continue;
        if (!force_spectrum_overlap(a, b)) continue;

        SylvesterProblem probe(a, b, DenseMatrix(m, r), partition, network);
        const auto sv = operator_singular_values(probe);
        const double smax = sv.front();
        const double cutoff = 1e-10 * smax;
        std::size_t deficient = 0;
        double smallest_kept = smax;
        for (double s : sv) {
            if (s <= cutoff)
                ++deficient;
            else
                smallest_kept = std::min(smallest_kept, s);
        }
        // Require an unambiguous rank decision: dropped directions far
        // below the cutoff, kept ones far above it.
        if (deficient == 0) continue;
        bool clean = smallest_kept >= 1e-6 * smax;
        for (double s : sv)
            if (s <= cutoff && s > 1e-12 * smax) clean = false;
        if (!clean) continue;
        return {std::move(a), std::move(b)};
    }
    throw generation_error("singular-pair draw exhausted its resample budget");
}

} // namespace

SylvesterProblem
gen_inconsistent_instance(const BlockPartition& partition, const Network& network,
                          std::uint64_t seed) {
    const std::size_t m = partition.total_rows(), r = partition.total_cols();
    Rng rng(seed);
    for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
        auto [a, b] = draw_singular_pair(rng, m, r, partition, network);
        DenseMatrix c = rng.matrix(m, r);
        SylvesterProblem prob(std::move(a), std::move(b), std::move(c), partition, network);
        if (oracle_least_squares(prob).residual > 1e-3) return prob;
    }
    throw generation_error("gen_inconsistent_instance: residual check failed within budget");
}

std::pair<SylvesterProblem, DenseMatrix>
gen_singular_consistent_instance(const BlockPartition& partition, const Network& network,
                                 std::uint64_t seed) {
    const std::size_t m = partition.total_rows(), r = partition.total_cols();
    Rng rng(seed);
    auto [a, b] = draw_singular_pair(rng, m, r, partition, network);
    DenseMatrix x0 = rng.matrix(m, r);
    DenseMatrix c = a * x0;
    multiply_add_into(c, x0, b);
    return {SylvesterProblem(std::move(a), std::move(b), std::move(c), partition, network),
            std::move(x0)};
}

} // namespace sylnet
