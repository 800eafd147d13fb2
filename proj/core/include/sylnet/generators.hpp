#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "sylnet/problem.hpp"

namespace sylnet {

/// Uniform RNG with a platform-independent mapping from the mt19937_64
/// stream to doubles; all generators are bit-reproducible under a seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        const double u = (gen_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    DenseMatrix matrix(std::size_t rows, std::size_t cols, double lo = -1.0, double hi = 1.0) {
        DenseMatrix m(rows, cols);
        for (double& v : m.data()) v = uniform(lo, hi);
        return m;
    }

private:
    std::mt19937_64 gen_;
};

/// Random instance with spec(A) and spec(-B) numerically disjoint and
/// C = A X* + X* B, so X* solves it exactly and uniquely.
std::pair<SylvesterProblem, DenseMatrix>
gen_exact_instance(const BlockPartition& partition, const Network& network, std::uint64_t seed);

/// Random instance whose operator is singular (spectra forced to overlap
/// by an eigenvalue shift of B) and whose right-hand side lies off the
/// operator range: the minimal residual is certified > 1e-3.
SylvesterProblem
gen_inconsistent_instance(const BlockPartition& partition, const Network& network, std::uint64_t seed);

/// Singular operator as above but with C = A X0 + X0 B, so solutions
/// exist and form a continuum. Returns one particular solution X0.
std::pair<SylvesterProblem, DenseMatrix>
gen_singular_consistent_instance(const BlockPartition& partition, const Network& network,
                                 std::uint64_t seed);

/// Smallest |lambda + mu| over lambda in spec(A), mu in spec(B); zero
/// exactly when the Sylvester operator of (A, B) is singular.
double spectral_gap(const DenseMatrix& a, const DenseMatrix& b);

} // namespace sylnet
