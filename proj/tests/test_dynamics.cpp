#include <doctest.h>

#include <cmath>

#include "sylnet/dynamics.hpp"
#include "sylnet/generators.hpp"
#include "sylnet/kkt.hpp"
#include "sylnet/metrics.hpp"
#include "sylnet/oracles.hpp"
#include "test_helpers.hpp"

using namespace sylnet;
using sylnet_test::max_abs_diff;
using sylnet_test::small_exact_problem;

namespace {

SylvesterProblem scalar_problem(double a, double b, double c,
                                PenaltySpec pen = PenaltySpec::none()) {
    return SylvesterProblem(DenseMatrix{{a}}, DenseMatrix{{b}}, DenseMatrix{{c}},
                            BlockPartition({1}, {1}), Network(1, {}), pen);
}

struct ScalarState {
    double x = 0, y = 0, z = 0, w = 0, lambda = 0, upsilon = 0, theta = 0;
};

NetworkState to_state(const ScalarState& v, Algorithm algo) {
    NetworkState s = make_zero_state(BlockPartition({1}, {1}), algo);
    AgentState& a = s.agents[0];
    a.X(0, 0) = v.x;
    a.Y(0, 0) = v.y;
    a.Z(0, 0) = v.z;
    a.W(0, 0) = v.w;
    a.Theta(0, 0) = v.theta;
    if (algo != Algorithm::exact) {
        a.Lambda(0, 0) = v.lambda;
        a.Upsilon(0, 0) = v.upsilon;
    }
    return s;
}

/// Independent single-agent evaluation of the three flows, written out as
/// plain scalar arithmetic.
ScalarState scalar_ls_field(double a, double b, double c, const ScalarState& s) {
    const double col = s.x * b - c + s.z;
    const double row = a * s.x - s.y;
    ScalarState d;
    d.x = -col * b - a * row - a * s.upsilon;
    d.y = s.upsilon - s.theta + row;
    d.z = -col + s.theta;
    d.w = 0;
    d.lambda = 0;
    d.upsilon = row;
    d.theta = s.y - s.z;
    return d;
}

ScalarState scalar_exact_field(double a, double b, double c, const ScalarState& s) {
    const double col = s.x * b - c + s.z;
    const double row = a * s.x - s.y;
    ScalarState d;
    d.x = -col * b - a * row;
    d.y = row - s.theta;
    d.z = -col + s.theta;
    d.w = 0;
    d.theta = s.y - s.z;
    return d;
}

ScalarState scalar_reg_field(double a, double b, double c, double alpha, const ScalarState& s) {
    const double col = s.x * b - c + s.z;
    const double row = a * s.x - s.y;
    const double h = s.x > 0 ? 1.0 : (s.x < 0 ? -1.0 : 0.0);
    ScalarState d;
    d.x = -col * b - a * row - a * s.upsilon - alpha * h;
    d.y = s.upsilon - s.theta + row - a * d.x;
    d.z = -col + d.x * b + s.theta;
    d.w = 0;
    d.lambda = 0;
    d.upsilon = row + a * d.x;
    d.theta = s.y - s.z;
    return d;
}

void check_scalar(const AgentState& got, const ScalarState& want, bool full, double tol) {
    CHECK(std::abs(got.X(0, 0) - want.x) <= tol);
    CHECK(std::abs(got.Y(0, 0) - want.y) <= tol);
    CHECK(std::abs(got.Z(0, 0) - want.z) <= tol);
    CHECK(std::abs(got.W(0, 0) - want.w) <= tol);
    CHECK(std::abs(got.Theta(0, 0) - want.theta) <= tol);
    if (full) {
        CHECK(std::abs(got.Lambda(0, 0) - want.lambda) <= tol);
        CHECK(std::abs(got.Upsilon(0, 0) - want.upsilon) <= tol);
    }
}

} // namespace

TEST_SUITE_BEGIN("dynamics");

TEST_CASE("single-agent fields match the scalar hand oracle") {
    Rng rng(61);
    for (int trial = 0; trial < 25; ++trial) {
        const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), c = rng.uniform(-2, 2);
        ScalarState v{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                      rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                      rng.uniform(-2, 2)};

        SylvesterProblem ls = scalar_problem(a, b, c);
        NetworkDerivative dls = vf_least_squares(ls, to_state(v, Algorithm::least_squares));
        check_scalar(dls.agents[0], scalar_ls_field(a, b, c, v), true, 1e-12);

        NetworkDerivative dex = vf_exact(ls, to_state(v, Algorithm::exact));
        check_scalar(dex.agents[0], scalar_exact_field(a, b, c, v), false, 1e-12);

        const double alpha = 0.5 + rng.uniform(0, 1);
        SylvesterProblem reg = scalar_problem(a, b, c, PenaltySpec::l1(alpha));
        NetworkDerivative drg = vf_regularized(reg, to_state(v, Algorithm::regularized));
        check_scalar(drg.agents[0], scalar_reg_field(a, b, c, alpha, v), true, 1e-12);
    }
}

TEST_CASE("worked scalar example: zero state, A=B=1, C=2") {
    SylvesterProblem prob = scalar_problem(1, 1, 2);
    NetworkDerivative d = vf_least_squares(prob, to_state({}, Algorithm::least_squares));
    CHECK(d.agents[0].X(0, 0) == 2.0);
    CHECK(d.agents[0].Z(0, 0) == 2.0);
    CHECK(d.agents[0].Y(0, 0) == 0.0);
    CHECK(d.agents[0].Upsilon(0, 0) == 0.0);
}

TEST_CASE("regularized phase one includes the penalty pull at X=2") {
    SylvesterProblem reg = scalar_problem(1, 1, 2, PenaltySpec::l1(1.0));
    ScalarState v;
    v.x = 2.0;
    NetworkDerivative d = vf_regularized(reg, to_state(v, Algorithm::regularized));
    // smooth part: -(2-2)*1 - 1*(2-0) - 0 = -2; penalty adds -1
    CHECK(d.agents[0].X(0, 0) == -3.0);
}

TEST_CASE("consensual zero state of the zero problem is stationary") {
    BlockPartition p({1, 1}, {1, 1});
    SylvesterProblem zero(DenseMatrix(2, 2), DenseMatrix(2, 2), DenseMatrix(2, 2), p,
                          complete_graph(2));
    CHECK(derivative_norm(vf_least_squares(zero, make_zero_state(p, Algorithm::least_squares))) == 0.0);
    CHECK(derivative_norm(vf_exact(zero, make_zero_state(p, Algorithm::exact))) == 0.0);
}

TEST_CASE("fields vanish at constructed KKT points") {
    auto [prob, x_star] = small_exact_problem(4, 4, 3, 71);

    NetworkState ls_pt = build_kkt_point_ls(prob, oracle_least_squares(prob).X_star);
    CHECK(derivative_norm(vf_least_squares(prob, ls_pt)) <= 1e-9);

    NetworkState ex_pt = build_kkt_point_exact(prob, x_star);
    CHECK(derivative_norm(vf_exact(prob, ex_pt)) <= 1e-9);

    // small penalty keeps the regularized optimum entrywise nonzero, so
    // the selected subgradient matches the certificate
    SylvesterProblem reg = prob;
    reg.penalty = PenaltySpec::l1(1e-3);
    OracleSolution rsol = oracle_regularized(reg);
    for (double v : rsol.X_star.data()) REQUIRE(v != 0.0);
    auto reg_pt = build_kkt_point_reg(reg, rsol.X_star);
    CHECK(derivative_norm(vf_regularized(reg, reg_pt.state)) <= 1e-9);
}

TEST_CASE("equilibria and KKT points coincide through both residuals") {
    auto [prob, x_star] = small_exact_problem(3, 3, 3, 72);
    Rng rng(73);
    NetworkState point = build_kkt_point_ls(prob, oracle_least_squares(prob).X_star);
    for (int trial = 0; trial < 20; ++trial) {
        NetworkState s = point;
        const double scale = trial == 0 ? 0.0 : rng.uniform(1e-4, 1.0);
        for (AgentState& a : s.agents)
            for (DenseMatrix* blk : a.blocks())
                for (double& v : blk->data()) v += rng.uniform(-scale, scale);
        const double field = derivative_norm(vf_least_squares(prob, s));
        const double kkt = kkt_residual_ls(prob, s);
        CHECK((field <= 1e-9) == (kkt <= 1e-9));
    }
}

TEST_CASE("subgradient selection") {
    PenaltySpec pen = PenaltySpec::l1(1.0);
    CHECK(select_subgradient(pen, DenseMatrix{{2, 0}, {-3, 1}}) == DenseMatrix{{1, 0}, {-1, 1}});
    CHECK(select_subgradient(pen, DenseMatrix(2, 2)) == DenseMatrix(2, 2));

    Rng rng(74);
    for (int trial = 0; trial < 30; ++trial) {
        DenseMatrix x = rng.matrix(3, 3), y = rng.matrix(3, 3);
        const double mono = frobenius_inner(select_subgradient(pen, x) - select_subgradient(pen, y), x - y);
        CHECK(mono >= 0.0);
    }
}

TEST_CASE("regularized X line reduces to the least-squares line as alpha vanishes") {
    auto [prob, x_star] = small_exact_problem(3, 4, 2, 75);
    SylvesterProblem reg = prob;
    reg.penalty = PenaltySpec::l1(1e-300);
    Rng rng(76);
    NetworkState s = make_zero_state(prob.partition, Algorithm::least_squares);
    for (AgentState& a : s.agents)
        for (DenseMatrix* blk : a.blocks())
            for (double& v : blk->data()) v = rng.uniform(-1, 1);
    NetworkDerivative dls = vf_least_squares(prob, s);
    NetworkDerivative drg = vf_regularized(reg, s);
    for (std::size_t i = 0; i < s.agent_count(); ++i)
        CHECK(max_abs_diff(dls.agents[i].X, drg.agents[i].X) <= 1e-12);
}

TEST_CASE("locality: non-neighbor corruption cannot reach an agent") {
    const std::size_t n = 6;
    auto part = BlockPartition::equal_blocks(n, n, n);
    auto net = ring_graph(n);
    auto [prob, x_star] = gen_exact_instance(part, net, 81);
    SylvesterProblem reg = prob;
    reg.penalty = PenaltySpec::l1(0.2);

    Rng rng(82);
    auto randomize = [&rng](NetworkState& s) {
        for (AgentState& a : s.agents)
            for (DenseMatrix* blk : a.blocks())
                for (double& v : blk->data()) v = rng.uniform(-1, 1);
    };

    auto corrupted_copy = [&](const NetworkState& s, std::size_t observer, int min_distance) {
        NetworkState bad = s;
        for (std::size_t j = 0; j < n; ++j) {
            const int dist = static_cast<int>(std::min((j + n - observer) % n, (observer + n - j) % n));
            if (dist >= min_distance)
                for (DenseMatrix* blk : bad.agents[j].blocks())
                    for (double& v : blk->data()) v = std::nan("");
        }
        return bad;
    };

    auto agents_equal = [](const AgentState& a, const AgentState& b) {
        auto ab = a.blocks();
        auto bb = b.blocks();
        for (std::size_t k = 0; k < ab.size(); ++k)
            if (!(*ab[k] == *bb[k])) return false;
        return true;
    };

    for (std::size_t observer = 0; observer < n; ++observer) {
        // smooth flows: every non-neighbor may be garbage
        NetworkState s = make_zero_state(part, Algorithm::least_squares);
        randomize(s);
        NetworkState bad = corrupted_copy(s, observer, 2);
        CHECK(agents_equal(vf_least_squares(prob, s).agents[observer],
                           vf_least_squares(prob, bad).agents[observer]));

        NetworkState se = make_zero_state(part, Algorithm::exact);
        randomize(se);
        NetworkState bad_e = corrupted_copy(se, observer, 2);
        CHECK(agents_equal(vf_exact(prob, se).agents[observer],
                           vf_exact(prob, bad_e).agents[observer]));

        // regularized flow: the exchanged dX of a neighbor is computed from
        // that neighbor's own neighborhood, so corruption must stay outside
        // distance two
        NetworkState sr = make_zero_state(part, Algorithm::regularized);
        randomize(sr);
        NetworkState bad_r2 = corrupted_copy(sr, observer, 3);
        CHECK(agents_equal(vf_regularized(reg, sr).agents[observer],
                           vf_regularized(reg, bad_r2).agents[observer]));
        // and every block except the dX-consuming consensus multiplier is
        // immune to any non-neighbor corruption
        NetworkState bad_r1 = corrupted_copy(sr, observer, 2);
        NetworkDerivative clean = vf_regularized(reg, sr);
        NetworkDerivative dirty = vf_regularized(reg, bad_r1);
        CHECK(clean.agents[observer].X == dirty.agents[observer].X);
        CHECK(clean.agents[observer].Y == dirty.agents[observer].Y);
        CHECK(clean.agents[observer].Z == dirty.agents[observer].Z);
        CHECK(clean.agents[observer].W == dirty.agents[observer].W);
        CHECK(clean.agents[observer].Upsilon == dirty.agents[observer].Upsilon);
        CHECK(clean.agents[observer].Theta == dirty.agents[observer].Theta);
    }
}

TEST_CASE("consensus blocks aggregate to zero") {
    auto [prob, x_star] = small_exact_problem(4, 4, 4, 83);
    Rng rng(84);
    NetworkState s = make_zero_state(prob.partition, Algorithm::least_squares);
    for (AgentState& a : s.agents)
        for (DenseMatrix* blk : a.blocks())
            for (double& v : blk->data()) v = rng.uniform(-1, 1);
    NetworkDerivative d = vf_least_squares(prob, s);
    DenseMatrix w_total(prob.m(), prob.r()), l_total(prob.m(), prob.r());
    for (const AgentState& a : d.agents) {
        w_total += a.W;
        l_total += a.Lambda;
    }
    CHECK(frobenius_norm(w_total) <= 1e-12);
    CHECK(frobenius_norm(l_total) <= 1e-12);

    SylvesterProblem reg = prob;
    reg.penalty = PenaltySpec::l1(0.3);
    NetworkDerivative dr = vf_regularized(reg, s);
    DenseMatrix lr_total(prob.m(), prob.r());
    for (const AgentState& a : dr.agents) lr_total += a.Lambda;
    CHECK(frobenius_norm(lr_total) <= 1e-11);
}

TEST_CASE("Upsilon line restates the row residual exactly") {
    auto [prob, x_star] = small_exact_problem(4, 3, 2, 85);
    Rng rng(86);
    NetworkState s = make_zero_state(prob.partition, Algorithm::least_squares);
    for (AgentState& a : s.agents)
        for (DenseMatrix* blk : a.blocks())
            for (double& v : blk->data()) v = rng.uniform(-1, 1);
    NetworkDerivative d = vf_least_squares(prob, s);
    for (std::size_t i = 0; i < s.agent_count(); ++i) {
        AgentData data = agent_data(prob, i);
        DenseMatrix want = -s.agents[i].Y;
        multiply_add_into(want, data.A, s.agents[i].X);
        CHECK(d.agents[i].Upsilon == want);
    }
}

TEST_CASE("quadratic Lyapunov value and scaling") {
    auto [prob, x_star] = small_exact_problem(3, 3, 2, 87);
    NetworkState star = build_kkt_point_ls(prob, oracle_least_squares(prob).X_star);
    CHECK(lyapunov_ls(prob, star, star) == 0.0);

    Rng rng(88);
    NetworkState bump1 = star, bump2 = star;
    for (std::size_t i = 0; i < star.agent_count(); ++i) {
        auto b1 = bump1.agents[i].blocks();
        auto b2 = bump2.agents[i].blocks();
        auto bs = star.agents[i].blocks();
        for (std::size_t k = 0; k < b1.size(); ++k)
            for (std::size_t e = 0; e < b1[k]->size(); ++e) {
                const double eps = rng.uniform(-0.5, 0.5);
                b1[k]->data()[e] = bs[k]->data()[e] + eps;
                b2[k]->data()[e] = bs[k]->data()[e] + 2.0 * eps;
            }
    }
    const double v1 = lyapunov_ls(prob, bump1, star);
    const double v2 = lyapunov_ls(prob, bump2, star);
    CHECK(std::abs(v2 - 4.0 * v1) <= 1e-10 * std::max(1.0, v2));

    NetworkState off_point = star;
    off_point.agents[0].X(0, 0) += 1.0;
    CHECK_THROWS_AS(lyapunov_ls(prob, star, off_point), validation_error);
}

TEST_CASE("nonsmooth Lyapunov function is nonnegative and vanishes at the reference") {
    auto [base, x_star] = small_exact_problem(3, 3, 3, 89);
    SylvesterProblem reg = base;
    reg.penalty = PenaltySpec::l1(0.05);
    auto point = build_kkt_point_reg(reg, oracle_regularized(reg).X_star);
    CHECK(lyapunov_reg(reg, point.state, point.state, point.h_star) == 0.0);

    Rng rng(90);
    for (int trial = 0; trial < 10; ++trial) {
        NetworkState s = point.state;
        for (AgentState& a : s.agents)
            for (DenseMatrix* blk : a.blocks())
                for (double& v : blk->data()) v += rng.uniform(-1, 1);
        const double v = lyapunov_reg(reg, s, point.state, point.h_star);
        CHECK(v >= 0.0);
        // the Bregman part alone is nonnegative by convexity
        for (std::size_t i = 0; i < s.agent_count(); ++i) {
            const DenseMatrix dx = s.agents[i].X - point.state.agents[i].X;
            const double bregman = entrywise_l1(s.agents[i].X) -
                                   entrywise_l1(point.state.agents[i].X) -
                                   frobenius_inner(point.h_star[i], dx);
            CHECK(bregman >= -1e-12);
        }
    }
}

TEST_CASE("recovered equilibrium subgradients certify the stationarity block") {
    auto [base, x_star] = small_exact_problem(3, 3, 3, 91);
    SylvesterProblem reg = base;
    reg.penalty = PenaltySpec::l1(1e-3);
    OracleSolution sol = oracle_regularized(reg);
    auto point = build_kkt_point_reg(reg, sol.X_star);
    auto h = recover_equilibrium_subgradient(reg, point.state);
    for (std::size_t i = 0; i < h.size(); ++i) {
        CHECK(max_abs_diff(h[i], point.h_star[i]) <= 1e-9);
        for (double v : h[i].data()) CHECK(std::abs(v) <= 1.0 + 1e-9);
    }
}

TEST_CASE("consensus and estimation errors") {
    BlockPartition p({1, 1}, {1, 1});
    NetworkState s = make_zero_state(p, Algorithm::least_squares);
    s.agents[0].X = DenseMatrix{{1, 0}, {0, 0}};
    s.agents[1].X = DenseMatrix{{0, 0}, {0, 0}};
    // the difference has unit Frobenius norm and both ordered pairs count
    CHECK(consensus_error(s) == 1.0);
    s.agents[1].X = s.agents[0].X;
    CHECK(consensus_error(s) == 0.0);
    CHECK(estimation_error(s, s.agents[0].X) == 0.0);
    CHECK(estimation_error(s, DenseMatrix(2, 2)) == 1.0);
    CHECK(mean_estimate(s) == s.agents[0].X);
}

TEST_SUITE_END();
