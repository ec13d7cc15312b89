#include "slbi/designs.hpp"
#include "slbi/errors.hpp"
#include "slbi/estimators.hpp"
#include "slbi/metrics.hpp"
#include "testing.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace slbi;
using slbi::testing::max_abs;

TEST(Oracle, NoiseFreeRecoversTruth) {
    const Matrix x = slbi::testing::random_matrix(1, 20, 6);
    Vector beta(6);
    beta << 1, 1, 1, 0, 0, -2;
    const Matrix d = build_fused_1d(6);
    const Problem p(x, x * beta, d, beta, 0.0);
    const IndexSet s = p.truth()->support;
    const OracleEstimate est = oracle_estimator(p, 0.5, s);
    EXPECT_LT(max_abs(est.beta - beta), 1e-10);
    const Vector db = d * beta;
    for (Index j : s) EXPECT_NEAR(est.gamma(j), db(j), 1e-10);
}

TEST(Oracle, EmptySupport) {
    const Problem p = slbi::testing::random_problem(2, 10, 4, 3);
    const OracleEstimate est = oracle_estimator(p, 1.0, {});
    EXPECT_EQ(max_abs(est.gamma), 0.0);
    // Stationarity of the two-term quadratic at gamma = 0.
    const Vector g = grad(p, 1.0, est.beta, est.gamma).beta;
    EXPECT_LT(max_abs(g), 1e-10);
}

TEST(Oracle, KktResiduals) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Problem p = slbi::testing::random_problem(10 + seed, 8, 6, 7);
        const IndexSet s = {0, 2, 5};
        const double nu = 0.3 + static_cast<double>(seed);
        const OracleEstimate est = oracle_estimator(p, nu, s);
        EXPECT_LT(max_abs(grad(p, nu, est.beta, est.gamma).beta), 1e-8);
        const Vector db = p.D() * est.beta;
        for (Index j : s) EXPECT_LT(std::abs(est.gamma(j) - db(j)), 1e-8);
        for (Index j : complement(s, 7)) EXPECT_EQ(est.gamma(j), 0.0);
    }
}

TEST(StoppingRule, DirectEvaluation) {
    const SpectralBounds b{1.0, 1.0, 1.0};
    const StoppingRule r = stopping_rule(1.0, 1.0, b, 64, 4, 0.01);
    EXPECT_NEAR(r.tau_bar, 0.125 * std::sqrt(64.0 / std::log(4.0)), 1e-14);
    EXPECT_NEAR(r.tau_bar, 0.8493, 1e-4);
    EXPECT_EQ(r.k_bar, static_cast<std::size_t>(std::floor(r.tau_bar / 0.01)));
    EXPECT_EQ(stopping_rule(1.0, 1.0, b, 64, 4, r.tau_bar).k_bar, 1u);
}

TEST(StoppingRule, Errors) {
    const SpectralBounds b{1.0, 1.0, 1.0};
    EXPECT_THROW(stopping_rule(1.0, 1.0, b, 64, 1, 0.1), InvalidDimension);
    EXPECT_THROW(stopping_rule(0.0, 1.0, b, 64, 4, 0.1), InvalidHyperparam);
    EXPECT_THROW(stopping_rule(-0.5, 1.0, b, 64, 4, 0.1), InvalidHyperparam);
    EXPECT_THROW(stopping_rule(1.0, 1.0, {0.0, 1.0, 1.0}, 64, 4, 0.1), InvalidHyperparam);
}

TEST(StoppingRule, ExampleInstanceArithmetic) {
    SimulationSpec spec;
    const Problem p = simulate_problem(spec, 5);
    const SpectralBounds b = spectral_bounds(p.X(), p.D(), p.truth()->support);
    const double alpha = default_alpha(p, 10.0, 200.0);
    const double eta = 0.25;
    const StoppingRule r = stopping_rule(eta, 1.0, b, 50, 50, alpha);
    const double tau = eta / 8.0 * b.lambda_d / b.Lambda_x * std::sqrt(50.0 / std::log(50.0));
    EXPECT_NEAR(r.tau_bar, tau, 1e-14);
    EXPECT_EQ(r.k_bar, static_cast<std::size_t>(tau / alpha));
}

TEST(Projection, Examples) {
    const Problem p(slbi::testing::random_matrix(3, 5, 3), Vector::Zero(5), Matrix::Identity(3, 3));
    const Vector beta = (Vector(3) << 1.5, -2.0, 3.0).finished();
    EXPECT_LT(max_abs(projection_estimator(p, beta, {0, 2}) - (Vector(3) << 1.5, 0, 3.0).finished()), 1e-14);
    EXPECT_LT(max_abs(projection_estimator(p, beta, {0, 1, 2}) - beta), 1e-14);
    EXPECT_THROW(projection_estimator(p, Vector::Zero(2), {0}), InvalidDimension);
}

TEST(Projection, FusedKernelMembershipAndIdempotence) {
    const Index n = 8;
    const Matrix d = build_fused_1d(n);
    const Problem p(slbi::testing::random_matrix(4, 10, n), Vector::Zero(10), d);
    // Active: difference between coords 3,4 and the level rows of coords 0..4.
    const IndexSet s = {3, 7, 8, 9, 10, 11};
    const Vector beta = slbi::testing::random_vector(5, n);
    const Vector t = projection_estimator(p, beta, s);
    EXPECT_LT(max_abs(select_rows(d, complement(s, d.rows())) * t), 1e-10);
    EXPECT_LT(max_abs(projection_estimator(p, t, s) - t), 1e-12);
    const Grouping g = extract_groups(t, 1e-9);
    EXPECT_EQ(g.groups.size(), 2u);
    for (Index j = 5; j < n; ++j) EXPECT_NEAR(t(j), 0.0, 1e-12);
}

TEST(Consistency, NoiseFreeStrongSignal) {
    Rng rng(6);
    const Matrix x = rng.normal_matrix(100, 10);
    Vector beta = Vector::Zero(10);
    beta.head(3) << 5, -5, 5;
    const Problem p(x, x * beta, Matrix::Identity(10, 10), beta, 0.05);
    const IndexSet s = p.truth()->support;
    const double nu = 10.0;
    const double eta = default_eta(p, nu);
    ASSERT_GT(eta, 0.0);
    const double alpha = default_alpha(p, nu, 200.0);
    const StoppingRule rule = stopping_rule(eta, 0.05, spectral_bounds(p.X(), p.D(), s), 100, 10, alpha);
    const Path path = run(p, {nu, 200.0, alpha}, rule.k_bar, 1);
    const ConsistencyReport rep = consistency_check(p, path, rule);
    EXPECT_TRUE(rep.no_false_positive);
    EXPECT_TRUE(rep.sign_consistent);
    EXPECT_EQ(rep.evaluated_k, rule.k_bar);
    EXPECT_THROW(consistency_check(p, run(p, {nu, 200.0, alpha}, rule.k_bar / 2), rule), PathTooShort);
}

TEST(Consistency, EmptyTruthSupport) {
    const Matrix x = slbi::testing::random_matrix(7, 30, 5);
    const Problem p(x, x * Vector::Zero(5) + 0.01 * slbi::testing::random_vector(8, 30), Matrix::Identity(5, 5),
                    Vector::Zero(5), 0.01);
    StoppingRule rule;
    rule.k_bar = 20;
    const Path path = run(p, {1.0, 10.0, std::nullopt}, 20);
    bool stayed_zero = true;
    for (const PathPoint& pt : path.points) stayed_zero = stayed_zero && max_abs(pt.gamma) == 0.0;
    EXPECT_EQ(consistency_check(p, path, rule).no_false_positive, stayed_zero);
}

TEST(ResidualSigma, NoiseScale) {
    Rng rng(9);
    const Matrix x = rng.normal_matrix(400, 5);
    const Vector beta = (Vector(5) << 1, 0, 0, 2, 0).finished();
    const Vector y = x * beta + 0.5 * rng.normal_vector(400);
    const Problem p(x, y, Matrix::Identity(5, 5), beta, 0.5);
    EXPECT_NEAR(residual_sigma(p, 1.0, p.truth()->support), 0.5, 0.05);
}
