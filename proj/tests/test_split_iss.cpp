#include "slbi/errors.hpp"
#include "slbi/metrics.hpp"
#include "slbi/split_iss.hpp"
#include "testing.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace slbi;
using slbi::testing::max_abs;

namespace {

Problem sparse_problem(std::uint64_t seed) {
    Rng rng(seed);
    Matrix x = rng.normal_matrix(6, 6);
    Vector beta = Vector::Zero(6);
    beta << 30, -20, 15, 0, 0, 0;
    Vector y = x * beta + 5.0 * rng.normal_vector(6);
    return Problem(std::move(x), std::move(y), Matrix::Identity(6, 6));
}

}  // namespace

TEST(SplitIss, FirstEventAtInverseDriftNorm) {
    const Problem p = slbi::testing::random_problem(1, 8, 5, 4);
    const double nu = 2.0;
    const Matrix a_pinv = pseudoinverse(a_and_sigma(p, nu).A);
    const Vector b = reduced_drift(p, a_pinv);
    const auto segs = solve_path(p, nu, 100.0);
    ASSERT_GE(segs.size(), 2u);
    EXPECT_EQ(segs[0].t_start, 0.0);
    EXPECT_NEAR(segs[0].t_end, 1.0 / b.cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_TRUE(segs[0].active.empty());
    EXPECT_EQ(max_abs(segs[0].gamma), 0.0);
}

TEST(SplitIss, ZeroResponseStaysAtZero) {
    const Problem p(slbi::testing::random_matrix(2, 6, 4), Vector::Zero(6), Matrix::Identity(4, 4));
    const auto segs = solve_path(p, 1.0, 10.0);
    ASSERT_EQ(segs.size(), 1u);
    EXPECT_TRUE(std::isinf(segs[0].t_end));
    EXPECT_EQ(max_abs(segs[0].gamma), 0.0);
}

TEST(SplitIss, InvalidArguments) {
    const Problem p = slbi::testing::random_problem(3, 6, 4, 4);
    EXPECT_THROW(solve_path(p, 0.0, 1.0), InvalidHyperparam);
    EXPECT_THROW(solve_path(p, 1.0, -1.0), InvalidHyperparam);
}

TEST(SplitIss, SegmentInvariants) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Problem p = slbi::testing::random_problem(10 + seed, 12, 6, 6);
        const double nu = 1.0;
        const auto segs = solve_path(p, nu, 50.0);
        for (std::size_t s = 0; s < segs.size(); ++s) {
            const IssSegment& seg = segs[s];
            if (s > 0) EXPECT_DOUBLE_EQ(seg.t_start, segs[s - 1].t_end);
            const double t_end = std::isinf(seg.t_end) ? seg.t_start + 1.0 : std::min(seg.t_end, 50.0);
            for (double t : {seg.t_start, 0.5 * (seg.t_start + t_end), t_end}) {
                EXPECT_LE(max_abs(seg.rho_at(t)), 1.0 + 1e-8) << "seed " << seed << " seg " << s;
            }
            for (std::size_t a = 0; a < seg.active.size(); ++a) {
                const Index j = seg.active[a];
                EXPECT_NEAR(seg.rho_slope(j), 0.0, 1e-8);
                EXPECT_NEAR(seg.rho_start(j), seg.signs[a], 1e-8);
                if (seg.gamma(j) != 0.0) EXPECT_EQ(seg.gamma(j) > 0 ? 1 : -1, seg.signs[a]);
            }
            for (Index j = 0; j < seg.gamma.size(); ++j) {
                if (seg.gamma(j) != 0.0) EXPECT_TRUE(std::find(seg.active.begin(), seg.active.end(), j) != seg.active.end());
            }
        }
    }
}

TEST(SplitIss, LossIsNonincreasing) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Problem p = slbi::testing::random_problem(20 + seed, 10, 6, 6);
        const auto segs = solve_path(p, 1.0, 100.0);
        double prev = loss(p, 1.0, Vector::Zero(6), Vector::Zero(6));
        for (const IssSegment& seg : segs) {
            const double cur = loss(p, 1.0, seg.beta, seg.gamma);
            EXPECT_LE(cur, prev + 1e-9);
            prev = cur;
        }
    }
}

TEST(SplitIss, SamplePath) {
    const Problem p = sparse_problem(derive_seed(9, 0));
    const auto segs = solve_path(p, 0.01, 0.5);
    const auto pts = sample_path(p, 0.01, segs, {0.0, 0.05, 0.2, 0.5});
    ASSERT_EQ(pts.size(), 4u);
    EXPECT_EQ(max_abs(pts[0].gamma), 0.0);
    EXPECT_EQ(max_abs(pts[0].rho), 0.0);
    EXPECT_EQ(pts[2].k, 2u);
    EXPECT_EQ(pts[2].rho, pts[2].z);
    EXPECT_NEAR(pts[3].loss, loss(p, 0.01, pts[3].beta, pts[3].gamma), 1e-12);
    if (std::isfinite(segs.back().t_end)) {
        EXPECT_THROW(sample_path(p, 0.01, segs, {segs.back().t_end + 1.0}), OutOfRange);
    }
}

TEST(SplitIss, RhoIsContinuousAcrossEvents) {
    const Problem p = slbi::testing::random_problem(31, 10, 6, 6);
    const auto segs = solve_path(p, 1.0, 50.0);
    for (std::size_t s = 1; s < segs.size(); ++s) {
        EXPECT_LT(max_abs(segs[s - 1].rho_at(segs[s].t_start) - segs[s].rho_start), 1e-8);
    }
}

TEST(SplitIss, ActivationOrderMatchesSmallStepLbi) {
    const Problem p = sparse_problem(derive_seed(9, 1));
    const double nu = 0.01, t_max = 0.5;
    const auto segs = solve_path(p, nu, t_max);
    const EntryTimes iss = entry_times(segs);

    const double kappa = 1e4;
    const double alpha = default_alpha(p, nu, kappa) / 10.0;
    const EntryTimes lbi = streaming_entry_times(p, {nu, kappa, alpha}, t_max, nullptr);
    auto order = [](const EntryTimes& e) {
        std::vector<Index> idx;
        for (Index j = 0; j < e.times.size(); ++j)
            if (std::isfinite(e.times(j))) idx.push_back(j);
        std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return e.times(a) < e.times(b); });
        return idx;
    };
    EXPECT_EQ(order(iss), order(lbi));
    for (Index j = 0; j < 6; ++j) {
        if (std::isfinite(iss.times(j)) && iss.times(j) < t_max) EXPECT_NEAR(lbi.times(j), iss.times(j), 0.01);
    }
}
