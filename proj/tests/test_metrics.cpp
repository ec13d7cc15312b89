#include "slbi/errors.hpp"
#include "slbi/metrics.hpp"
#include "slbi/rng.hpp"
#include "testing.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace slbi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

EntryTimes times(std::initializer_list<double> t) {
    EntryTimes e{Vector(static_cast<Index>(t.size()))};
    Index i = 0;
    for (double v : t) e.times(i++) = v;
    return e;
}

SimulationSpec small_spec() {
    SimulationSpec spec;
    spec.n = 30;
    spec.p = 20;
    spec.time_horizon = 5.0;
    return spec;
}

}  // namespace

TEST(Auc, PerfectInvertedAndTied) {
    EXPECT_DOUBLE_EQ(auc_support(times({0.1, 0.2, 0.5, kInf}), {0, 1}), 1.0);
    EXPECT_DOUBLE_EQ(auc_support(times({0.5, kInf, 0.1, 0.2}), {0, 1}), 0.0);
    EXPECT_DOUBLE_EQ(auc_support(times({kInf, kInf, kInf, kInf}), {0, 1}), 0.5);
    EXPECT_DOUBLE_EQ(auc_support(times({0.1, 0.3, 0.2, kInf}), {0, 1}), 0.75);
}

TEST(Auc, DegenerateLabels) {
    EXPECT_THROW(auc_support(times({1, 2}), {}), DegenerateLabels);
    EXPECT_THROW(auc_support(times({1, 2}), {0, 1}), DegenerateLabels);
}

TEST(Auc, InvariantUnderMonotoneRescaling) {
    const EntryTimes e = times({0.3, 1.2, 0.7, 2.0, kInf, 0.05});
    EntryTimes f = e;
    for (Index i = 0; i < f.times.size(); ++i) f.times(i) = std::exp(3.0 * f.times(i)) + 1.0;
    EXPECT_DOUBLE_EQ(auc_support(e, {0, 2, 5}), auc_support(f, {0, 2, 5}));
}

TEST(EntryTimes, ZeroPathNeverEnters) {
    const Problem p(slbi::testing::random_matrix(1, 5, 3), Vector::Zero(5), Matrix::Identity(3, 3));
    const EntryTimes e = entry_times(run(p, {1.0, 10.0, std::nullopt}, 20));
    for (Index j = 0; j < 3; ++j) EXPECT_TRUE(std::isinf(e.times(j)));
}

TEST(EntryTimes, IssEventsAreEntries) {
    const Problem p = slbi::testing::random_problem(2, 10, 5, 5);
    const auto segs = solve_path(p, 1.0, 20.0);
    const EntryTimes e = entry_times(segs);
    for (Index j = 0; j < 5; ++j) {
        if (std::isinf(e.times(j))) continue;
        bool found = false;
        for (const IssSegment& s : segs) found = found || s.t_start == e.times(j);
        EXPECT_TRUE(found);
    }
    ASSERT_GE(segs.size(), 2u);
    EXPECT_EQ(e.times.minCoeff(), segs[1].t_start);
}

TEST(EntryTimes, CoarseRecordingDelaysEntries) {
    const Problem p = slbi::testing::random_problem(3, 15, 8, 8);
    const Hyperparams h{1.0, 50.0, std::nullopt};
    const EntryTimes fine = entry_times(run(p, h, 3000, 1));
    const EntryTimes coarse = entry_times(run(p, h, 3000, 5));
    for (Index j = 0; j < 8; ++j) EXPECT_GE(coarse.times(j), fine.times(j));
}

TEST(EntryTimes, StreamingMatchesStoredPath) {
    const Problem p = slbi::testing::random_problem(4, 15, 8, 8);
    const Hyperparams h = resolve(p, {1.0, 50.0, std::nullopt});
    const double horizon = 2000 * *h.alpha;
    std::size_t steps = 0;
    const EntryTimes s = streaming_entry_times(p, h, horizon, nullptr, &steps);
    const EntryTimes full = entry_times(run(p, h, steps, 1));
    EXPECT_EQ(steps, static_cast<std::size_t>(std::ceil(horizon / *h.alpha)));
    EXPECT_EQ(s.times, full.times);
}

TEST(Simulation, BetaStarAndProblemShape) {
    const Vector b = example_beta_star(20);
    EXPECT_EQ(b.head(10), Vector::Constant(10, 2.0));
    EXPECT_EQ(b.segment(10, 5), Vector::Constant(5, -2.0));
    EXPECT_EQ(b.tail(5), Vector::Zero(5));
    EXPECT_THROW(example_beta_star(14), InvalidDimension);

    SimulationSpec spec = small_spec();
    spec.design = HarnessDesign::fused1d;
    const Problem p = simulate_problem(spec, 9);
    EXPECT_EQ(p.m(), 39);
    Rng rng(9);
    const Matrix x = rng.normal_matrix(30, 20);
    EXPECT_EQ(p.X(), x);
    EXPECT_EQ(p.y(), x * b + rng.normal_vector(30));
}

TEST(Simulation, ParseDesign) {
    EXPECT_EQ(parse_design("lasso"), HarnessDesign::lasso);
    EXPECT_EQ(parse_design("fused1d"), HarnessDesign::fused1d);
    EXPECT_EQ(to_string(HarnessDesign::fused1d), "fused1d");
    EXPECT_THROW(parse_design("ridge"), InvalidHyperparam);
}

TEST(Harness, SingleReplicateEqualsDirectRun) {
    const SimulationSpec spec = small_spec();
    const HarnessResult r = replicate_harness(spec, 42, 1, {{5.0, 100.0}});
    ASSERT_EQ(r.summary.size(), 1u);
    ASSERT_EQ(r.replicates.size(), 1u);
    const Problem p = simulate_problem(spec, derive_seed(42, 0));
    const IndexSet& s = p.truth()->support;
    const EntryTimes e = streaming_entry_times(p, {5.0, 100.0, std::nullopt}, spec.time_horizon, &s);
    EXPECT_EQ(r.summary[0].mean_auc, auc_support(e, s));
    EXPECT_EQ(r.summary[0].sd_auc, 0.0);
    EXPECT_EQ(r.summary[0].alpha, default_alpha(p, 5.0, 100.0));
    EXPECT_EQ(r.summary[0].n_failed, 0u);
}

TEST(Harness, EarlyStopLeavesAucUnchanged) {
    SimulationSpec spec = small_spec();
    const HarnessResult a = replicate_harness(spec, 3, 4, {{1.0, 100.0}});
    spec.early_stop = false;
    const HarnessResult b = replicate_harness(spec, 3, 4, {{1.0, 100.0}});
    for (std::size_t i = 0; i < a.replicates.size(); ++i) {
        EXPECT_EQ(a.replicates[i].auc, b.replicates[i].auc);
        EXPECT_LE(a.replicates[i].steps, b.replicates[i].steps);
    }
}

TEST(Harness, ParallelEqualsSerialAndIsDeterministic) {
    const SimulationSpec spec = small_spec();
    const std::vector<HarnessHyper> hypers = {{1.0, 100.0}, {5.0, 100.0}};
    const HarnessResult a = replicate_harness(spec, 11, 6, hypers);
    const HarnessResult b = serial::replicate_harness(spec, 11, 6, hypers);
    const HarnessResult c = replicate_harness(spec, 11, 6, hypers);
    ASSERT_EQ(a.replicates.size(), 12u);
    for (std::size_t i = 0; i < a.replicates.size(); ++i) {
        EXPECT_EQ(a.replicates[i].auc, b.replicates[i].auc);
        EXPECT_EQ(a.replicates[i].seed, b.replicates[i].seed);
        EXPECT_EQ(a.replicates[i].steps, c.replicates[i].steps);
    }
    for (std::size_t h = 0; h < 2; ++h) {
        EXPECT_EQ(a.summary[h].mean_auc, b.summary[h].mean_auc);
        EXPECT_EQ(a.summary[h].sd_auc, c.summary[h].sd_auc);
    }
}

TEST(Harness, Validation) {
    SimulationSpec spec = small_spec();
    EXPECT_THROW(replicate_harness(spec, 1, 1, {}), InvalidHyperparam);
    spec.p = 10;
    EXPECT_THROW(replicate_harness(spec, 1, 1, {{1.0, 10.0}}), InvalidDimension);
}

TEST(Harness, BadHyperIsRecordedAsFailure) {
    const HarnessResult r = replicate_harness(small_spec(), 1, 2, {{-1.0, 10.0}});
    EXPECT_EQ(r.summary[0].n_failed, 2u);
    EXPECT_TRUE(r.replicates[0].failed);
    EXPECT_FALSE(r.replicates[0].error.empty());
}
