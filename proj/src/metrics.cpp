#include "slbi/metrics.hpp"

#include "slbi/designs.hpp"
#include "slbi/errors.hpp"
#include "slbi/rng.hpp"

#include <cmath>
#include <limits>

namespace slbi {

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

ReplicateRecord run_replicate(const SimulationSpec& spec, const Problem& problem, std::size_t replicate,
                              std::uint64_t seed, std::size_t hyper_index, const HarnessHyper& h) {
    ReplicateRecord rec;
    rec.replicate = replicate;
    rec.seed = seed;
    rec.hyper_index = hyper_index;
    try {
        const Hyperparams resolved = resolve(problem, {h.nu, h.kappa, std::nullopt});
        rec.alpha = *resolved.alpha;
        const IndexSet& s = problem.truth()->support;
        const EntryTimes et = streaming_entry_times(problem, resolved, spec.time_horizon,
                                                    spec.early_stop ? &s : nullptr, &rec.steps);
        rec.auc = auc_support(et, s);
    } catch (const Error& e) {
        rec.failed = true;
        rec.error = e.what();
    }
    return rec;
}

void summarize(const SimulationSpec& spec, const std::vector<HarnessHyper>& hypers, HarnessResult& result) {
    for (std::size_t h = 0; h < hypers.size(); ++h) {
        SummaryRow row;
        row.design = to_string(spec.design);
        row.nu = hypers[h].nu;
        row.kappa = hypers[h].kappa;
        double sum = 0.0;
        double alpha_sum = 0.0;
        std::size_t ok = 0;
        for (const ReplicateRecord& r : result.replicates) {
            if (r.hyper_index != h) continue;
            ++row.n_replicates;
            if (r.failed) {
                ++row.n_failed;
                continue;
            }
            ++ok;
            sum += r.auc;
            alpha_sum += r.alpha;
        }
        if (ok > 0) {
            row.mean_auc = sum / static_cast<double>(ok);
            row.alpha = alpha_sum / static_cast<double>(ok);
            double ss = 0.0;
            for (const ReplicateRecord& r : result.replicates)
                if (r.hyper_index == h && !r.failed) ss += (r.auc - row.mean_auc) * (r.auc - row.mean_auc);
            row.sd_auc = ok > 1 ? std::sqrt(ss / static_cast<double>(ok - 1)) : 0.0;
        } else {
            row.mean_auc = row.sd_auc = row.alpha = std::numeric_limits<double>::quiet_NaN();
        }
        result.summary.push_back(row);
    }
}

void validate(const SimulationSpec& spec, const std::vector<HarnessHyper>& hypers) {
    if (spec.p < 16) throw InvalidDimension("simulation needs p >= 16 (15 signal coordinates plus nulls)");
    if (spec.n < 1) throw InvalidDimension("simulation needs n >= 1");
    if (!(spec.time_horizon > 0.0)) throw InvalidHyperparam("time horizon must be positive");
    if (!(spec.sigma >= 0.0)) throw InvalidHyperparam("sigma must be >= 0");
    if (hypers.empty()) throw InvalidHyperparam("no hyperparameters given");
}

}  // namespace

EntryTimes entry_times(const Path& path) {
    if (path.points.empty()) throw InvalidDimension("empty path");
    const Index m = path.points.front().gamma.size();
    EntryTimes out{Vector::Constant(m, kNever)};
    for (const PathPoint& pt : path.points)
        for (Index j = 0; j < m; ++j)
            if (pt.gamma(j) != 0.0 && out.times(j) == kNever) out.times(j) = pt.t;
    return out;
}

EntryTimes entry_times(const std::vector<IssSegment>& segments) {
    if (segments.empty()) throw InvalidDimension("no segments");
    const Index m = segments.front().gamma.size();
    EntryTimes out{Vector::Constant(m, kNever)};
    for (const IssSegment& seg : segments)
        for (Index j = 0; j < m; ++j)
            if (seg.gamma(j) != 0.0 && out.times(j) == kNever) out.times(j) = seg.t_start;
    return out;
}

double auc_support(const EntryTimes& entry, const IndexSet& support) {
    const Index m = entry.times.size();
    require_index_set(support, m, "support");
    const IndexSet nulls = complement(support, m);
    if (support.empty() || nulls.empty()) throw DegenerateLabels("AUC needs both true and null coordinates");
    double score = 0.0;
    for (Index a : support) {
        for (Index b : nulls) {
            const double ta = entry.times(a);
            const double tb = entry.times(b);
            if (ta < tb) score += 1.0;
            else if (ta == tb) score += 0.5;
        }
    }
    return score / (static_cast<double>(support.size()) * static_cast<double>(nulls.size()));
}

std::string to_string(HarnessDesign design) { return design == HarnessDesign::lasso ? "lasso" : "fused1d"; }

HarnessDesign parse_design(const std::string& name) {
    if (name == "lasso") return HarnessDesign::lasso;
    if (name == "fused1d" || name == "fused") return HarnessDesign::fused1d;
    throw InvalidHyperparam("unknown design '" + name + "' (expected lasso or fused1d)");
}

Vector example_beta_star(Index p) {
    if (p < 15) throw InvalidDimension("beta* needs p >= 15");
    Vector b = Vector::Zero(p);
    b.head(10).setConstant(2.0);
    b.segment(10, 5).setConstant(-2.0);
    return b;
}

Problem simulate_problem(const SimulationSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    Matrix x = rng.normal_matrix(spec.n, spec.p);
    const Vector eps = rng.normal_vector(spec.n);
    const Vector beta = example_beta_star(spec.p);
    Vector y = x * beta + spec.sigma * eps;
    Matrix d = spec.design == HarnessDesign::lasso ? Matrix(Matrix::Identity(spec.p, spec.p)) : build_fused_1d(spec.p);
    return Problem(std::move(x), std::move(y), std::move(d), beta, spec.sigma);
}

EntryTimes streaming_entry_times(const Problem& problem, const Hyperparams& hyper, double time_horizon,
                                 const IndexSet* stop_when_entered, std::size_t* steps) {
    const LbiStepper stepper(problem, hyper);
    const double alpha = *stepper.hyper().alpha;
    const auto k_max = static_cast<std::size_t>(std::ceil(time_horizon / alpha));
    const Index m = problem.m();

    EntryTimes out{Vector::Constant(m, kNever)};
    std::size_t waiting = stop_when_entered ? stop_when_entered->size() : 0;
    std::vector<bool> watched(static_cast<std::size_t>(m), false);
    if (stop_when_entered)
        for (Index j : *stop_when_entered) watched[static_cast<std::size_t>(j)] = true;

    PathPoint state = initial_point(problem, stepper.hyper().nu);
    std::size_t k = 0;
    while (k < k_max && !(stop_when_entered && waiting == 0)) {
        stepper.advance(state);
        ++k;
        for (Index j = 0; j < m; ++j) {
            if (state.gamma(j) != 0.0 && out.times(j) == kNever) {
                out.times(j) = state.t;
                if (watched[static_cast<std::size_t>(j)]) --waiting;
            }
        }
    }
    if (steps) *steps = k;
    return out;
}

HarnessResult replicate_harness(const SimulationSpec& spec, std::uint64_t master_seed, std::size_t n_replicates,
                                const std::vector<HarnessHyper>& hypers) {
    validate(spec, hypers);
    const std::size_t h_count = hypers.size();
    HarnessResult result;
    result.replicates.resize(n_replicates * h_count);
    const auto total = static_cast<long>(n_replicates * h_count);
    // One work item per (replicate, hyper); the design is regenerated from its
    // seed so items share nothing.
#pragma omp parallel for schedule(dynamic)
    for (long item = 0; item < total; ++item) {
        const std::size_t r = static_cast<std::size_t>(item) / h_count;
        const std::size_t h = static_cast<std::size_t>(item) % h_count;
        const std::uint64_t seed = derive_seed(master_seed, r);
        ReplicateRecord rec;
        try {
            const Problem problem = simulate_problem(spec, seed);
            rec = run_replicate(spec, problem, r, seed, h, hypers[h]);
        } catch (const Error& e) {
            rec.replicate = r;
            rec.seed = seed;
            rec.hyper_index = h;
            rec.failed = true;
            rec.error = e.what();
        }
        result.replicates[static_cast<std::size_t>(item)] = std::move(rec);
    }
    summarize(spec, hypers, result);
    return result;
}

namespace serial {

HarnessResult replicate_harness(const SimulationSpec& spec, std::uint64_t master_seed, std::size_t n_replicates,
                                const std::vector<HarnessHyper>& hypers) {
    validate(spec, hypers);
    HarnessResult result;
    for (std::size_t r = 0; r < n_replicates; ++r) {
        const std::uint64_t seed = derive_seed(master_seed, r);
        const Problem problem = simulate_problem(spec, seed);
        for (std::size_t h = 0; h < hypers.size(); ++h)
            result.replicates.push_back(run_replicate(spec, problem, r, seed, h, hypers[h]));
    }
    summarize(spec, hypers, result);
    return result;
}

}  // namespace serial

}  // namespace slbi
