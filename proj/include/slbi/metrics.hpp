#pragma once

#include "slbi/split_iss.hpp"
#include "slbi/split_lbi.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace slbi {

/// First time each gamma coordinate is nonzero; +inf if never.
struct EntryTimes {
    Vector times;
};

EntryTimes entry_times(const Path& path);
EntryTimes entry_times(const std::vector<IssSegment>& segments);

/// Mann-Whitney AUC of "enters earlier" as a score for membership in S.
/// Ties (including inf vs inf) count one half. Throws DegenerateLabels if S
/// or its complement is empty.
double auc_support(const EntryTimes& entry, const IndexSet& support);

enum class HarnessDesign { lasso, fused1d };

std::string to_string(HarnessDesign design);
HarnessDesign parse_design(const std::string& name);

/// Gaussian-design simulation: X rows iid N(0, I_p), eps ~ N(0, sigma^2),
/// beta* = 2 on the first 10 coordinates, -2 on the next 5, 0 elsewhere.
struct SimulationSpec {
    HarnessDesign design = HarnessDesign::lasso;
    Index n = 50;
    Index p = 50;
    double sigma = 1.0;
    /// Each run covers t in [0, time_horizon], i.e. ceil(time_horizon / alpha) steps.
    double time_horizon = 50.0;
    /// Stop a run once every true coordinate has entered (AUC is fixed from then on).
    bool early_stop = true;
};

struct HarnessHyper {
    double nu = 1.0;
    double kappa = 200.0;
};

struct ReplicateRecord {
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    std::size_t hyper_index = 0;
    double alpha = 0.0;
    double auc = 0.0;
    std::size_t steps = 0;
    bool failed = false;
    std::string error;
};

struct SummaryRow {
    std::string design;
    double nu = 0.0;
    double kappa = 0.0;
    double alpha = 0.0;  // mean over successful replicates
    std::size_t n_replicates = 0;
    double mean_auc = 0.0;
    double sd_auc = 0.0;
    std::size_t n_failed = 0;
};

struct HarnessResult {
    std::vector<ReplicateRecord> replicates;  // replicate-major, then hyper order
    std::vector<SummaryRow> summary;          // one per hyper
};

/// beta* of the simulation (p >= 15).
Vector example_beta_star(Index p);

/// Replicate r uses seed derive_seed(master_seed, r) for X then eps.
Problem simulate_problem(const SimulationSpec& spec, std::uint64_t seed);

/// Entry times of a stride-1 Split LBI run over the simulation horizon, without
/// storing the path. `steps` receives the number of iterations taken.
EntryTimes streaming_entry_times(const Problem& problem, const Hyperparams& hyper, double time_horizon,
                                 const IndexSet* stop_when_entered, std::size_t* steps = nullptr);

/// Replicates run in parallel (OpenMP); results do not depend on thread count.
HarnessResult replicate_harness(const SimulationSpec& spec, std::uint64_t master_seed, std::size_t n_replicates,
                                const std::vector<HarnessHyper>& hypers);

namespace serial {
/// Plain loop over replicates; reference for the parallel harness.
HarnessResult replicate_harness(const SimulationSpec& spec, std::uint64_t master_seed, std::size_t n_replicates,
                                const std::vector<HarnessHyper>& hypers);
}  // namespace serial

}  // namespace slbi
