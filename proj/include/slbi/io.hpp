#pragma once

#include "slbi/conditions.hpp"
#include "slbi/estimators.hpp"
#include "slbi/metrics.hpp"
#include "slbi/split_iss.hpp"
#include "slbi/split_lbi.hpp"

#include <iosfwd>
#include <string>

#include <json.hpp>

namespace slbi::io {

using Json = nlohmann::json;

/// Shortest round-trip decimal (%.17g); "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double v);
double parse_double(const std::string& s, std::size_t line);

/// Plain comma-separated numbers, one matrix row per line, no header.
Matrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Matrix& m);
/// One value per line (a single row is also accepted).
Vector read_vector_csv(const std::string& path);
void write_vector_csv(const std::string& path, const Vector& v);

/// X.csv, y.csv, D.csv and, if present, truth.csv (beta* one per line; an
/// optional sigma.txt holds the noise scale, default 1).
Problem read_problem_dir(const std::string& dir);

/// {"X": [[...]], "y": [...], "D": [[...]], "truth": {"beta": [...], "sigma": s}}
Problem problem_from_json(const Json& j);
Json problem_to_json(const Problem& problem);
Problem read_problem_json(const std::string& path);
void write_problem_json(const std::string& path, const Problem& problem);

/// Columns k, t, loss, beta_1..beta_p, gamma_1..gamma_m.
void write_path_csv(std::ostream& out, const std::vector<PathPoint>& points);
Json path_to_json(const std::vector<PathPoint>& points, const Hyperparams* hyper);

Json segments_to_json(const std::vector<IssSegment>& segments);

/// coordinate (1-based), entry time ("inf" if never).
void write_entry_times_csv(std::ostream& out, const EntryTimes& entry);
Json entry_times_to_json(const EntryTimes& entry);

Json report_to_json(const ConditionReport& report);
/// Columns nu, irr, ic0, ic1, status.
void write_irr_curve_csv(std::ostream& out, const IrrCurve& curve);
Json irr_curve_to_json(const IrrCurve& curve);

Json consistency_to_json(const ConsistencyReport& report, const StoppingRule& rule);

/// design, nu, kappa, alpha, n_replicates, mean_auc, sd_auc, n_failed.
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
Json summary_to_json(const std::vector<SummaryRow>& rows);
/// design, replicate, seed, nu, kappa, alpha, auc, steps, status.
void write_replicates_csv(std::ostream& out, const std::string& design, const HarnessResult& result,
                          const std::vector<HarnessHyper>& hypers);

/// Writes text to a file, throwing IoError on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace slbi::io
