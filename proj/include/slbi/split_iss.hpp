#pragma once

#include "slbi/model.hpp"
#include "slbi/split_lbi.hpp"

#include <limits>
#include <vector>

namespace slbi {

/// One linear piece of the Split ISS solution. On [t_start, t_end):
///   rho(t) = rho_start + (t - t_start) * rho_slope,
///   gamma and beta are constant.
/// `active` holds the coordinates pinned at |rho_j| = 1 that stay there over
/// the segment; `signs` are their rho values (+1/-1).
struct IssSegment {
    double t_start = 0.0;
    double t_end = std::numeric_limits<double>::infinity();
    IndexSet active;
    std::vector<int> signs;
    Vector gamma;
    Vector beta;
    Vector rho_start;
    Vector rho_slope;

    Vector rho_at(double t) const { return rho_start + (t - t_start) * rho_slope; }
};

struct IssOptions {
    /// Guard against cycling: solve_path throws NoProgress past this many segments.
    std::size_t max_segments = 0;  // 0 selects 20 * (m + 10)
};

/// Event-driven solver for the kappa -> inf, alpha -> 0 limit in the reduced
/// gamma form  d rho/dt = D A^+ X^* y - Sigma gamma,  rho in d|gamma|_1.
/// At every event gamma solves the sign-constrained quadratic program
///   min 1/2 g^T Sigma g - b^T g,  sign(g_j) = rho_j on |rho_j| = 1, g_j = 0 elsewhere,
/// and beta = A^+ (nu X^* y + D^T gamma). Runs until t_max or until no
/// inactive coordinate moves (last segment then has t_end = +inf).
std::vector<IssSegment> solve_path(const Problem& problem, double nu, double t_max,
                                   const IssOptions& options = {});

/// Evaluates (beta, gamma, rho, loss) at each time of a sorted grid. Points
/// carry k = grid index, z = rho. Throws OutOfRange past the last t_end.
std::vector<PathPoint> sample_path(const Problem& problem, double nu, const std::vector<IssSegment>& segments,
                                   const std::vector<double>& t_grid);

}  // namespace slbi
