#include "slbi/split_iss.hpp"

#include "slbi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace slbi {

namespace {

std::string describe(const IndexSet& set) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < set.size(); ++i) os << (i ? "," : "") << set[i];
    os << '}';
    return os.str();
}

// Solves min 1/2 w^T Q w - c^T w subject to w >= 0 by a Lawson-Hanson style
// active-set loop. One coordinate enters per outer iteration; blocked
// coordinates leave one step at a time. `labels` name the coordinates in errors.
Vector nonneg_quadratic(const Matrix& q, const Vector& c, const IndexSet& labels, double scale) {
    const Index k = c.size();
    Vector w = Vector::Zero(k);
    std::vector<bool> passive(static_cast<std::size_t>(k), false);
    const double dual_tol = 1e-12 * std::max(1.0, c.cwiseAbs().maxCoeff());
    const double singular_tol = 1e-10 * scale;

    auto solve_on = [&](const IndexSet& set) -> Vector {
        const Matrix qs = select_block(q, set, set);
        if (min_symmetric_eigenvalue(qs) <= singular_tol) {
            IndexSet named;
            for (Index i : set) named.push_back(labels[static_cast<std::size_t>(i)]);
            throw SingularRestrictedSigma("Sigma restricted to support " + describe(named) +
                                          " is singular; the path is not unique there");
        }
        return qs.llt().solve(select_entries(c, set));
    };

    const std::size_t max_outer = static_cast<std::size_t>(3 * k + 10);
    for (std::size_t outer = 0; outer < max_outer; ++outer) {
        const Vector mu = c - q * w;
        Index enter = -1;
        double best = dual_tol;
        for (Index j = 0; j < k; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && mu(j) > best) {
                best = mu(j);
                enter = j;
            }
        }
        if (enter < 0) return w;
        passive[static_cast<std::size_t>(enter)] = true;

        for (std::size_t inner = 0; inner <= static_cast<std::size_t>(k); ++inner) {
            IndexSet set;
            for (Index j = 0; j < k; ++j)
                if (passive[static_cast<std::size_t>(j)]) set.push_back(j);
            const Vector zs = solve_on(set);
            Vector z = Vector::Zero(k);
            for (std::size_t i = 0; i < set.size(); ++i) z(set[i]) = zs(static_cast<Index>(i));

            bool feasible = true;
            for (Index j : set) feasible = feasible && z(j) > 0.0;
            if (feasible) {
                w = z;
                break;
            }
            double step = 1.0;
            for (Index j : set) {
                if (z(j) <= 0.0) step = std::min(step, w(j) / (w(j) - z(j)));
            }
            w += step * (z - w);
            for (Index j : set) {
                if (w(j) <= 1e-15 * std::max(1.0, w.cwiseAbs().maxCoeff())) {
                    w(j) = 0.0;
                    passive[static_cast<std::size_t>(j)] = false;
                }
            }
            if (!passive[static_cast<std::size_t>(enter)] && step == 0.0) return w;
        }
    }
    throw NoProgress("sign-constrained solve did not converge");
}

}  // namespace

std::vector<IssSegment> solve_path(const Problem& problem, double nu, double t_max, const IssOptions& options) {
    require_positive_nu(nu);
    if (!(t_max > 0.0)) throw InvalidHyperparam("t_max must be positive");
    const Index m = problem.m();

    const SplitOperators ops = a_and_sigma(problem, nu);
    const Matrix a_pinv = pseudoinverse(ops.A);
    const Matrix& sigma = ops.Sigma;
    const Vector drift = reduced_drift(problem, a_pinv);

    const double sigma_scale = std::max(1e-300, sigma.diagonal().cwiseAbs().maxCoeff());
    const double slope_tol = 1e-11 * std::max(1.0, drift.size() ? drift.cwiseAbs().maxCoeff() : 0.0);
    const std::size_t max_segments = options.max_segments ? options.max_segments : 20 * static_cast<std::size_t>(m + 10);

    std::vector<IssSegment> segments;
    Vector rho = Vector::Zero(m);
    double t = 0.0;

    while (true) {
        if (segments.size() >= max_segments)
            throw NoProgress("Split ISS exceeded " + std::to_string(max_segments) + " segments");

        // Boundary coordinates |rho_j| = 1 carry the sign constraint.
        IndexSet boundary;
        std::vector<int> boundary_sign;
        for (Index j = 0; j < m; ++j) {
            if (std::abs(rho(j)) >= 1.0 - 1e-12) {
                rho(j) = rho(j) > 0.0 ? 1.0 : -1.0;
                boundary.push_back(j);
                boundary_sign.push_back(rho(j) > 0.0 ? 1 : -1);
            }
        }

        Vector gamma = Vector::Zero(m);
        if (!boundary.empty()) {
            const Index k = static_cast<Index>(boundary.size());
            Vector s(k);
            for (Index i = 0; i < k; ++i) s(i) = boundary_sign[static_cast<std::size_t>(i)];
            const Matrix q = s.asDiagonal() * select_block(sigma, boundary, boundary) * s.asDiagonal();
            const Vector c = s.cwiseProduct(select_entries(drift, boundary));
            const Vector w = nonneg_quadratic(q, c, boundary, sigma_scale);
            for (Index i = 0; i < k; ++i) gamma(boundary[static_cast<std::size_t>(i)]) = s(i) * w(i);
        }

        Vector slope = drift - sigma * gamma;
        IssSegment seg;
        seg.t_start = t;
        seg.gamma = gamma;
        seg.beta = beta_given_gamma(problem, nu, a_pinv, gamma);
        for (std::size_t i = 0; i < boundary.size(); ++i) {
            const Index j = boundary[i];
            if (gamma(j) != 0.0 || std::abs(slope(j)) <= slope_tol) {
                seg.active.push_back(j);
                seg.signs.push_back(boundary_sign[i]);
                slope(j) = 0.0;
            } else if (boundary_sign[i] * slope(j) > 0.0) {
                // KKT of the restricted solve forbids this beyond rounding; pin it.
                slope(j) = 0.0;
                seg.active.push_back(j);
                seg.signs.push_back(boundary_sign[i]);
            }
        }
        seg.rho_start = rho;
        seg.rho_slope = slope;

        // Next hit of +-1 among the moving coordinates.
        double dt_min = std::numeric_limits<double>::infinity();
        Vector hit = Vector::Constant(m, std::numeric_limits<double>::infinity());
        for (Index j = 0; j < m; ++j) {
            if (std::abs(slope(j)) <= slope_tol) continue;
            const double target = slope(j) > 0.0 ? 1.0 : -1.0;
            const double dt = (target - rho(j)) / slope(j);
            hit(j) = std::max(dt, 0.0);
            dt_min = std::min(dt_min, hit(j));
        }

        if (!std::isfinite(dt_min)) {
            seg.t_end = std::numeric_limits<double>::infinity();
            segments.push_back(std::move(seg));
            break;
        }
        if (t + dt_min >= t_max) {
            seg.t_end = t_max;
            segments.push_back(std::move(seg));
            break;
        }
        if (!(t + dt_min > t))
            throw NoProgress("event time did not advance past t=" + std::to_string(t));

        seg.t_end = t + dt_min;
        rho += dt_min * slope;
        for (Index j = 0; j < m; ++j) {
            if (hit(j) <= dt_min * (1.0 + 1e-9) + 1e-300) rho(j) = slope(j) > 0.0 ? 1.0 : -1.0;
        }
        t = seg.t_end;
        segments.push_back(std::move(seg));
    }
    return segments;
}

std::vector<PathPoint> sample_path(const Problem& problem, double nu, const std::vector<IssSegment>& segments,
                                   const std::vector<double>& t_grid) {
    if (segments.empty()) throw OutOfRange("no segments to sample");
    if (!std::is_sorted(t_grid.begin(), t_grid.end())) throw InvalidDimension("t_grid must be sorted");
    const double horizon = segments.back().t_end;

    std::vector<PathPoint> out;
    out.reserve(t_grid.size());
    std::size_t seg = 0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        if (t < 0.0 || t > horizon)
            throw OutOfRange("t=" + std::to_string(t) + " outside [0, " + std::to_string(horizon) + "]");
        while (seg + 1 < segments.size() && t >= segments[seg].t_end) ++seg;
        const IssSegment& s = segments[seg];
        PathPoint p;
        p.k = i;
        p.t = t;
        p.gamma = s.gamma;
        p.beta = s.beta;
        p.rho = s.rho_at(t);
        p.z = p.rho;
        p.loss = loss(problem, nu, p.beta, p.gamma);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace slbi
