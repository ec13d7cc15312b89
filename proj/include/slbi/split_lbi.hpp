#pragma once

#include "slbi/model.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace slbi {

/// Split LBI hyperparameters. When `alpha` is empty it is derived from the
/// problem by default_alpha().
struct Hyperparams {
    double nu = 1.0;
    double kappa = 100.0;
    std::optional<double> alpha;
};

/// alpha = nu / (kappa (1 + nu Lambda_X^2 + Lambda_D^2)).
double default_alpha(const Problem& problem, double nu, double kappa);

/// Hyperparams with alpha filled in and all three values validated.
Hyperparams resolve(const Problem& problem, const Hyperparams& hyper);

struct PathPoint {
    std::size_t k = 0;
    double t = 0.0;
    Vector beta;
    Vector gamma;
    Vector z;
    Vector rho;
    double loss = 0.0;
};

struct Path {
    std::vector<PathPoint> points;
    Hyperparams hyper;
    std::size_t record_stride = 1;
};

/// Soft thresholding sign(z) max(|z| - lambda, 0), entrywise.
Vector shrink(const Vector& z, double lambda);

/// Zero initial state (k = 0) with its loss.
PathPoint initial_point(const Problem& problem, double nu);

/// Precomputed operators for repeated Split LBI steps on one problem.
/// beta-gradient is evaluated as G beta - c - D^T gamma / nu with
/// G = X^*X + D^T D / nu and c = X^*y.
class LbiStepper {
public:
    LbiStepper(const Problem& problem, const Hyperparams& resolved);

    /// One iteration: beta <- beta - kappa alpha grad_beta, z <- z - alpha grad_gamma,
    /// gamma <- kappa shrink(z, 1), rho <- z - shrink(z, 1).
    void advance(PathPoint& state) const;

    /// Attaches loss to a state (not done by advance() for speed).
    double loss_of(const PathPoint& state) const;

    const Hyperparams& hyper() const { return hyper_; }

private:
    [[noreturn]] void diverged(std::size_t k) const;

    const Problem* problem_;
    Hyperparams hyper_;
    Matrix gram_;   // X^*X + D^T D / nu
    Vector xty_;    // X^*y
    Matrix dt_nu_;  // D^T / nu
};

/// Single Split LBI step from `state`; loss is attached to the result.
PathPoint step(const Problem& problem, const Hyperparams& hyper, const PathPoint& state);

/// Runs k_max steps from zero, keeping every record_stride-th point and the last.
Path run(const Problem& problem, const Hyperparams& hyper, std::size_t k_max, std::size_t record_stride = 1);

/// Same iteration written in the (beta, rho, gamma) variables with
/// rho_{k+1} + gamma_{k+1}/kappa = rho_k + gamma_k/kappa - alpha grad_gamma.
/// Independent code path used to cross-check run().
Path run_moreau_form(const Problem& problem, const Hyperparams& hyper, std::size_t k_max,
                     std::size_t record_stride = 1);

/// Largest admissible step for forward Euler on the (beta, z) ODE of the
/// alpha -> 0 limit: nu / (kappa (1 + nu Lambda_X^2 + Lambda_D^2)).
double lbiss_step_bound(const Problem& problem, double nu, double kappa);

/// Forward Euler on d beta/dt = -kappa grad_beta, dz/dt = -grad_gamma up to t_max.
/// dt <= 0 selects lbiss_step_bound / 10. The final step is shortened so the
/// last recorded time is exactly t_max.
Path run_lbiss_reference(const Problem& problem, double nu, double kappa, double t_max, double dt = 0.0,
                         std::size_t record_stride = 1);

/// First index i with loss(points[i+1]) > loss(points[i]) + slack, if any.
std::optional<std::size_t> first_loss_increase(const Path& path, double slack = 1e-12);

}  // namespace slbi
