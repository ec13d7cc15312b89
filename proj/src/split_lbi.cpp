#include "slbi/split_lbi.hpp"

#include "slbi/errors.hpp"

#include <cmath>

namespace slbi {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidHyperparam(std::string(name) + " must be finite and positive");
}

void record(Path& path, const PathPoint& point) { path.points.push_back(point); }

}  // namespace

double default_alpha(const Problem& problem, double nu, double kappa) {
    require_positive(nu, "nu");
    require_positive(kappa, "kappa");
    const SpectralBounds b = spectral_bounds(problem.X(), problem.D(), {});
    return nu / (kappa * (1.0 + nu * b.Lambda_x * b.Lambda_x + b.Lambda_d * b.Lambda_d));
}

Hyperparams resolve(const Problem& problem, const Hyperparams& hyper) {
    require_positive(hyper.nu, "nu");
    require_positive(hyper.kappa, "kappa");
    Hyperparams out = hyper;
    if (!out.alpha) out.alpha = default_alpha(problem, hyper.nu, hyper.kappa);
    require_positive(*out.alpha, "alpha");
    return out;
}

Vector shrink(const Vector& z, double lambda) {
    if (!(lambda >= 0.0)) throw InvalidHyperparam("shrinkage threshold must be >= 0");
    Vector out(z.size());
    for (Index i = 0; i < z.size(); ++i) {
        const double mag = std::abs(z(i)) - lambda;
        out(i) = mag > 0.0 ? std::copysign(mag, z(i)) : 0.0;
    }
    return out;
}

PathPoint initial_point(const Problem& problem, double nu) {
    PathPoint p;
    p.beta = Vector::Zero(problem.p());
    p.gamma = Vector::Zero(problem.m());
    p.z = Vector::Zero(problem.m());
    p.rho = Vector::Zero(problem.m());
    p.loss = loss(problem, nu, p.beta, p.gamma);
    return p;
}

LbiStepper::LbiStepper(const Problem& problem, const Hyperparams& resolved)
    : problem_(&problem), hyper_(resolve(problem, resolved)) {
    const double n = static_cast<double>(problem.n());
    const double nu = hyper_.nu;
    gram_ = problem.X().transpose() * problem.X() / n + problem.D().transpose() * problem.D() / nu;
    xty_ = problem.X().transpose() * problem.y() / n;
    dt_nu_ = problem.D().transpose() / nu;
}

void LbiStepper::advance(PathPoint& state) const {
    const double nu = hyper_.nu;
    const double kappa = hyper_.kappa;
    const double alpha = *hyper_.alpha;
    const Matrix& d = problem_->D();

    // Both gradients use the current (beta, gamma).
    const Vector d_beta = d * state.beta;
    Vector g_beta = gram_ * state.beta - xty_;
    g_beta.noalias() -= dt_nu_ * state.gamma;
    const Vector g_gamma = (state.gamma - d_beta) / nu;

    state.beta -= (kappa * alpha) * g_beta;
    state.z -= alpha * g_gamma;
    const Vector shrunk = shrink(state.z, 1.0);
    state.gamma = kappa * shrunk;
    state.rho = state.z - shrunk;
    state.k += 1;
    state.t = static_cast<double>(state.k) * alpha;
    if (!state.beta.allFinite() || !state.z.allFinite()) diverged(state.k);
}

double LbiStepper::loss_of(const PathPoint& state) const {
    return loss(*problem_, hyper_.nu, state.beta, state.gamma);
}

void LbiStepper::diverged(std::size_t k) const {
    const double h_norm = largest_singular_value(hessian(*problem_, hyper_.nu));
    throw DivergenceDetected(k, hyper_.kappa * *hyper_.alpha * h_norm);
}

PathPoint step(const Problem& problem, const Hyperparams& hyper, const PathPoint& state) {
    const LbiStepper stepper(problem, hyper);
    PathPoint next = state;
    stepper.advance(next);
    next.loss = stepper.loss_of(next);
    return next;
}

Path run(const Problem& problem, const Hyperparams& hyper, std::size_t k_max, std::size_t record_stride) {
    if (record_stride == 0) throw InvalidDimension("record_stride must be >= 1");
    const LbiStepper stepper(problem, hyper);
    Path path;
    path.hyper = stepper.hyper();
    path.record_stride = record_stride;

    PathPoint state = initial_point(problem, hyper.nu);
    record(path, state);
    for (std::size_t k = 1; k <= k_max; ++k) {
        stepper.advance(state);
        if (k % record_stride == 0 || k == k_max) {
            state.loss = stepper.loss_of(state);
            record(path, state);
        }
    }
    return path;
}

Path run_moreau_form(const Problem& problem, const Hyperparams& hyper, std::size_t k_max,
                     std::size_t record_stride) {
    if (record_stride == 0) throw InvalidDimension("record_stride must be >= 1");
    const Hyperparams h = resolve(problem, hyper);
    const double kappa = h.kappa;
    const double alpha = *h.alpha;

    Path path;
    path.hyper = h;
    path.record_stride = record_stride;

    Vector beta = Vector::Zero(problem.p());
    Vector gamma = Vector::Zero(problem.m());
    Vector rho = Vector::Zero(problem.m());
    path.points.push_back(initial_point(problem, h.nu));

    for (std::size_t k = 1; k <= k_max; ++k) {
        const Gradient g = grad(problem, h.nu, beta, gamma);
        beta = beta / kappa - alpha * g.beta;
        beta *= kappa;
        // Moreau split of w = rho + gamma / kappa into (rho, gamma).
        const Vector w = rho + gamma / kappa - alpha * g.gamma;
        const Vector s = shrink(w, 1.0);
        gamma = kappa * s;
        rho = w - s;
        if (!beta.allFinite() || !w.allFinite()) {
            const double h_norm = largest_singular_value(hessian(problem, h.nu));
            throw DivergenceDetected(k, kappa * alpha * h_norm);
        }
        if (k % record_stride == 0 || k == k_max) {
            PathPoint p;
            p.k = k;
            p.t = static_cast<double>(k) * alpha;
            p.beta = beta;
            p.gamma = gamma;
            p.rho = rho;
            p.z = rho + gamma / kappa;
            p.loss = loss(problem, h.nu, beta, gamma);
            path.points.push_back(std::move(p));
        }
    }
    return path;
}

double lbiss_step_bound(const Problem& problem, double nu, double kappa) {
    return default_alpha(problem, nu, kappa);
}

Path run_lbiss_reference(const Problem& problem, double nu, double kappa, double t_max, double dt,
                         std::size_t record_stride) {
    require_positive(nu, "nu");
    require_positive(kappa, "kappa");
    if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw InvalidHyperparam("t_max must be finite and >= 0");
    if (record_stride == 0) throw InvalidDimension("record_stride must be >= 1");
    if (!(dt > 0.0)) dt = lbiss_step_bound(problem, nu, kappa) / 10.0;

    Path path;
    path.hyper = Hyperparams{nu, kappa, dt};
    path.record_stride = record_stride;

    PathPoint state = initial_point(problem, nu);
    path.points.push_back(state);
    if (t_max == 0.0) return path;

    const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
    for (std::size_t k = 1; k <= steps; ++k) {
        const double h = (k == steps) ? t_max - static_cast<double>(k - 1) * dt : dt;
        const Gradient g = grad(problem, nu, state.beta, state.gamma);
        state.beta -= h * kappa * g.beta;
        state.z -= h * g.gamma;
        const Vector s = shrink(state.z, 1.0);
        state.gamma = kappa * s;
        state.rho = state.z - s;
        state.k = k;
        state.t = (k == steps) ? t_max : static_cast<double>(k) * dt;
        if (!state.beta.allFinite() || !state.z.allFinite()) {
            const double h_norm = largest_singular_value(hessian(problem, nu));
            throw DivergenceDetected(k, kappa * dt * h_norm);
        }
        if (k % record_stride == 0 || k == steps) {
            state.loss = loss(problem, nu, state.beta, state.gamma);
            path.points.push_back(state);
        }
    }
    return path;
}

std::optional<std::size_t> first_loss_increase(const Path& path, double slack) {
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i)
        if (path.points[i + 1].loss > path.points[i].loss + slack) return i;
    return std::nullopt;
}

}  // namespace slbi
