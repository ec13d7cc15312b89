#include "slbi/estimators.hpp"

#include "slbi/conditions.hpp"
#include "slbi/errors.hpp"

#include <cmath>
#include <string>

namespace slbi {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

const Truth& require_truth(const Problem& problem) {
    if (!problem.truth()) throw InvalidDimension("problem has no ground truth");
    return *problem.truth();
}

Matrix oracle_normal_matrix(const Problem& problem, double nu, const IndexSet& support) {
    const Matrix d_off = select_rows(problem.D(), complement(support, problem.m()));
    const double n = static_cast<double>(problem.n());
    return problem.X().transpose() * problem.X() / n + d_off.transpose() * d_off / nu;
}

}  // namespace

OracleEstimate oracle_estimator(const Problem& problem, double nu, const IndexSet& support) {
    require_positive_nu(nu);
    require_index_set(support, problem.m(), "support");
    const double n = static_cast<double>(problem.n());
    const Matrix g = oracle_normal_matrix(problem, nu, support);
    OracleEstimate est;
    est.beta = pseudoinverse(g) * (problem.X().transpose() * problem.y() / n);
    est.gamma = Vector::Zero(problem.m());
    const Vector d_beta = problem.D() * est.beta;
    for (Index j : support) est.gamma(j) = d_beta(j);
    return est;
}

StoppingRule stopping_rule(double eta, double sigma, const SpectralBounds& spectral, Index n, Index m, double alpha) {
    if (m < 2) throw InvalidDimension("stopping rule needs m >= 2 (log m > 0), got m=" + std::to_string(m));
    if (n < 1) throw InvalidDimension("stopping rule needs n >= 1");
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw InvalidHyperparam(std::string(name) + " must be finite and positive");
    };
    positive(eta, "eta");
    positive(sigma, "sigma");
    positive(spectral.lambda_d, "lambda_D");
    positive(spectral.Lambda_x, "Lambda_X");
    positive(alpha, "alpha");

    StoppingRule rule;
    rule.inputs = {eta, sigma, spectral.lambda_d, spectral.Lambda_x, n, m, alpha};
    rule.tau_bar = eta / (8.0 * sigma) * (spectral.lambda_d / spectral.Lambda_x) *
                   std::sqrt(static_cast<double>(n) / std::log(static_cast<double>(m)));
    rule.k_bar = static_cast<std::size_t>(std::floor(rule.tau_bar / alpha));
    return rule;
}

Vector projection_estimator(const Problem& problem, const Vector& beta, const IndexSet& support) {
    require_index_set(support, problem.m(), "support");
    if (beta.size() != problem.p()) throw InvalidDimension("beta length mismatch");
    const Matrix d_off = select_rows(problem.D(), complement(support, problem.m()));
    return projection_onto_kernel(d_off, problem.p()) * beta;
}

double default_eta(const Problem& problem, double nu) {
    return 1.0 - irr(problem, require_truth(problem).support, nu);
}

double residual_sigma(const Problem& problem, double nu, const IndexSet& support) {
    const OracleEstimate est = oracle_estimator(problem, nu, support);
    const Index df = numerical_rank(oracle_normal_matrix(problem, nu, support));
    if (problem.n() <= df) return 0.0;
    const double rss = (problem.y() - problem.X() * est.beta).squaredNorm();
    return std::sqrt(rss / static_cast<double>(problem.n() - df));
}

ConsistencyReport consistency_check(const Problem& problem, const Path& path, const StoppingRule& rule) {
    const Truth& truth = require_truth(problem);
    if (path.points.empty() || path.points.back().k < rule.k_bar)
        throw PathTooShort("path ends at k=" + std::to_string(path.points.empty() ? 0 : path.points.back().k) +
                           " before k_bar=" + std::to_string(rule.k_bar));

    std::vector<bool> in_support(static_cast<std::size_t>(problem.m()), false);
    for (Index j : truth.support) in_support[static_cast<std::size_t>(j)] = true;

    ConsistencyReport r;
    r.k_bar = rule.k_bar;
    r.no_false_positive = true;
    const PathPoint* at = nullptr;
    for (const PathPoint& pt : path.points) {
        if (pt.k > rule.k_bar) break;
        at = &pt;
        for (Index j = 0; j < pt.gamma.size(); ++j)
            if (pt.gamma(j) != 0.0 && !in_support[static_cast<std::size_t>(j)]) r.no_false_positive = false;
    }
    r.evaluated_k = at->k;

    const Vector gamma_star = problem.D() * truth.beta;
    r.sign_consistent = true;
    for (Index j = 0; j < gamma_star.size(); ++j)
        if (sign_of(at->gamma(j)) != sign_of(gamma_star(j))) r.sign_consistent = false;

    r.l2_gamma = (at->gamma - gamma_star).norm();
    r.l2_beta = (at->beta - truth.beta).norm();
    r.l2_beta_projected = (projection_estimator(problem, at->beta, support_of(at->gamma)) - truth.beta).norm();
    return r;
}

}  // namespace slbi
