#pragma once

#include "slbi/model.hpp"
#include "slbi/split_lbi.hpp"

#include <cstddef>

namespace slbi {

struct OracleEstimate {
    Vector beta;
    Vector gamma;
};

/// Minimizer of the split loss over beta in L with gamma_{S^c} = 0. Eliminating
/// gamma_S = D_S beta leaves (X^*X + D_{S^c}^T D_{S^c} / nu) beta = X^*y, solved
/// with the pseudoinverse (minimal-norm when singular).
OracleEstimate oracle_estimator(const Problem& problem, double nu, const IndexSet& support);

struct StoppingInputs {
    double eta = 0.0;
    double sigma = 0.0;
    double lambda_d = 0.0;
    double Lambda_x = 0.0;
    Index n = 0;
    Index m = 0;
    double alpha = 0.0;
};

struct StoppingRule {
    double tau_bar = 0.0;
    std::size_t k_bar = 0;
    StoppingInputs inputs;
};

/// tau = eta / (8 sigma) * lambda_D / Lambda_X * sqrt(n / ln m), k = floor(tau / alpha).
StoppingRule stopping_rule(double eta, double sigma, const SpectralBounds& spectral, Index n, Index m, double alpha);

/// (I - D_{S^c}^+ D_{S^c}) beta with S^c the complement of `support`.
Vector projection_estimator(const Problem& problem, const Vector& beta, const IndexSet& support);

/// 1 - irr(nu) on the true support. Requires ground truth.
double default_eta(const Problem& problem, double nu);

/// Heuristic noise scale sqrt(RSS / (n - df)) at the oracle estimator, with
/// df the rank of the oracle's normal matrix. Returns 0 when n <= df.
double residual_sigma(const Problem& problem, double nu, const IndexSet& support);

struct ConsistencyReport {
    std::size_t k_bar = 0;
    std::size_t evaluated_k = 0;  // last recorded index <= k_bar
    bool no_false_positive = false;
    bool sign_consistent = false;
    double l2_gamma = 0.0;
    double l2_beta = 0.0;
    double l2_beta_projected = 0.0;
};

/// Checks supp(gamma_k) within S for every recorded k <= k_bar and compares
/// sign(gamma) with sign(D beta*) at the last recorded index <= k_bar.
/// Throws PathTooShort if the path stops before k_bar.
ConsistencyReport consistency_check(const Problem& problem, const Path& path, const StoppingRule& rule);

}  // namespace slbi
