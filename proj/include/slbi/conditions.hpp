#pragma once

#include "slbi/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace slbi {

struct RscResult {
    double lambda = 0.0;
    /// False when L ∩ M = {0}; lambda is then reported as 0.
    bool nontrivial = true;
};

/// Restricted strong convexity constant: smallest eigenvalue of X^*X on
/// L ∩ M with L = Im(X^T) + Im(D^T) and M = ker(D_{S^c}).
RscResult rsc_lambda(const Problem& problem, const IndexSet& support);

/// Smallest eigenvalue of H_{(beta,S),(beta,S)}(nu) on L ⊕ R^s. Rows/cols of
/// the block are the p beta-coordinates followed by the selected gammas.
double lambda_h(const Problem& problem, const IndexSet& support, double nu);

/// Row-sum norm |Sigma_{S^c,S} Sigma_{S,S}^{-1}|_inf. Throws SingularSigmaSS
/// when lambda_min(Sigma_{S,S}) <= 1e-10.
double irr(const Problem& problem, const IndexSet& support, double nu);

/// Same value from a precomputed Sigma(nu).
double irr_from_sigma(const Matrix& sigma, const IndexSet& support);

struct IcQuantities {
    Matrix omega;  // Omega^S, |S^c| x s
    double ic0 = 0.0;
    double ic1 = 0.0;
};

struct ChebyshevOptions {
    double tol = 1e-9;
    int max_newton = 200;
};

/// min_v |a - B v|_inf over v, via Newton on a log-sum-exp smoothing with a
/// decreasing temperature. Returns the attained max-norm value.
double chebyshev_residual(const Vector& a, const Matrix& basis, const ChebyshevOptions& options = {});

/// Generalized-Lasso identifiability quantities ic0 = |Omega^S|_inf and
/// ic1 = min_{u in ker(D_{S^c}^T)} |Omega^S sign - u|_inf.
IcQuantities ic_quantities(const Problem& problem, const IndexSet& support, const std::vector<int>& sign_pattern);

/// Sign pattern sign(D_S beta*) from the problem's ground truth.
std::vector<int> truth_sign_pattern(const Problem& problem);

struct IrrCurveRow {
    double nu = 0.0;
    std::optional<double> irr;  // empty when Sigma_{S,S}(nu) was singular
    std::string status;         // "ok" or the error text
};

struct IrrCurve {
    std::vector<IrrCurveRow> rows;
    double ic0 = 0.0;
    double ic1 = 0.0;
    /// Index of the first row with irr < 1, if any.
    std::optional<std::size_t> first_below_one;
};

/// irr over a positive ascending nu grid plus the ic0/ic1 reference lines.
/// Grid points run in parallel (OpenMP); singular points are recorded.
IrrCurve irr_curve(const Problem& problem, const IndexSet& support, const std::vector<double>& nu_grid,
                   const std::vector<int>& sign_pattern);

namespace serial {
/// Reference loop for irr_curve, kept for testing the parallel kernel.
IrrCurve irr_curve(const Problem& problem, const IndexSet& support, const std::vector<double>& nu_grid,
                   const std::vector<int>& sign_pattern);
}  // namespace serial

/// dim {X beta : beta in ker(D)}.
Index r_prime(const Problem& problem);

struct ConditionReport {
    double lambda_rsc = 0.0;
    bool rsc_nontrivial = true;
    double nu = 0.0;  // nu used for lambda_h
    double lambda_h = 0.0;
    std::map<double, double> irr;  // nu -> irr(nu), singular points omitted
    double ic0 = 0.0;
    double ic1 = 0.0;
    SpectralBounds spectral;
    Index r_prime = 0;

    double eta_implied(double at_nu) const { return 1.0 - irr.at(at_nu); }
};

ConditionReport condition_report(const Problem& problem, const IndexSet& support, double nu,
                                 const std::vector<double>& nu_grid, const std::vector<int>& sign_pattern);

}  // namespace slbi
