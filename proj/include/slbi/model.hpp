#pragma once

#include "slbi/numkernel.hpp"

#include <optional>

namespace slbi {

/// Ground truth attached to a simulated problem.
struct Truth {
    Vector beta;       // beta*
    IndexSet support;  // S = supp(D beta*), exact nonzero test
    double sigma = 1.0;
};

/// The linear model y = X beta* + eps with structural sparsity gamma* = D beta*.
/// Immutable after construction; shapes and finiteness are validated.
class Problem {
public:
    Problem(Matrix x, Vector y, Matrix d);
    Problem(Matrix x, Vector y, Matrix d, Vector beta_star, double sigma);

    const Matrix& X() const { return x_; }
    const Vector& y() const { return y_; }
    const Matrix& D() const { return d_; }
    const std::optional<Truth>& truth() const { return truth_; }

    Index n() const { return x_.rows(); }
    Index p() const { return x_.cols(); }
    Index m() const { return d_.rows(); }

    /// Same design, new response (used by replicate generators).
    Problem with_response(Vector y) const;

private:
    Matrix x_;
    Vector y_;
    Matrix d_;
    std::optional<Truth> truth_;
};

/// Exact support of a vector (entries that are not exactly zero).
IndexSet support_of(const Vector& v);

/// l(beta, gamma) = |y - X beta|^2 / (2n) + |gamma - D beta|^2 / (2 nu).
double loss(const Problem& problem, double nu, const Vector& beta, const Vector& gamma);

struct Gradient {
    Vector beta;
    Vector gamma;
};

Gradient grad(const Problem& problem, double nu, const Vector& beta, const Vector& gamma);

/// (p+m) x (p+m) Hessian of the split loss, beta block first.
Matrix hessian(const Problem& problem, double nu);

struct SplitOperators {
    Matrix A;      // nu X^*X + D^T D
    Matrix Sigma;  // (I - D A^+ D^T) / nu
};

SplitOperators a_and_sigma(const Problem& problem, double nu);

/// D A^+ X^* y, the constant drift of the reduced inclusion in gamma.
Vector reduced_drift(const Problem& problem, const Matrix& a_pinv);

/// argmin_beta l(beta, gamma) = A^+ (nu X^* y + D^T gamma).
Vector beta_given_gamma(const Problem& problem, double nu, const Matrix& a_pinv, const Vector& gamma);

/// Throws InvalidHyperparam unless nu is finite and positive.
void require_positive_nu(double nu);

}  // namespace slbi
