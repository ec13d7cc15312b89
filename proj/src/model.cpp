#include "slbi/model.hpp"

#include "slbi/errors.hpp"

#include <cmath>
#include <string>

namespace slbi {

namespace {

void validate_shapes(const Matrix& x, const Vector& y, const Matrix& d) {
    if (x.rows() != y.size())
        throw InvalidDimension("X has " + std::to_string(x.rows()) + " rows but y has " +
                               std::to_string(y.size()) + " entries");
    if (x.cols() != d.cols())
        throw InvalidDimension("X has " + std::to_string(x.cols()) + " columns but D has " +
                               std::to_string(d.cols()));
    if (x.rows() == 0) throw InvalidDimension("problem needs at least one observation");
    require_finite(x, "X");
    require_finite(y, "y");
    require_finite(d, "D");
}

}  // namespace

Problem::Problem(Matrix x, Vector y, Matrix d) : x_(std::move(x)), y_(std::move(y)), d_(std::move(d)) {
    validate_shapes(x_, y_, d_);
}

Problem::Problem(Matrix x, Vector y, Matrix d, Vector beta_star, double sigma)
    : Problem(std::move(x), std::move(y), std::move(d)) {
    if (beta_star.size() != p())
        throw InvalidDimension("beta* has " + std::to_string(beta_star.size()) + " entries, expected " +
                               std::to_string(p()));
    require_finite(beta_star, "beta*");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidHyperparam("noise scale must be finite and >= 0");
    Truth t;
    t.support = support_of(d_ * beta_star);
    t.beta = std::move(beta_star);
    t.sigma = sigma;
    truth_ = std::move(t);
}

Problem Problem::with_response(Vector y) const {
    Problem out = *this;
    if (y.size() != n()) throw InvalidDimension("response length mismatch");
    require_finite(y, "y");
    out.y_ = std::move(y);
    return out;
}

IndexSet support_of(const Vector& v) {
    IndexSet s;
    for (Index i = 0; i < v.size(); ++i)
        if (v(i) != 0.0) s.push_back(i);
    return s;
}

void require_positive_nu(double nu) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw InvalidHyperparam("nu must be finite and positive");
}

double loss(const Problem& problem, double nu, const Vector& beta, const Vector& gamma) {
    require_positive_nu(nu);
    const double n = static_cast<double>(problem.n());
    const double fit = (problem.y() - problem.X() * beta).squaredNorm() / (2.0 * n);
    const double split = (gamma - problem.D() * beta).squaredNorm() / (2.0 * nu);
    return fit + split;
}

Gradient grad(const Problem& problem, double nu, const Vector& beta, const Vector& gamma) {
    require_positive_nu(nu);
    const double n = static_cast<double>(problem.n());
    const Vector gap = problem.D() * beta - gamma;
    Gradient g;
    g.beta = problem.X().transpose() * (problem.X() * beta - problem.y()) / n + problem.D().transpose() * gap / nu;
    g.gamma = -gap / nu;
    return g;
}

Matrix hessian(const Problem& problem, double nu) {
    require_positive_nu(nu);
    const Index p = problem.p();
    const Index m = problem.m();
    const double n = static_cast<double>(problem.n());
    const Matrix& d = problem.D();
    Matrix h(p + m, p + m);
    h.topLeftCorner(p, p) = problem.X().transpose() * problem.X() / n + d.transpose() * d / nu;
    h.topRightCorner(p, m) = -d.transpose() / nu;
    h.bottomLeftCorner(m, p) = -d / nu;
    h.bottomRightCorner(m, m) = Matrix::Identity(m, m) / nu;
    return h;
}

// Sigma is evaluated without forming I - D A^+ D^T, which cancels badly for
// small nu. With D = U L V^T (compact) and K an orthonormal basis of ker(D),
//   G~ = G - G K (K^T G K)^+ K^T G,   M = L^-1 V^T G~ V L^-1,
//   Sigma = (I - U U^T) / nu + U M (I + nu M)^-1 U^T.
SplitOperators a_and_sigma(const Problem& problem, double nu) {
    require_positive_nu(nu);
    const double n = static_cast<double>(problem.n());
    const Matrix& d = problem.D();
    const Index m = problem.m();
    const Matrix g = problem.X().transpose() * problem.X() / n;
    SplitOperators ops;
    ops.A = nu * g + d.transpose() * d;
    ops.A = 0.5 * (ops.A + ops.A.transpose());

    const CompactSvd svd = compact_svd(d);
    const Matrix ker = kernel_basis(d, problem.p());
    Matrix g_tilde = g;
    if (ker.cols() > 0) {
        const Matrix c = g * ker;
        g_tilde -= c * pseudoinverse(ker.transpose() * c) * c.transpose();
    }
    const Vector inv_s = svd.S.cwiseInverse();
    Matrix mm = inv_s.asDiagonal() * (svd.V.transpose() * g_tilde * svd.V) * inv_s.asDiagonal();
    mm = 0.5 * (mm + mm.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(mm);
    const Vector mu = eig.eigenvalues().cwiseMax(0.0);
    const Vector damped = (mu.array() / (1.0 + nu * mu.array())).matrix();
    const Matrix uq = svd.U * eig.eigenvectors();
    Matrix sigma = (Matrix::Identity(m, m) - svd.U * svd.U.transpose()) / nu + uq * damped.asDiagonal() * uq.transpose();
    ops.Sigma = 0.5 * (sigma + sigma.transpose());
    return ops;
}

Vector reduced_drift(const Problem& problem, const Matrix& a_pinv) {
    const double n = static_cast<double>(problem.n());
    return problem.D() * (a_pinv * (problem.X().transpose() * problem.y() / n));
}

Vector beta_given_gamma(const Problem& problem, double nu, const Matrix& a_pinv, const Vector& gamma) {
    const double n = static_cast<double>(problem.n());
    return a_pinv * (nu * problem.X().transpose() * problem.y() / n + problem.D().transpose() * gamma);
}

}  // namespace slbi
