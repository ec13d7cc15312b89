#include "slbi/conditions.hpp"

#include "slbi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace slbi {

namespace {

Matrix gram_over_n(const Problem& problem) {
    return problem.X().transpose() * problem.X() / static_cast<double>(problem.n());
}

// Orthonormal basis of L = Im(X^T) + Im(D^T).
Matrix identifiable_basis(const Problem& problem) {
    Matrix stacked(problem.n() + problem.m(), problem.p());
    stacked << problem.X(), problem.D();
    return row_space_basis(stacked);
}

IrrCurveRow irr_row(const Problem& problem, const IndexSet& support, double nu) {
    IrrCurveRow row;
    row.nu = nu;
    try {
        row.irr = irr(problem, support, nu);
        row.status = "ok";
    } catch (const SingularSigmaSS& e) {
        row.status = e.what();
    }
    return row;
}

void finish_curve(IrrCurve& curve) {
    for (std::size_t i = 0; i < curve.rows.size(); ++i) {
        if (curve.rows[i].irr && *curve.rows[i].irr < 1.0) {
            curve.first_below_one = i;
            break;
        }
    }
}

void validate_grid(const std::vector<double>& grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw InvalidHyperparam("nu grid must be positive");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw InvalidHyperparam("nu grid must be ascending");
    }
}

}  // namespace

RscResult rsc_lambda(const Problem& problem, const IndexSet& support) {
    require_index_set(support, problem.m(), "support");
    const Index p = problem.p();
    const Matrix l_basis = identifiable_basis(problem);
    const Matrix m_basis = kernel_basis(select_rows(problem.D(), complement(support, problem.m())), p);

    // v = W c lies in L iff (I - P_L) W c = 0.
    const Matrix outside = m_basis - l_basis * (l_basis.transpose() * m_basis);
    const Matrix coeffs = kernel_basis(outside, m_basis.cols(), kDefaultRankTol, 1e-9);
    const Matrix basis = m_basis * coeffs;
    if (basis.cols() == 0) return {0.0, false};
    const Matrix restricted = basis.transpose() * gram_over_n(problem) * basis;
    return {std::max(0.0, min_symmetric_eigenvalue(restricted)), true};
}

double lambda_h(const Problem& problem, const IndexSet& support, double nu) {
    require_index_set(support, problem.m(), "support");
    const Index p = problem.p();
    const Index s = static_cast<Index>(support.size());
    const Matrix h = hessian(problem, nu);

    IndexSet idx;
    for (Index i = 0; i < p; ++i) idx.push_back(i);
    for (Index j : support) idx.push_back(p + j);
    const Matrix block = select_block(h, idx, idx);

    const Matrix l_basis = identifiable_basis(problem);
    Matrix q = Matrix::Zero(p + s, l_basis.cols() + s);
    q.topLeftCorner(p, l_basis.cols()) = l_basis;
    q.bottomRightCorner(s, s) = Matrix::Identity(s, s);
    if (q.cols() == 0) return 0.0;
    return std::max(0.0, min_symmetric_eigenvalue(q.transpose() * block * q));
}

double irr_from_sigma(const Matrix& sigma, const IndexSet& support) {
    const IndexSet off = complement(support, sigma.rows());
    if (support.empty() || off.empty()) return 0.0;
    const Matrix ss = select_block(sigma, support, support);
    const double min_eig = min_symmetric_eigenvalue(ss);
    if (!(min_eig > 1e-10))
        throw SingularSigmaSS("Sigma_{S,S} is singular (min eigenvalue " + std::to_string(min_eig) + ")");
    const Matrix cs = select_block(sigma, off, support);
    // Sigma_{S^c,S} Sigma_{S,S}^{-1} = (Sigma_{S,S}^{-1} Sigma_{S,S^c})^T
    const Matrix ratio = ss.ldlt().solve(cs.transpose()).transpose();
    return inf_norm(ratio);
}

double irr(const Problem& problem, const IndexSet& support, double nu) {
    require_index_set(support, problem.m(), "support");
    if (support.empty() || static_cast<Index>(support.size()) == problem.m()) return 0.0;
    return irr_from_sigma(a_and_sigma(problem, nu).Sigma, support);
}

double chebyshev_residual(const Vector& a, const Matrix& basis, const ChebyshevOptions& options) {
    const double plain = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
    if (basis.cols() == 0 || a.size() == 0) return plain;
    const Index k = basis.cols();

    Vector v = Vector::Zero(k);
    double best = plain;
    auto max_abs = [&](const Vector& x) { return (a - basis * x).cwiseAbs().maxCoeff(); };

    // mu log sum_i (e^{r_i/mu} + e^{-r_i/mu}) upper-bounds max|r| within mu log(2N).
    const double log2n = std::log(2.0 * static_cast<double>(a.size()));
    auto smoothed = [&](const Vector& x, double mu, Vector* g, Matrix* h) {
        const Vector r = a - basis * x;
        const double top = r.cwiseAbs().maxCoeff();
        const Vector ep = ((r.array() - top) / mu).exp().matrix();
        const Vector em = ((-r.array() - top) / mu).exp().matrix();
        const double z = (ep + em).sum();
        if (g || h) {
            const Vector w = (ep - em) / z;
            if (g) *g = -basis.transpose() * w;
            if (h) {
                const Vector diag = (ep + em) / z;
                *h = (basis.transpose() * diag.asDiagonal() * basis - (basis.transpose() * w) * (w.transpose() * basis)) / mu;
            }
        }
        return top + mu * std::log(z);
    };

    double mu = std::max(plain, 1e-12) / 4.0;
    const double mu_floor = options.tol / (4.0 * log2n);
    int budget = options.max_newton * 20;
    while (budget > 0) {
        for (int it = 0; it < options.max_newton && budget > 0; ++it, --budget) {
            Vector g;
            Matrix h;
            const double f = smoothed(v, mu, &g, &h);
            h.diagonal().array() += 1e-14 * std::max(1.0, h.diagonal().maxCoeff());
            const Vector dir = -h.ldlt().solve(g);
            const double decrement = -g.dot(dir);
            if (!(decrement > 1e-14 * mu)) break;
            double step = 1.0;
            Vector trial = v + dir;
            while (smoothed(trial, mu, nullptr, nullptr) > f - 0.25 * step * decrement && step > 1e-12) {
                step *= 0.5;
                trial = v + step * dir;
            }
            v = trial;
            best = std::min(best, max_abs(v));
        }
        if (mu <= mu_floor) break;
        mu = std::max(mu / 4.0, mu_floor);
    }
    return std::min(best, max_abs(v));
}

IcQuantities ic_quantities(const Problem& problem, const IndexSet& support, const std::vector<int>& sign_pattern) {
    require_index_set(support, problem.m(), "support");
    if (sign_pattern.size() != support.size())
        throw InvalidDimension("sign pattern length must equal |S|");
    for (int s : sign_pattern)
        if (s != 1 && s != -1) throw InvalidDimension("sign pattern entries must be +1 or -1");

    const Index p = problem.p();
    const IndexSet off = complement(support, problem.m());
    const Matrix d_off = select_rows(problem.D(), off);
    const Matrix d_on = select_rows(problem.D(), support);

    IcQuantities q;
    const Matrix w = kernel_basis(d_off, p);
    const Matrix gram = gram_over_n(problem);
    const Matrix inner_pinv = pseudoinverse(w.transpose() * gram * w);
    const Matrix middle = gram * w * inner_pinv * w.transpose() - Matrix::Identity(p, p);
    q.omega = pseudoinverse(d_off).transpose() * middle * d_on.transpose();
    q.ic0 = inf_norm(q.omega);

    if (q.omega.rows() == 0 || q.omega.cols() == 0) {
        q.ic1 = 0.0;
        return q;
    }
    Vector sign(static_cast<Index>(sign_pattern.size()));
    for (std::size_t i = 0; i < sign_pattern.size(); ++i) sign(static_cast<Index>(i)) = sign_pattern[i];
    const Vector target = q.omega * sign;
    const Matrix u_basis = kernel_basis(d_off.transpose(), static_cast<Index>(off.size()));
    q.ic1 = std::min(chebyshev_residual(target, u_basis), q.ic0);
    return q;
}

std::vector<int> truth_sign_pattern(const Problem& problem) {
    if (!problem.truth()) throw InvalidDimension("problem has no ground truth");
    const Vector gamma_star = problem.D() * problem.truth()->beta;
    std::vector<int> signs;
    for (Index j : problem.truth()->support) signs.push_back(gamma_star(j) > 0.0 ? 1 : -1);
    return signs;
}

IrrCurve irr_curve(const Problem& problem, const IndexSet& support, const std::vector<double>& nu_grid,
                   const std::vector<int>& sign_pattern) {
    validate_grid(nu_grid);
    IrrCurve curve;
    const IcQuantities ic = ic_quantities(problem, support, sign_pattern);
    curve.ic0 = ic.ic0;
    curve.ic1 = ic.ic1;
    curve.rows.resize(nu_grid.size());
    const auto count = static_cast<long>(nu_grid.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        curve.rows[static_cast<std::size_t>(i)] = irr_row(problem, support, nu_grid[static_cast<std::size_t>(i)]);
    }
    finish_curve(curve);
    return curve;
}

namespace serial {

IrrCurve irr_curve(const Problem& problem, const IndexSet& support, const std::vector<double>& nu_grid,
                   const std::vector<int>& sign_pattern) {
    validate_grid(nu_grid);
    IrrCurve curve;
    const IcQuantities ic = ic_quantities(problem, support, sign_pattern);
    curve.ic0 = ic.ic0;
    curve.ic1 = ic.ic1;
    for (double nu : nu_grid) curve.rows.push_back(irr_row(problem, support, nu));
    finish_curve(curve);
    return curve;
}

}  // namespace serial

Index r_prime(const Problem& problem) {
    const Matrix ker_d = kernel_basis(problem.D(), problem.p());
    if (ker_d.cols() == 0) return 0;
    return numerical_rank(problem.X() * ker_d);
}

ConditionReport condition_report(const Problem& problem, const IndexSet& support, double nu,
                                 const std::vector<double>& nu_grid, const std::vector<int>& sign_pattern) {
    ConditionReport r;
    const RscResult rsc = rsc_lambda(problem, support);
    r.lambda_rsc = rsc.lambda;
    r.rsc_nontrivial = rsc.nontrivial;
    r.nu = nu;
    r.lambda_h = lambda_h(problem, support, nu);
    const IrrCurve curve = irr_curve(problem, support, nu_grid, sign_pattern);
    for (const IrrCurveRow& row : curve.rows)
        if (row.irr) r.irr[row.nu] = *row.irr;
    r.ic0 = curve.ic0;
    r.ic1 = curve.ic1;
    r.spectral = spectral_bounds(problem.X(), problem.D(), support);
    r.r_prime = r_prime(problem);
    return r;
}

}  // namespace slbi
