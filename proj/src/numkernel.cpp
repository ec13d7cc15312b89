#include "slbi/numkernel.hpp"

#include "slbi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace slbi {

namespace {

// Number of leading singular values above the relative cutoff.
Index count_above(const Vector& sv, double rank_tol, double abs_tol = 0.0) {
    if (sv.size() == 0 || !(sv(0) > 0.0)) return 0;
    const double cutoff = std::max(rank_tol * sv(0), abs_tol);
    Index r = 0;
    while (r < sv.size() && sv(r) > cutoff) ++r;
    return r;
}

}  // namespace

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw InvalidMatrix(std::string(what) + " has non-finite entries");
}

void require_finite(const Vector& v, const char* what) {
    if (!v.allFinite()) throw InvalidMatrix(std::string(what) + " has non-finite entries");
}

CompactSvd compact_svd(const Matrix& m, double rank_tol) {
    require_finite(m, "matrix");
    if (m.size() == 0) {
        return {Matrix(m.rows(), 0), Vector(0), Matrix(m.cols(), 0)};
    }
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Index r = count_above(svd.singularValues(), rank_tol);
    return {svd.matrixU().leftCols(r), svd.singularValues().head(r), svd.matrixV().leftCols(r)};
}

Matrix pseudoinverse(const Matrix& m, double rank_tol) {
    const CompactSvd svd = compact_svd(m, rank_tol);
    return svd.V * svd.S.cwiseInverse().asDiagonal() * svd.U.transpose();
}

Matrix projection_onto_kernel(const Matrix& m, Index cols, double rank_tol) {
    if (m.rows() == 0) return Matrix::Identity(cols, cols);
    if (m.cols() != cols) throw InvalidDimension("projection_onto_kernel: column mismatch");
    const CompactSvd svd = compact_svd(m, rank_tol);
    Matrix p = Matrix::Identity(cols, cols) - svd.V * svd.V.transpose();
    return 0.5 * (p + p.transpose());
}

Matrix kernel_basis(const Matrix& m, Index cols, double rank_tol, double abs_tol) {
    if (m.cols() != cols && m.rows() != 0) throw InvalidDimension("kernel_basis: column mismatch");
    if (m.rows() == 0 || cols == 0) return Matrix::Identity(cols, cols);
    require_finite(m, "matrix");
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const Index r = count_above(svd.singularValues(), rank_tol, abs_tol);
    return svd.matrixV().rightCols(cols - r);
}

Matrix row_space_basis(const Matrix& m, double rank_tol) {
    return compact_svd(m, rank_tol).V;
}

Index numerical_rank(const Matrix& m, double rank_tol) {
    if (m.size() == 0) return 0;
    require_finite(m, "matrix");
    Eigen::BDCSVD<Matrix> svd(m);
    return count_above(svd.singularValues(), rank_tol);
}

double largest_singular_value(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    require_finite(m, "matrix");
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double smallest_nonzero_singular_value(const Matrix& m, double rank_tol) {
    if (m.size() == 0) return 0.0;
    require_finite(m, "matrix");
    Eigen::BDCSVD<Matrix> svd(m);
    const Index r = count_above(svd.singularValues(), rank_tol);
    return r == 0 ? 0.0 : svd.singularValues()(r - 1);
}

double min_symmetric_eigenvalue(const Matrix& m) {
    if (m.rows() == 0) return std::numeric_limits<double>::infinity();
    const Matrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    return eig.eigenvalues()(0);
}

double inf_norm(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

Matrix select_rows(const Matrix& m, const IndexSet& rows) {
    Matrix out(static_cast<Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = m.row(rows[i]);
    return out;
}

Matrix select_cols(const Matrix& m, const IndexSet& cols) {
    Matrix out(m.rows(), static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = m.col(cols[j]);
    return out;
}

Matrix select_block(const Matrix& m, const IndexSet& rows, const IndexSet& cols) {
    Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            out(static_cast<Index>(i), static_cast<Index>(j)) = m(rows[i], cols[j]);
    return out;
}

Vector select_entries(const Vector& v, const IndexSet& idx) {
    Vector out(static_cast<Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Index>(i)) = v(idx[i]);
    return out;
}

IndexSet complement(const IndexSet& set, Index size) {
    IndexSet out;
    out.reserve(static_cast<std::size_t>(size) - std::min<std::size_t>(set.size(), size));
    auto it = set.begin();
    for (Index i = 0; i < size; ++i) {
        if (it != set.end() && *it == i) {
            ++it;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

void require_index_set(const IndexSet& set, Index size, const char* what) {
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (set[i] < 0 || set[i] >= size)
            throw InvalidDimension(std::string(what) + ": index " + std::to_string(set[i]) +
                                   " outside [0, " + std::to_string(size) + ")");
        if (i > 0 && set[i] <= set[i - 1])
            throw InvalidDimension(std::string(what) + ": indices must be sorted and unique");
    }
}

SpectralBounds spectral_bounds(const Matrix& x, const Matrix& d, const IndexSet& support) {
    if (x.cols() != d.cols()) throw InvalidDimension("spectral_bounds: X and D column mismatch");
    require_index_set(support, d.rows(), "support");
    SpectralBounds b;
    b.lambda_d = smallest_nonzero_singular_value(d);
    const IndexSet off = complement(support, d.rows());
    if (!off.empty()) {
        const double off_min = smallest_nonzero_singular_value(select_rows(d, off));
        if (off_min > 0.0) b.lambda_d = std::min(b.lambda_d, off_min);
    }
    b.Lambda_d = largest_singular_value(d);
    const double n = static_cast<double>(std::max<Index>(x.rows(), 1));
    b.Lambda_x = largest_singular_value(x) / std::sqrt(n);
    return b;
}

}  // namespace slbi
