#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace slbi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Sorted, duplicate-free list of 0-based row (or coordinate) indices.
using IndexSet = std::vector<Index>;

inline constexpr double kDefaultRankTol = 1e-10;

/// Thin SVD with numerically-zero singular triplets dropped.
struct CompactSvd {
    Matrix U;  // rows x r, orthonormal columns
    Vector S;  // r positive singular values, descending
    Matrix V;  // cols x r, orthonormal columns

    Index rank() const { return S.size(); }
};

/// Throws InvalidMatrix if any entry of `m` is NaN or infinite.
void require_finite(const Matrix& m, const char* what);
void require_finite(const Vector& v, const char* what);

/// Keeps the triplets with sigma > rank_tol * sigma_max. A zero (or empty)
/// matrix yields rank 0 with correctly shaped empty factors.
CompactSvd compact_svd(const Matrix& m, double rank_tol = kDefaultRankTol);

/// Moore-Penrose pseudoinverse V diag(1/S) U^T, built on compact_svd.
Matrix pseudoinverse(const Matrix& m, double rank_tol = kDefaultRankTol);

/// Orthogonal projector I - M^+ M onto ker(M). `cols` fixes the ambient
/// dimension so that a matrix with zero rows maps to the identity.
Matrix projection_onto_kernel(const Matrix& m, Index cols, double rank_tol = kDefaultRankTol);

/// Orthonormal basis (as columns) of ker(M) inside R^cols. Singular values
/// at or below max(rank_tol * sigma_max, abs_tol) count as zero; pass an
/// absolute floor when M may be numerically zero.
Matrix kernel_basis(const Matrix& m, Index cols, double rank_tol = kDefaultRankTol, double abs_tol = 0.0);

/// Orthonormal basis of the row space Im(M^T).
Matrix row_space_basis(const Matrix& m, double rank_tol = kDefaultRankTol);

Index numerical_rank(const Matrix& m, double rank_tol = kDefaultRankTol);

/// Largest singular value; 0 for an empty or zero matrix.
double largest_singular_value(const Matrix& m);

/// Smallest singular value above the rank cutoff; 0 if the matrix is zero.
double smallest_nonzero_singular_value(const Matrix& m, double rank_tol = kDefaultRankTol);

/// Smallest eigenvalue of the symmetric part of a square matrix (+inf if empty).
double min_symmetric_eigenvalue(const Matrix& m);

/// Max absolute row sum, the operator norm induced by l-infinity.
double inf_norm(const Matrix& m);

/// Rows of `m` selected by `rows` (in order).
Matrix select_rows(const Matrix& m, const IndexSet& rows);
Matrix select_cols(const Matrix& m, const IndexSet& cols);
Matrix select_block(const Matrix& m, const IndexSet& rows, const IndexSet& cols);
Vector select_entries(const Vector& v, const IndexSet& idx);

/// {0..size-1} minus `set`; `set` must be sorted.
IndexSet complement(const IndexSet& set, Index size);

/// Throws InvalidDimension unless `set` is sorted, unique and inside [0, size).
void require_index_set(const IndexSet& set, Index size, const char* what);

struct SpectralBounds {
    double lambda_d = 0.0;   // min(lambda_min,+(D), lambda_min,+(D_{S^c}))
    double Lambda_d = 0.0;   // lambda_max(D)
    double Lambda_x = 0.0;   // sqrt(lambda_max(X^T X / n))
};

/// Spectral constants bounding D and X^*X. The D_{S^c} term is dropped when
/// S^c is empty (or D_{S^c} vanishes).
SpectralBounds spectral_bounds(const Matrix& x, const Matrix& d, const IndexSet& support);

}  // namespace slbi
