#pragma once

#include "slbi/model.hpp"
#include "slbi/rng.hpp"

#include <cstdint>

namespace slbi::testing {

inline Matrix random_matrix(std::uint64_t seed, Index rows, Index cols) {
    Rng rng(seed);
    return rng.normal_matrix(rows, cols);
}

inline Vector random_vector(std::uint64_t seed, Index size) {
    Rng rng(seed);
    return rng.normal_vector(size);
}

/// Gaussian X (n x p), D (m x p) and y.
inline Problem random_problem(std::uint64_t seed, Index n, Index p, Index m) {
    Rng rng(seed);
    Matrix x = rng.normal_matrix(n, p);
    Matrix d = rng.normal_matrix(m, p);
    Vector y = rng.normal_vector(n);
    return Problem(std::move(x), std::move(y), std::move(d));
}

/// Rank-deficient matrix: product of (rows x rank) and (rank x cols) factors.
inline Matrix low_rank_matrix(std::uint64_t seed, Index rows, Index cols, Index rank) {
    Rng rng(seed);
    const Matrix a = rng.normal_matrix(rows, rank);
    const Matrix b = rng.normal_matrix(rank, cols);
    return a * b;
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace slbi::testing
