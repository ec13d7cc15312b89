#include "slbi/rng.hpp"

#include <cmath>
#include <numbers>

namespace slbi {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t x = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double Rng::uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

// Filled row by row; the draw order is part of the reproducibility contract.
Matrix Rng::normal_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = normal();
    return m;
}

Vector Rng::normal_vector(Index size) {
    Vector v(size);
    for (Index i = 0; i < size; ++i) v(i) = normal();
    return v;
}

}  // namespace slbi
