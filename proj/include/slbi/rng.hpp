#pragma once

#include "slbi/numkernel.hpp"

#include <cstdint>
#include <random>

namespace slbi {

/// splitmix64 finalizer; maps (master, index) pairs to well-spread child seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// std::mt19937_64 with a hand-written Box-Muller normal so draws do not depend
/// on the standard library's distribution implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1), 53-bit resolution, never exactly 0.
    double uniform();
    double normal();

    Matrix normal_matrix(Index rows, Index cols);
    Vector normal_vector(Index size);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace slbi
