#pragma once

#include <cstdint>

#include "enn/matrix.hpp"

namespace enn {

/// Deterministic random stream: xoshiro256++ seeded through splitmix64,
/// normal variates via the basic (trigonometric) Box-Muller transform.
/// The generator and the transform are fixed so that a seed produces the
/// same sequence on every platform; each normal draw consumes exactly two
/// raw 64-bit outputs.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_uniform();

    /// Standard normal draw.
    double next_gaussian();

    std::uint64_t seed() const { return seed_; }

    /// Raw 64-bit outputs consumed since construction.
    std::uint64_t position() const { return position_; }

private:
    std::uint64_t state_[4];
    std::uint64_t seed_;
    std::uint64_t position_ = 0;
};

/// rows x cols matrix of i.i.d. N(0,1) draws, filled row by row.
Matrix sample_standard_normal(RngStream& rng, Index rows, Index cols);

/// mean + sqrt(cov_diag) .* z with z ~ N(0,1). Throws NegativeVariance.
Vector sample_gaussian(RngStream& rng, const Vector& mean, const Vector& cov_diag);

} // namespace enn
