#include "enn/rng.hpp"

#include <cmath>

#include "enn/errors.hpp"

namespace enn {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    ++position_;
    return result;
}

double RngStream::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
    // u1 shifted into (0, 1] so log never sees zero.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * M_PI * u2);
}

Matrix sample_standard_normal(RngStream& rng, Index rows, Index cols) {
    Matrix out(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            out(i, j) = rng.next_gaussian();
    return out;
}

Vector sample_gaussian(RngStream& rng, const Vector& mean, const Vector& cov_diag) {
    if (mean.size() != cov_diag.size())
        throw DimensionMismatch("sample_gaussian: mean and cov_diag length differ");
    Vector out(mean.size());
    for (Index i = 0; i < mean.size(); ++i) {
        const double var = cov_diag(i);
        if (var < 0.0)
            throw NegativeVariance("sample_gaussian: negative variance at index " +
                                   std::to_string(i));
        out(i) = mean(i) + std::sqrt(var) * rng.next_gaussian();
    }
    return out;
}

} // namespace enn
