#include "kljn/rng.hpp"

#include <cmath>

namespace kljn::rng {

// Marsaglia polar method: bit-reproducible across platforms, unlike
// std::normal_distribution whose algorithm is implementation-defined.
double NormalSampler::next() noexcept {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * gen_.next_unit() - 1.0;
        v = 2.0 * gen_.next_unit() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    have_spare_ = true;
    return u * factor;
}

void fill_standard_normal(std::uint64_t seed, std::span<double> out) noexcept {
    NormalSampler sampler(seed);
    for (double& x : out) x = sampler.next();
}

}  // namespace kljn::rng
