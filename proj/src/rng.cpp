#include "pure/rng.hpp"

#include <cmath>

namespace pure {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double CounterRng::next_gaussian(double sigma) {
    const double u1 = next_open_unit();
    const double u2 = next_unit();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

int CounterRng::next_poisson(double mean) {
    if (mean <= 0.0) {
        return 0;
    }
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= next_unit();
    } while (p > limit);
    return k - 1;
}

std::uint64_t CounterRng::derive(std::uint64_t seed, std::uint64_t index) {
    CounterRng child(seed + 0xD1B54A32D192ED03ull * (index + 1));
    return child.next_u64();
}

}  // namespace pure
