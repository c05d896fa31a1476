#pragma once

#include <cstdint>

namespace pure {

// Counter-based 64-bit generator (splitmix64). Each draw advances the counter
// by the golden-ratio constant and mixes it, so streams are reproducible from
// the seed alone and cheap to re-derive in other languages. The exact step and
// the derived distributions (unit, gaussian, poisson) are documented in the
// README so ports can match streams bit-for-bit.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : counter_(seed) {}

    std::uint64_t next_u64() {
        counter_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = counter_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1]; safe as a log argument.
    double next_open_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

    // Inclusive integer range.
    int next_int(int lo, int hi) {
        const int span = hi - lo + 1;
        int k = static_cast<int>(next_unit() * span);
        if (k >= span) {
            k = span - 1;
        }
        return lo + k;
    }

    // Box-Muller; consumes exactly two draws per sample.
    double next_gaussian(double sigma);

    // Knuth inversion; suitable for the small means used here. Consumes no
    // draws when mean == 0.
    int next_poisson(double mean);

    // Child seed for stream index k, so batches can partition seed space.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

private:
    std::uint64_t counter_;
};

}  // namespace pure
