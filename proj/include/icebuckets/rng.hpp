#ifndef ICEBUCKETS_RNG_HPP_
#define ICEBUCKETS_RNG_HPP_

#include <cstdint>

namespace ice {

// Seedable xoshiro256++ generator, state initialized with splitmix64.
// The same seed produces the same uniform [0,1) sequence on every platform.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed) {
        std::uint64_t x = seed;
        for (auto& s : state_) {
            // splitmix64
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            s = z ^ (z >> 31);
        }
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Independent stream for trial i; derived as seed ^ i.
    RandomSource split(std::uint64_t stream) const {
        return RandomSource(seed_ ^ stream);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t seed_;
    std::uint64_t state_[4];
};

}  // namespace ice

#endif  // ICEBUCKETS_RNG_HPP_
