#ifndef ICEBUCKETS_SINGLE_SCALE_HPP_
#define ICEBUCKETS_SINGLE_SCALE_HPP_

#include <cstdint>
#include <vector>

#include "icebuckets/packed_vector.hpp"
#include "icebuckets/rng.hpp"
#include "icebuckets/scale.hpp"

namespace ice {

// One probabilistic increment: moves l to l+1 with probability 1/D(l).
// The expected estimation value grows by exactly 1 per call. Throws
// std::overflow_error at the top symbol; the caller decides how to upscale.
std::uint32_t increment_symbol(const EstimationScale& scale, std::uint32_t symbol,
                               RandomSource& rng);

// One probabilistic decrement: moves l to l-1 with probability 1/D(l-1).
// Throws std::underflow_error at symbol 0.
std::uint32_t decrement_symbol(const EstimationScale& scale, std::uint32_t symbol,
                               RandomSource& rng);

// DISCO's estimation function: ((1+2 eps^2)^l - 1) / (2 eps^2); the identity
// for eps = 0. Same relative error as the optimal function, capacity smaller
// by a factor of 1 + eps^2.
std::vector<double> disco_values(double epsilon, std::uint32_t num_symbols);

double disco_capacity(double epsilon, std::uint32_t num_symbols);

// eps solving disco_capacity(eps, L) = M; zero when M <= L-1.
double disco_epsilon_for_capacity(double max_count, std::uint32_t num_symbols);

enum class SinglePolicy {
    cedar_upscaling,  // optimal function, global upscale when a symbol tops out
    disco_fixed,      // DISCO function at a fixed scale, saturates at the top
};

// A flat array of N packed symbols decoded through one global scale.
// Models the CEDAR and DISCO baselines.
class SingleScaleArray {
public:
    // For disco_fixed, epsilon is the fixed scale (use
    // disco_epsilon_for_capacity to derive it from a known M).
    // cedar_upscaling starts exact (epsilon 0) and upscales on demand,
    // doubling the counting capacity each time.
    SingleScaleArray(std::size_t num_flows, std::uint32_t num_symbols,
                     SinglePolicy policy, double epsilon = 0.0);

    void increment(std::size_t flow, RandomSource& rng);
    double estimate(std::size_t flow) const;

    std::size_t num_flows() const { return symbols_.size(); }
    std::uint32_t num_symbols() const { return num_symbols_; }
    SinglePolicy policy() const { return policy_; }
    double epsilon() const { return epsilon_; }
    std::uint32_t symbol(std::size_t flow) const {
        return static_cast<std::uint32_t>(symbols_.get(flow));
    }
    std::uint64_t upscale_count() const { return upscale_count_; }
    std::uint64_t saturation_count() const { return saturation_count_; }
    double scale_capacity() const { return values_.back(); }
    std::size_t memory_bits() const { return symbols_.size_in_bits(); }

private:
    void global_upscale(RandomSource& rng);

    PackedVector symbols_;
    std::uint32_t num_symbols_;
    SinglePolicy policy_;
    double epsilon_;
    std::vector<double> values_;  // decode table (A for cedar, DISCO for disco)
    std::uint64_t upscale_count_ = 0;
    std::uint64_t saturation_count_ = 0;
};

}  // namespace ice

#endif  // ICEBUCKETS_SINGLE_SCALE_HPP_
