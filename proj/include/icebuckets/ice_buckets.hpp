#ifndef ICEBUCKETS_ICE_BUCKETS_HPP_
#define ICEBUCKETS_ICE_BUCKETS_HPP_

#include <cstdint>
#include <vector>

#include "icebuckets/packed_vector.hpp"
#include "icebuckets/rng.hpp"
#include "icebuckets/scale.hpp"

namespace ice {

// Tight bound on the maximum relative error of any single counter when
// counting up to M with L symbols: the smallest feasible scale epsilon(M).
double ice_max_error_bound(double max_count, std::uint32_t num_symbols);

// Bound on the overall relative error across all counters for a static
// configuration with B buckets and E scales:
//   epsilon(M/B + L-1) + epsilon(M) / (E-1).
double ice_overall_error_bound(double max_count, std::size_t num_buckets,
                               std::uint32_t num_symbols, std::uint32_t num_scales);

struct IceConfig {
    std::uint32_t num_symbols;  // L
    std::uint32_t num_scales;   // E
    std::size_t num_buckets;    // B
    std::size_t bucket_size;    // S
    double eps_step;
    double predicted_bound;
};

// Pick L, E, B, S for a memory budget of total_bits, N flows and capacity M:
// as many symbol bits per counter as the budget (or exact counting) allows,
// leftover bits funding the per-bucket scale indices, and the E that
// minimizes the overall error bound (ties toward smaller E).
IceConfig choose_parameters(std::uint64_t total_bits, std::size_t num_flows,
                            double max_count);

// Same search with the symbol width already fixed; overhead_bits is the pool
// for scale indices.
IceConfig choose_bucket_config(std::uint64_t overhead_bits, std::size_t num_flows,
                               double max_count, std::uint32_t num_symbols);

enum class IceMode {
    dynamic_upscale,  // small initial eps_step, global upscale on exhaustion
    fixed_max,        // eps_step = epsilon(M)/(E-1); never upscales globally
};

// B x S packed symbols with a per-bucket scale index. Flow f lives in bucket
// floor(f/S), slot f mod S, and is decoded with the bucket's scale
// A_{eps_step * w}. Single writer; concurrent readers only while quiescent.
class IceBucketsArray {
public:
    IceBucketsArray(std::size_t num_flows, std::size_t bucket_size,
                    std::uint32_t num_symbols, std::uint32_t num_scales,
                    IceMode mode, double max_count = 0.0);

    void increment(std::size_t flow, RandomSource& rng);
    double estimate(std::size_t flow) const;

    // Remaps every symbol of the bucket one scale up. Throws std::logic_error
    // when the bucket already sits at the top scale (global upscale needed).
    void local_upscale(std::size_t bucket, RandomSource& rng);

    // Locally upscales odd-scale buckets, halves every scale index and doubles
    // eps_step. Afterwards no bucket has a scale index above E/2. Throws
    // CapacityError in fixed_max mode.
    void global_upscale(RandomSource& rng);

    std::size_t num_flows() const { return num_flows_; }
    std::size_t num_buckets() const { return num_buckets_; }
    std::size_t bucket_size() const { return bucket_size_; }
    std::uint32_t num_symbols() const { return num_symbols_; }
    std::uint32_t num_scales() const { return num_scales_; }
    double eps_step() const { return eps_step_; }
    IceMode mode() const { return mode_; }
    std::uint32_t symbol(std::size_t flow) const {
        return static_cast<std::uint32_t>(symbols_.get(flow));
    }
    std::uint32_t bucket_scale(std::size_t bucket) const {
        return static_cast<std::uint32_t>(scale_idx_.get(bucket));
    }
    double max_epsilon() const { return eps_step_ * (num_scales_ - 1); }
    std::uint64_t local_upscale_count() const { return local_upscale_count_; }
    std::uint64_t global_upscale_count() const { return global_upscale_count_; }
    std::size_t memory_bits() const {
        return symbols_.size_in_bits() + scale_idx_.size_in_bits();
    }

private:
    void rebuild_scales();
    void remap_bucket(std::size_t bucket, std::uint32_t from_idx,
                      std::uint32_t to_idx, RandomSource& rng);
    std::size_t bucket_begin(std::size_t bucket) const { return bucket * bucket_size_; }
    std::size_t bucket_end(std::size_t bucket) const;

    PackedVector symbols_;
    PackedVector scale_idx_;
    std::vector<EstimationScale> scales_;  // indices 0..E; E only used transiently
    double eps_step_;
    std::uint32_t num_symbols_;
    std::uint32_t num_scales_;
    std::size_t num_flows_;
    std::size_t bucket_size_;
    std::size_t num_buckets_;
    IceMode mode_;
    std::uint64_t local_upscale_count_ = 0;
    std::uint64_t global_upscale_count_ = 0;
};

}  // namespace ice

#endif  // ICEBUCKETS_ICE_BUCKETS_HPP_
