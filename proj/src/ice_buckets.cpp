#include "icebuckets/ice_buckets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "icebuckets/errors.hpp"

namespace ice {

double ice_max_error_bound(double max_count, std::uint32_t num_symbols) {
    return epsilon_for_capacity(max_count, num_symbols);
}

double ice_overall_error_bound(double max_count, std::size_t num_buckets,
                               std::uint32_t num_symbols, std::uint32_t num_scales) {
    if (num_buckets < 1 || num_scales < 2) {
        throw ConfigError("ice_overall_error_bound: require B >= 1, E >= 2");
    }
    const double per_bucket =
        max_count / static_cast<double>(num_buckets) + (num_symbols - 1);
    return epsilon_for_capacity(per_bucket, num_symbols) +
           epsilon_for_capacity(max_count, num_symbols) / (num_scales - 1);
}

IceConfig choose_bucket_config(std::uint64_t overhead_bits, std::size_t num_flows,
                               double max_count, std::uint32_t num_symbols) {
    if (num_flows == 0) {
        throw ConfigError("choose_bucket_config: need at least one flow");
    }
    IceConfig best{};
    best.num_symbols = num_symbols;
    best.predicted_bound = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::uint32_t log2e = 1; log2e < 32; ++log2e) {
        const double e_val = std::ldexp(1.0, static_cast<int>(log2e));
        if (e_val > max_count) {
            break;  // more scales than distinct capacities can use
        }
        const std::size_t buckets = static_cast<std::size_t>(overhead_bits / log2e);
        if (buckets < 1) {
            break;
        }
        const std::uint32_t num_scales = 1u << log2e;
        const double bound =
            ice_overall_error_bound(max_count, buckets, num_symbols, num_scales);
        if (bound < best.predicted_bound) {
            best.num_scales = num_scales;
            best.num_buckets = buckets;
            best.predicted_bound = bound;
            found = true;
        }
    }
    if (!found) {
        // no overhead bits: single bucket, one scale index worth of range
        best.num_scales = 2;
        best.num_buckets = 1;
        best.predicted_bound =
            ice_overall_error_bound(max_count, 1, num_symbols, 2);
    }
    best.bucket_size = std::max<std::size_t>(1, num_flows / best.num_buckets);
    // B buckets of that size must cover all flows; report the actual count,
    // which may exceed the budgeted B by the rounding slack
    best.num_buckets = (num_flows + best.bucket_size - 1) / best.bucket_size;
    best.predicted_bound = ice_overall_error_bound(max_count, best.num_buckets,
                                                   num_symbols, best.num_scales);
    best.eps_step =
        epsilon_for_capacity(max_count, num_symbols) / (best.num_scales - 1);
    return best;
}

IceConfig choose_parameters(std::uint64_t total_bits, std::size_t num_flows,
                            double max_count) {
    if (num_flows == 0 || total_bits < num_flows) {
        throw ConfigError("choose_parameters: need at least one bit per counter");
    }
    std::uint64_t log2l = total_bits / num_flows;
    // never give a counter more bits than exact counting needs
    const std::uint64_t exact_bits = static_cast<std::uint64_t>(
        std::ceil(std::log2(std::floor(max_count) + 1.0)));
    log2l = std::min(log2l, std::max<std::uint64_t>(exact_bits, 1));
    log2l = std::min<std::uint64_t>(log2l, 31);
    const std::uint32_t num_symbols = 1u << log2l;
    const std::uint64_t leftover = total_bits - num_flows * log2l;
    return choose_bucket_config(leftover, num_flows, max_count, num_symbols);
}

IceBucketsArray::IceBucketsArray(std::size_t num_flows, std::size_t bucket_size,
                                 std::uint32_t num_symbols, std::uint32_t num_scales,
                                 IceMode mode, double max_count)
    : num_symbols_(num_symbols),
      num_scales_(num_scales),
      num_flows_(num_flows),
      bucket_size_(bucket_size),
      mode_(mode) {
    if (num_flows == 0 || bucket_size == 0) {
        throw ConfigError("IceBucketsArray: need at least one flow and slot");
    }
    if (num_symbols < 2 || !std::has_single_bit(num_symbols)) {
        throw ConfigError("IceBucketsArray: L must be a power of two >= 2");
    }
    if (num_scales < 2 || !std::has_single_bit(num_scales)) {
        throw ConfigError("IceBucketsArray: E must be a power of two >= 2");
    }
    num_buckets_ = (num_flows + bucket_size - 1) / bucket_size;
    symbols_ = PackedVector(num_flows,
                            static_cast<std::uint32_t>(std::bit_width(num_symbols - 1)));
    scale_idx_ = PackedVector(num_buckets_,
                              static_cast<std::uint32_t>(std::bit_width(num_scales - 1)));
    if (mode == IceMode::dynamic_upscale) {
        // first local upscale doubles a bucket's capacity
        eps_step_ = epsilon_for_capacity(2.0 * (num_symbols - 1), num_symbols);
    } else {
        if (max_count <= 0.0) {
            throw ConfigError("IceBucketsArray: fixed_max mode needs M > 0");
        }
        eps_step_ = epsilon_for_capacity(max_count, num_symbols) / (num_scales - 1);
    }
    rebuild_scales();
}

std::size_t IceBucketsArray::bucket_end(std::size_t bucket) const {
    return std::min(num_flows_, (bucket + 1) * bucket_size_);
}

void IceBucketsArray::rebuild_scales() {
    scales_.clear();
    scales_.reserve(num_scales_ + 1);
    for (std::uint32_t w = 0; w <= num_scales_; ++w) {
        scales_.emplace_back(eps_step_ * w, num_symbols_);
    }
}

void IceBucketsArray::remap_bucket(std::size_t bucket, std::uint32_t from_idx,
                                   std::uint32_t to_idx, RandomSource& rng) {
    const EstimationScale& from = scales_[from_idx];
    const EstimationScale& to = scales_[to_idx];
    for (std::size_t f = bucket_begin(bucket); f < bucket_end(bucket); ++f) {
        const std::uint32_t l = static_cast<std::uint32_t>(symbols_.get(f));
        if (l == 0) {
            continue;
        }
        const UpscaleTarget t = upscale_target_symbol(from, to, l);
        const std::uint32_t mapped =
            (rng.next_double() < t.promote_prob) ? t.symbol + 1 : t.symbol;
        symbols_.set(f, mapped);
    }
}

void IceBucketsArray::local_upscale(std::size_t bucket, RandomSource& rng) {
    const std::uint32_t w = static_cast<std::uint32_t>(scale_idx_.get(bucket));
    if (w + 1 >= num_scales_) {
        throw std::logic_error("local_upscale: bucket at top scale, global upscale needed");
    }
    remap_bucket(bucket, w, w + 1, rng);
    scale_idx_.set(bucket, w + 1);
    ++local_upscale_count_;
}

void IceBucketsArray::global_upscale(RandomSource& rng) {
    if (mode_ == IceMode::fixed_max) {
        throw CapacityError("global_upscale: disabled in fixed_max mode");
    }
    for (std::size_t b = 0; b < num_buckets_; ++b) {
        std::uint32_t w = static_cast<std::uint32_t>(scale_idx_.get(b));
        if (w % 2 == 1) {
            remap_bucket(b, w, w + 1, rng);  // w+1 may transiently equal E
            ++w;
            ++local_upscale_count_;
        }
        scale_idx_.set(b, w / 2);
    }
    eps_step_ *= 2.0;
    rebuild_scales();
    ++global_upscale_count_;
}

void IceBucketsArray::increment(std::size_t flow, RandomSource& rng) {
    const std::size_t bucket = flow / bucket_size_;
    std::uint32_t l = static_cast<std::uint32_t>(symbols_.get(flow));
    while (l == num_symbols_ - 1) {
        if (mode_ == IceMode::fixed_max && eps_step_ == 0.0) {
            // M fit the exact scale, so upscaling cannot add capacity
            throw CapacityError("increment: configured capacity exhausted");
        }
        const std::uint32_t w = static_cast<std::uint32_t>(scale_idx_.get(bucket));
        if (w + 1 < num_scales_) {
            local_upscale(bucket, rng);
        } else {
            global_upscale(rng);  // throws CapacityError in fixed_max mode
        }
        l = static_cast<std::uint32_t>(symbols_.get(flow));
    }
    const std::uint32_t w = static_cast<std::uint32_t>(scale_idx_.get(bucket));
    const double d = scales_[w].step(l);
    if (rng.next_double() < 1.0 / d) {
        symbols_.set(flow, l + 1);
    }
}

double IceBucketsArray::estimate(std::size_t flow) const {
    const std::size_t bucket = flow / bucket_size_;
    return scales_[scale_idx_.get(bucket)].value(
        static_cast<std::uint32_t>(symbols_.get(flow)));
}

}  // namespace ice
