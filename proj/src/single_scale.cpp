#include "icebuckets/single_scale.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "icebuckets/errors.hpp"

namespace ice {

std::uint32_t increment_symbol(const EstimationScale& scale, std::uint32_t symbol,
                               RandomSource& rng) {
    if (symbol + 1 >= scale.num_symbols()) {
        throw std::overflow_error("increment_symbol: top symbol, upscale needed");
    }
    const double d = scale.step(symbol);
    if (rng.next_double() < 1.0 / d) {
        return symbol + 1;
    }
    return symbol;
}

std::uint32_t decrement_symbol(const EstimationScale& scale, std::uint32_t symbol,
                               RandomSource& rng) {
    if (symbol == 0) {
        throw std::underflow_error("decrement_symbol: symbol has no predecessor");
    }
    const double d = scale.step(symbol - 1);
    if (rng.next_double() < 1.0 / d) {
        return symbol - 1;
    }
    return symbol;
}

std::vector<double> disco_values(double epsilon, std::uint32_t num_symbols) {
    if (epsilon < 0.0) {
        throw std::domain_error("disco_values: epsilon must be >= 0");
    }
    if (num_symbols < 2) {
        throw std::invalid_argument("disco_values: need at least 2 symbols");
    }
    std::vector<double> v(num_symbols);
    v[0] = 0.0;
    const double growth = 1.0 + 2.0 * epsilon * epsilon;
    for (std::uint32_t l = 1; l < num_symbols; ++l) {
        v[l] = growth * v[l - 1] + 1.0;
    }
    return v;
}

double disco_capacity(double epsilon, std::uint32_t num_symbols) {
    if (epsilon == 0.0) {
        return static_cast<double>(num_symbols - 1);
    }
    const double e2 = epsilon * epsilon;
    const double t = static_cast<double>(num_symbols - 1) * std::log1p(2.0 * e2);
    if (t > 700.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::expm1(t) / (2.0 * e2);
}

double disco_epsilon_for_capacity(double max_count, std::uint32_t num_symbols) {
    if (max_count <= static_cast<double>(num_symbols - 1)) {
        return 0.0;
    }
    double lo = 0.0;
    double hi = 1.0;
    while (disco_capacity(hi, num_symbols) < max_count) {
        hi *= 2.0;
    }
    for (int i = 0; i < 200 && lo < hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (disco_capacity(mid, num_symbols) < max_count) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

SingleScaleArray::SingleScaleArray(std::size_t num_flows, std::uint32_t num_symbols,
                                   SinglePolicy policy, double epsilon)
    : num_symbols_(num_symbols), policy_(policy), epsilon_(epsilon) {
    if (num_flows == 0) {
        throw ConfigError("SingleScaleArray: need at least one flow");
    }
    if (num_symbols < 2 || !std::has_single_bit(num_symbols)) {
        throw ConfigError("SingleScaleArray: L must be a power of two >= 2");
    }
    symbols_ = PackedVector(num_flows, static_cast<std::uint32_t>(std::bit_width(num_symbols - 1)));
    if (policy == SinglePolicy::cedar_upscaling) {
        epsilon_ = 0.0;  // starts exact regardless of the argument
        const EstimationScale s(0.0, num_symbols);
        values_.assign(s.values().begin(), s.values().end());
    } else {
        values_ = disco_values(epsilon, num_symbols);
    }
}

void SingleScaleArray::increment(std::size_t flow, RandomSource& rng) {
    std::uint32_t l = static_cast<std::uint32_t>(symbols_.get(flow));
    while (l == num_symbols_ - 1) {
        if (policy_ == SinglePolicy::disco_fixed) {
            ++saturation_count_;  // configured M was too small; count and drop
            return;
        }
        global_upscale(rng);
        l = static_cast<std::uint32_t>(symbols_.get(flow));
    }
    const double d = values_[l + 1] - values_[l];
    if (rng.next_double() < 1.0 / d) {
        symbols_.set(flow, l + 1);
    }
}

double SingleScaleArray::estimate(std::size_t flow) const {
    return values_[symbols_.get(flow)];
}

void SingleScaleArray::global_upscale(RandomSource& rng) {
    // Capacity-doubling schedule: the next scale holds twice the current
    // maximum representable value.
    const EstimationScale old_scale(epsilon_, num_symbols_);
    const double new_eps = epsilon_for_capacity(2.0 * values_.back(), num_symbols_);
    const EstimationScale new_scale(new_eps, num_symbols_);
    for (std::size_t f = 0; f < symbols_.size(); ++f) {
        const std::uint32_t l = static_cast<std::uint32_t>(symbols_.get(f));
        if (l == 0) {
            continue;
        }
        const UpscaleTarget t = upscale_target_symbol(old_scale, new_scale, l);
        const std::uint32_t mapped =
            (rng.next_double() < t.promote_prob) ? t.symbol + 1 : t.symbol;
        symbols_.set(f, mapped);
    }
    epsilon_ = new_eps;
    values_.assign(new_scale.values().begin(), new_scale.values().end());
    ++upscale_count_;
}

}  // namespace ice
