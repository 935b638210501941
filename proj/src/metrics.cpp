#include "icebuckets/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "icebuckets/errors.hpp"

namespace ice {

double overall_relative_error(std::span<const double> estimates,
                              std::span<const std::uint64_t> truths) {
    if (estimates.size() != truths.size()) {
        throw std::invalid_argument("overall_relative_error: length mismatch");
    }
    double sum_sq = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        if (truths[i] == 0) {
            continue;
        }
        const double t = static_cast<double>(truths[i]);
        const double rel = (estimates[i] - t) / t;
        sum_sq += rel * rel;
        ++n;
    }
    if (n == 0) {
        throw DataError("overall_relative_error: no flow has a nonzero count");
    }
    return std::sqrt(sum_sq / static_cast<double>(n));
}

void ErrorAccumulator::add_run(std::span<const double> estimates,
                               std::span<const std::uint64_t> truths) {
    if (estimates.size() != truths.size()) {
        throw std::invalid_argument("ErrorAccumulator::add_run: length mismatch");
    }
    for (std::size_t i = 0; i < truths.size(); ++i) {
        if (truths[i] == 0) {
            ++zero_truth_samples_;
            continue;
        }
        const double t = static_cast<double>(truths[i]);
        const double rel = (estimates[i] - t) / t;
        const double sq = rel * rel;
        total_sq_rel_ += sq;
        ++nonzero_samples_;
        Cell& cell = by_value_[truths[i]];
        cell.sum_estimate += estimates[i];
        cell.sum_sq_rel += sq;
        ++cell.samples;
    }
    ++runs_;
}

double ErrorAccumulator::overall() const {
    if (nonzero_samples_ == 0) {
        throw DataError("ErrorAccumulator::overall: no flow has a nonzero count");
    }
    return std::sqrt(total_sq_rel_ / static_cast<double>(nonzero_samples_));
}

std::map<std::uint64_t, PerValueStats> ErrorAccumulator::per_value() const {
    std::map<std::uint64_t, PerValueStats> out;
    for (const auto& [value, cell] : by_value_) {
        PerValueStats s;
        s.samples = cell.samples;
        s.mean_estimate = cell.sum_estimate / static_cast<double>(cell.samples);
        s.rmsre = std::sqrt(cell.sum_sq_rel / static_cast<double>(cell.samples));
        out.emplace(value, s);
    }
    return out;
}

}  // namespace ice
