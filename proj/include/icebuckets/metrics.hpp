#ifndef ICEBUCKETS_METRICS_HPP_
#define ICEBUCKETS_METRICS_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace ice {

// Root mean square relative error over the flows with a nonzero true count.
// Throws DataError when no flow has a nonzero truth.
double overall_relative_error(std::span<const double> estimates,
                              std::span<const std::uint64_t> truths);

struct PerValueStats {
    double mean_estimate = 0.0;
    double rmsre = 0.0;
    std::uint64_t samples = 0;
};

struct ErrorReport {
    double overall = 0.0;
    std::size_t zero_truth_flows = 0;
    std::map<std::uint64_t, PerValueStats> per_value;
    std::vector<std::pair<std::uint64_t, double>> progress;  // (packets, overall)
};

// Accumulates per-flow squared relative errors across runs; squared errors
// are averaged before the final root, matching the overall-error definition.
class ErrorAccumulator {
public:
    // One run's estimates against its truths. Zero-truth flows are counted
    // separately and excluded from the error.
    void add_run(std::span<const double> estimates,
                 std::span<const std::uint64_t> truths);

    double overall() const;
    std::map<std::uint64_t, PerValueStats> per_value() const;
    std::size_t zero_truth_samples() const { return zero_truth_samples_; }
    std::size_t runs() const { return runs_; }

private:
    struct Cell {
        double sum_estimate = 0.0;
        double sum_sq_rel = 0.0;
        std::uint64_t samples = 0;
    };

    std::map<std::uint64_t, Cell> by_value_;
    double total_sq_rel_ = 0.0;
    std::uint64_t nonzero_samples_ = 0;
    std::size_t zero_truth_samples_ = 0;
    std::size_t runs_ = 0;
};

}  // namespace ice

#endif  // ICEBUCKETS_METRICS_HPP_
