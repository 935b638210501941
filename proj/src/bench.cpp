#include "icebuckets/bench.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <memory>
#include <stdexcept>
#include <vector>

#include "icebuckets/errors.hpp"
#include "icebuckets/single_scale.hpp"

namespace ice {

Scheme scheme_from_name(const std::string& name) {
    if (name == "ice") return Scheme::ice;
    if (name == "ice-no-global" || name == "ice_no_global") return Scheme::ice_no_global;
    if (name == "cedar") return Scheme::cedar;
    if (name == "disco") return Scheme::disco;
    if (name == "exact") return Scheme::exact;
    throw ConfigError("unknown scheme: " + name);
}

std::string scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::ice: return "ice";
        case Scheme::ice_no_global: return "ice-no-global";
        case Scheme::cedar: return "cedar";
        case Scheme::disco: return "disco";
        case Scheme::exact: return "exact";
    }
    return "?";
}

namespace {

// K evenly spaced packet counts, preceded by a zero-packet checkpoint.
std::vector<std::size_t> checkpoint_positions(std::size_t total, std::uint32_t k) {
    std::vector<std::size_t> out;
    if (k == 0) {
        return out;
    }
    out.push_back(0);
    for (std::uint32_t i = 1; i <= k; ++i) {
        const std::size_t pos = static_cast<std::size_t>(
            static_cast<unsigned long long>(total) * i / k);
        if (pos > out.back()) {
            out.push_back(pos);
        }
    }
    return out;
}

struct TrialResult {
    std::vector<double> estimates;
    std::vector<double> progress_sq;  // squared overall error per checkpoint
    std::uint64_t upscales = 0;
    std::uint64_t local_upscales = 0;
    std::uint64_t saturations = 0;
};

struct ResolvedSpec {
    std::uint32_t num_symbols;
    double max_count;
    double disco_epsilon;
    IceConfig config;
    double bound;
};

ResolvedSpec resolve(const RunSpec& spec, const FlowTrace& trace) {
    ResolvedSpec r{};
    if (spec.bits_per_symbol == 0 || spec.bits_per_symbol > 30) {
        throw ConfigError("bits_per_symbol must be in [1, 30]");
    }
    r.num_symbols = 1u << spec.bits_per_symbol;
    r.max_count = spec.max_count > 0.0 ? spec.max_count
                                       : static_cast<double>(trace.total_packets());
    switch (spec.scheme) {
        case Scheme::ice:
        case Scheme::ice_no_global:
            if (spec.num_scales != 0 && spec.bucket_size != 0) {
                r.config.num_symbols = r.num_symbols;
                r.config.num_scales = spec.num_scales;
                r.config.bucket_size = spec.bucket_size;
                r.config.num_buckets =
                    (trace.num_flows + spec.bucket_size - 1) / spec.bucket_size;
                r.config.eps_step =
                    epsilon_for_capacity(r.max_count, r.num_symbols) /
                    (spec.num_scales - 1);
                r.config.predicted_bound = ice_overall_error_bound(
                    r.max_count, r.config.num_buckets, r.num_symbols, spec.num_scales);
            } else {
                const std::uint64_t overhead = static_cast<std::uint64_t>(
                    std::llround(spec.overhead_bits_per_counter *
                                 static_cast<double>(trace.num_flows)));
                r.config = choose_bucket_config(overhead, trace.num_flows,
                                                r.max_count, r.num_symbols);
            }
            r.bound = r.config.predicted_bound;
            break;
        case Scheme::cedar:
            r.bound = epsilon_for_capacity(r.max_count, r.num_symbols);
            break;
        case Scheme::disco:
            r.disco_epsilon = disco_epsilon_for_capacity(r.max_count, r.num_symbols);
            r.bound = r.disco_epsilon;
            break;
        case Scheme::exact:
            r.bound = 0.0;
            break;
    }
    return r;
}

// Overall error of the current estimates against prefix truths; 0 before any
// packet has arrived.
double prefix_overall_sq(const std::vector<double>& estimates,
                         const std::vector<std::uint64_t>& prefix_counts) {
    double sum_sq = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < prefix_counts.size(); ++i) {
        if (prefix_counts[i] == 0) {
            continue;
        }
        const double t = static_cast<double>(prefix_counts[i]);
        const double rel = (estimates[i] - t) / t;
        sum_sq += rel * rel;
        ++n;
    }
    return n == 0 ? 0.0 : sum_sq / static_cast<double>(n);
}

template <typename EstimateFn>
std::vector<double> all_estimates(std::size_t num_flows, EstimateFn&& fn) {
    std::vector<double> est(num_flows);
    for (std::size_t f = 0; f < num_flows; ++f) {
        est[f] = fn(f);
    }
    return est;
}

TrialResult run_trial(const RunSpec& spec, const ResolvedSpec& resolved,
                      const FlowTrace& trace, std::uint32_t trial) {
    TrialResult out;
    RandomSource rng = RandomSource(spec.seed).split(trial);

    std::unique_ptr<IceBucketsArray> ice_array;
    std::unique_ptr<SingleScaleArray> single_array;
    std::vector<std::uint64_t> exact_counts;
    switch (spec.scheme) {
        case Scheme::ice:
            ice_array = std::make_unique<IceBucketsArray>(
                trace.num_flows, resolved.config.bucket_size, resolved.num_symbols,
                resolved.config.num_scales, IceMode::dynamic_upscale);
            break;
        case Scheme::ice_no_global:
            ice_array = std::make_unique<IceBucketsArray>(
                trace.num_flows, resolved.config.bucket_size, resolved.num_symbols,
                resolved.config.num_scales, IceMode::fixed_max, resolved.max_count);
            break;
        case Scheme::cedar:
            single_array = std::make_unique<SingleScaleArray>(
                trace.num_flows, resolved.num_symbols, SinglePolicy::cedar_upscaling);
            break;
        case Scheme::disco:
            single_array = std::make_unique<SingleScaleArray>(
                trace.num_flows, resolved.num_symbols, SinglePolicy::disco_fixed,
                resolved.disco_epsilon);
            break;
        case Scheme::exact:
            exact_counts.assign(trace.num_flows, 0);
            break;
    }

    auto estimate_all = [&]() {
        switch (spec.scheme) {
            case Scheme::ice:
            case Scheme::ice_no_global:
                return all_estimates(trace.num_flows,
                                     [&](std::size_t f) { return ice_array->estimate(f); });
            case Scheme::cedar:
            case Scheme::disco:
                return all_estimates(trace.num_flows, [&](std::size_t f) {
                    return single_array->estimate(f);
                });
            default:
                return all_estimates(trace.num_flows, [&](std::size_t f) {
                    return static_cast<double>(exact_counts[f]);
                });
        }
    };

    std::vector<std::uint64_t> prefix_counts(trace.num_flows, 0);
    const std::vector<std::size_t> checkpoints =
        checkpoint_positions(trace.total_packets(), spec.checkpoints);
    std::size_t next_cp = 0;
    if (next_cp < checkpoints.size() && checkpoints[next_cp] == 0) {
        out.progress_sq.push_back(0.0);
        ++next_cp;
    }

    std::size_t processed = 0;
    for (std::uint32_t f : trace.events) {
        switch (spec.scheme) {
            case Scheme::ice:
            case Scheme::ice_no_global:
                ice_array->increment(f, rng);
                break;
            case Scheme::cedar:
            case Scheme::disco:
                single_array->increment(f, rng);
                break;
            case Scheme::exact:
                ++exact_counts[f];
                break;
        }
        ++prefix_counts[f];
        ++processed;
        if (next_cp < checkpoints.size() && processed == checkpoints[next_cp]) {
            const auto est = estimate_all();
            out.progress_sq.push_back(prefix_overall_sq(est, prefix_counts));
            ++next_cp;
        }
    }

    out.estimates = estimate_all();
    if (ice_array) {
        out.upscales = ice_array->global_upscale_count();
        out.local_upscales = ice_array->local_upscale_count();
    } else if (single_array) {
        out.upscales = single_array->upscale_count();
        out.saturations = single_array->saturation_count();
    }
    return out;
}

}  // namespace

BenchResult run_bench(const RunSpec& spec, const FlowTrace& trace) {
    if (trace.num_flows == 0 || trace.events.empty()) {
        throw DataError("run_bench: empty trace");
    }
    if (spec.runs == 0) {
        throw ConfigError("run_bench: need at least one run");
    }
    const ResolvedSpec resolved = resolve(spec, trace);
    const ExactOracle oracle = oracle_apply(trace);

    BenchResult result;
    result.bound = resolved.bound;
    result.config = resolved.config;

    ErrorAccumulator acc;
    std::vector<double> progress_sq_sum;

    auto consume = [&](const TrialResult& t, std::uint32_t trial) {
        acc.add_run(t.estimates, oracle.counts);
        if (progress_sq_sum.empty()) {
            progress_sq_sum.assign(t.progress_sq.size(), 0.0);
        }
        for (std::size_t i = 0; i < t.progress_sq.size(); ++i) {
            progress_sq_sum[i] += t.progress_sq[i];
        }
        if (trial == 0) {
            result.upscales = t.upscales;
            result.local_upscales = t.local_upscales;
            result.saturations = t.saturations;
        }
    };

    const std::uint32_t workers = std::max<std::uint32_t>(1, spec.workers);
    if (workers == 1) {
        for (std::uint32_t r = 0; r < spec.runs; ++r) {
            consume(run_trial(spec, resolved, trace, r), r);
        }
    } else {
        // waves of `workers` trials; reduction stays in trial order
        for (std::uint32_t base = 0; base < spec.runs; base += workers) {
            const std::uint32_t count = std::min(workers, spec.runs - base);
            std::vector<std::future<TrialResult>> wave;
            wave.reserve(count);
            for (std::uint32_t k = 0; k < count; ++k) {
                wave.push_back(std::async(std::launch::async, run_trial, std::cref(spec),
                                          std::cref(resolved), std::cref(trace),
                                          base + k));
            }
            for (std::uint32_t k = 0; k < count; ++k) {
                consume(wave[k].get(), base + k);
            }
        }
    }

    result.report.overall = acc.overall();
    result.report.zero_truth_flows = acc.zero_truth_samples() / spec.runs;
    result.report.per_value = acc.per_value();
    if (spec.checkpoints > 0) {
        const auto positions =
            checkpoint_positions(trace.total_packets(), spec.checkpoints);
        result.report.progress.reserve(positions.size());
        for (std::size_t i = 0; i < positions.size(); ++i) {
            result.report.progress.emplace_back(
                positions[i], std::sqrt(progress_sq_sum[i] / spec.runs));
        }
    }
    return result;
}

namespace {

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // LF endings everywhere
    if (!out) {
        throw DataError("cannot write " + path);
    }
    out << std::setprecision(10);
    return out;
}

}  // namespace

void write_overall_csv(const std::string& path, const RunSpec& spec,
                       const BenchResult& result) {
    auto out = open_csv(path);
    out << "scheme,bits,overall,bound\n";
    out << scheme_name(spec.scheme) << ',' << spec.bits_per_symbol << ','
        << result.report.overall << ',' << result.bound << '\n';
}

void write_per_value_csv(const std::string& path, const BenchResult& result) {
    auto out = open_csv(path);
    out << "true_value,mean_est,rmsre,count\n";
    for (const auto& [value, stats] : result.report.per_value) {
        out << value << ',' << stats.mean_estimate << ',' << stats.rmsre << ','
            << stats.samples << '\n';
    }
}

void write_progress_csv(const std::string& path, const BenchResult& result) {
    auto out = open_csv(path);
    out << "packets,overall\n";
    for (const auto& [packets, overall] : result.report.progress) {
        out << packets << ',' << overall << '\n';
    }
}

}  // namespace ice
