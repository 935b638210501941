#ifndef ICEBUCKETS_BENCH_HPP_
#define ICEBUCKETS_BENCH_HPP_

#include <cstdint>
#include <string>

#include "icebuckets/ice_buckets.hpp"
#include "icebuckets/metrics.hpp"
#include "icebuckets/traces.hpp"

namespace ice {

enum class Scheme {
    ice,            // dynamic ICE-Buckets with global upscale
    ice_no_global,  // fixed_max ICE-Buckets, eps_step preconfigured for M
    cedar,          // single-scale optimal function, global upscales
    disco,          // single-scale DISCO, fixed scale chosen from M
    exact,          // full-width reference counters
};

Scheme scheme_from_name(const std::string& name);
std::string scheme_name(Scheme scheme);

struct RunSpec {
    Scheme scheme = Scheme::ice;
    std::uint32_t bits_per_symbol = 8;          // log2 L
    double overhead_bits_per_counter = 0.5;     // funds scale indices (ICE)
    std::uint32_t num_scales = 0;               // E; 0 = choose automatically
    std::uint32_t bucket_size = 0;              // S; 0 = choose automatically
    double max_count = 0.0;                     // M; 0 = trace packet total
    std::uint64_t seed = 1;
    std::uint32_t runs = 1;
    std::uint32_t checkpoints = 0;              // progress points; 0 = none
    std::uint32_t workers = 1;
};

struct BenchResult {
    ErrorReport report;
    double bound = 0.0;        // the scheme's analytic overall-error bound
    IceConfig config{};        // resolved ICE configuration (ICE schemes only)
    std::uint64_t upscales = 0;         // global upscales (cedar / ice)
    std::uint64_t local_upscales = 0;   // ICE only
    std::uint64_t saturations = 0;      // DISCO only
};

// Replays the trace runs times with per-trial seeds seed ^ trial and
// aggregates errors against the exact oracle. Trials run on up to
// spec.workers threads; aggregation order is by trial index, so the result
// does not depend on the worker count.
BenchResult run_bench(const RunSpec& spec, const FlowTrace& trace);

// CSV emission; UTF-8, LF line endings, headers included.
void write_overall_csv(const std::string& path, const RunSpec& spec,
                       const BenchResult& result);
void write_per_value_csv(const std::string& path, const BenchResult& result);
void write_progress_csv(const std::string& path, const BenchResult& result);

}  // namespace ice

#endif  // ICEBUCKETS_BENCH_HPP_
