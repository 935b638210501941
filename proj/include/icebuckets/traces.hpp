#ifndef ICEBUCKETS_TRACES_HPP_
#define ICEBUCKETS_TRACES_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "icebuckets/rng.hpp"

namespace ice {

// An ordered stream of packet events; each entry is a dense flow index.
struct FlowTrace {
    std::vector<std::uint32_t> events;
    std::size_t num_flows = 0;

    std::size_t total_packets() const { return events.size(); }
};

enum class TraceFormat {
    flow_per_line,     // one flow key per line
    flow_count_pairs,  // "key,count" per line, expanded in file order
};

// Reads a trace file (gzip-compressed when the path ends in .gz). Flow keys
// are opaque strings, assigned dense ids in first-seen order. Throws
// DataError with a line number on malformed input. An empty file is a valid
// empty trace.
FlowTrace load_trace(const std::string& path, TraceFormat format);

// Synthetic heavy-tailed workload: each packet's flow drawn i.i.d. with
// P(rank r) proportional to r^-skew, rank 1 = flow 0. skew 0 is uniform.
FlowTrace zipf_trace(std::size_t num_flows, std::size_t packets, double skew,
                     std::uint64_t seed);

// Applies a seeded permutation to the flow id space, decorrelating first-seen
// order from bucket placement. Off by default everywhere.
void shuffle_flow_ids(FlowTrace& trace, std::uint64_t seed);

// Writes a trace back to disk in either text format (plain, never gzip).
void save_trace(const FlowTrace& trace, const std::string& path, TraceFormat format);

// Ground-truth per-flow packet counts.
struct ExactOracle {
    std::vector<std::uint64_t> counts;

    explicit ExactOracle(std::size_t num_flows) : counts(num_flows, 0) {}

    void apply(std::span<const std::uint32_t> events) {
        for (std::uint32_t f : events) {
            ++counts[f];
        }
    }

    std::uint64_t total() const;
};

ExactOracle oracle_apply(const FlowTrace& trace);

}  // namespace ice

#endif  // ICEBUCKETS_TRACES_HPP_
