#include "icebuckets/traces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <zlib.h>

#include "icebuckets/errors.hpp"

namespace ice {

namespace {

bool has_gz_suffix(const std::string& path) {
    return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

// Reads all lines of a plain or gzip-compressed text file.
std::vector<std::string> read_lines(const std::string& path) {
    std::vector<std::string> lines;
    if (has_gz_suffix(path)) {
        gzFile gz = gzopen(path.c_str(), "rb");
        if (gz == nullptr) {
            throw DataError("cannot open " + path);
        }
        std::string current;
        char buf[1 << 16];
        int n;
        while ((n = gzread(gz, buf, sizeof(buf))) > 0) {
            for (int i = 0; i < n; ++i) {
                if (buf[i] == '\n') {
                    lines.push_back(std::move(current));
                    current.clear();
                } else {
                    current.push_back(buf[i]);
                }
            }
        }
        const bool bad = n < 0;
        gzclose(gz);
        if (bad) {
            throw DataError("gzip read error in " + path);
        }
        if (!current.empty()) {
            lines.push_back(std::move(current));
        }
        return lines;
    }
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path);
    }
    std::string line;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    return lines;
}

void strip_cr(std::string& s) {
    if (!s.empty() && s.back() == '\r') {
        s.pop_back();
    }
}

}  // namespace

FlowTrace load_trace(const std::string& path, TraceFormat format) {
    FlowTrace trace;
    std::unordered_map<std::string, std::uint32_t> ids;
    std::size_t line_no = 0;
    for (std::string& line : read_lines(path)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) {
            continue;
        }
        std::string key;
        std::uint64_t count = 1;
        if (format == TraceFormat::flow_per_line) {
            key = line;
        } else {
            const std::size_t comma = line.rfind(',');
            if (comma == std::string::npos || comma == 0) {
                throw DataError(path + ":" + std::to_string(line_no) +
                                ": expected \"key,count\"");
            }
            key = line.substr(0, comma);
            const std::string count_str = line.substr(comma + 1);
            try {
                std::size_t pos = 0;
                count = std::stoull(count_str, &pos);
                if (pos != count_str.size()) {
                    throw std::invalid_argument(count_str);
                }
            } catch (const std::exception&) {
                throw DataError(path + ":" + std::to_string(line_no) +
                                ": bad count \"" + count_str + "\"");
            }
        }
        auto [it, inserted] =
            ids.emplace(std::move(key), static_cast<std::uint32_t>(ids.size()));
        for (std::uint64_t k = 0; k < count; ++k) {
            trace.events.push_back(it->second);
        }
    }
    trace.num_flows = ids.size();
    return trace;
}

void save_trace(const FlowTrace& trace, const std::string& path, TraceFormat format) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path);
    }
    if (format == TraceFormat::flow_per_line) {
        for (std::uint32_t f : trace.events) {
            out << f << '\n';
        }
    } else {
        // aggregate runs of identical flows would lose ordering; emit totals
        // in first-seen order instead
        std::vector<std::uint64_t> counts(trace.num_flows, 0);
        std::vector<std::uint32_t> order;
        order.reserve(trace.num_flows);
        for (std::uint32_t f : trace.events) {
            if (counts[f]++ == 0) {
                order.push_back(f);
            }
        }
        for (std::uint32_t f : order) {
            out << f << ',' << counts[f] << '\n';
        }
    }
    if (!out) {
        throw DataError("write failure on " + path);
    }
}

FlowTrace zipf_trace(std::size_t num_flows, std::size_t packets, double skew,
                     std::uint64_t seed) {
    if (num_flows == 0) {
        throw ConfigError("zipf_trace: need at least one flow");
    }
    if (skew < 0.0) {
        throw ConfigError("zipf_trace: skew must be >= 0");
    }
    std::vector<double> cdf(num_flows);
    double total = 0.0;
    for (std::size_t r = 1; r <= num_flows; ++r) {
        total += std::pow(static_cast<double>(r), -skew);
        cdf[r - 1] = total;
    }
    FlowTrace trace;
    trace.num_flows = num_flows;
    trace.events.reserve(packets);
    RandomSource rng(seed);
    for (std::size_t i = 0; i < packets; ++i) {
        const double u = rng.next_double() * total;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t rank =
            std::min<std::size_t>(num_flows - 1,
                                  static_cast<std::size_t>(it - cdf.begin()));
        trace.events.push_back(static_cast<std::uint32_t>(rank));
    }
    return trace;
}

void shuffle_flow_ids(FlowTrace& trace, std::uint64_t seed) {
    std::vector<std::uint32_t> perm(trace.num_flows);
    std::iota(perm.begin(), perm.end(), 0u);
    RandomSource rng(seed);
    for (std::size_t i = perm.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
        std::swap(perm[i - 1], perm[j]);
    }
    for (auto& e : trace.events) {
        e = perm[e];
    }
}

std::uint64_t ExactOracle::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

ExactOracle oracle_apply(const FlowTrace& trace) {
    ExactOracle oracle(trace.num_flows);
    oracle.apply(trace.events);
    return oracle;
}

}  // namespace ice
