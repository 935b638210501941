#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "icebuckets/bench.hpp"
#include "icebuckets/errors.hpp"

using namespace ice;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("scheme names round trip") {
    for (Scheme s : {Scheme::ice, Scheme::ice_no_global, Scheme::cedar,
                     Scheme::disco, Scheme::exact}) {
        CHECK(scheme_from_name(scheme_name(s)) == s);
    }
    CHECK(scheme_from_name("ice_no_global") == Scheme::ice_no_global);
    CHECK_THROWS_AS(scheme_from_name("bogus"), ConfigError);
}

TEST_CASE("exact scheme reports zero error and zero bound") {
    const FlowTrace trace = zipf_trace(500, 20000, 1.0, 4);
    RunSpec spec;
    spec.scheme = Scheme::exact;
    spec.runs = 2;
    const BenchResult r = run_bench(spec, trace);
    CHECK(r.report.overall == 0.0);
    CHECK(r.bound == 0.0);
    CHECK(r.upscales == 0);
}

TEST_CASE("result does not depend on the worker count") {
    const FlowTrace trace = zipf_trace(300, 30000, 1.1, 8);
    RunSpec spec;
    spec.scheme = Scheme::ice;
    spec.runs = 4;
    spec.checkpoints = 3;
    spec.workers = 1;
    const BenchResult serial = run_bench(spec, trace);
    spec.workers = 3;
    const BenchResult parallel = run_bench(spec, trace);
    CHECK(serial.report.overall == parallel.report.overall);
    REQUIRE(serial.report.progress.size() == parallel.report.progress.size());
    for (std::size_t i = 0; i < serial.report.progress.size(); ++i) {
        CHECK(serial.report.progress[i] == parallel.report.progress[i]);
    }
}

TEST_CASE("progress series") {
    const FlowTrace trace = zipf_trace(100, 10000, 1.0, 12);
    RunSpec spec;
    spec.scheme = Scheme::ice;
    spec.runs = 2;
    spec.checkpoints = 5;
    const BenchResult r = run_bench(spec, trace);
    REQUIRE(!r.report.progress.empty());
    CHECK(r.report.progress.front().first == 0);
    CHECK(r.report.progress.front().second == 0.0);
    CHECK(r.report.progress.back().first == trace.total_packets());
    for (std::size_t i = 1; i < r.report.progress.size(); ++i) {
        CHECK(r.report.progress[i].first > r.report.progress[i - 1].first);
    }
}

TEST_CASE("cedar shows an upward error jump when it upscales") {
    // one hot flow blows past the 8-bit exact range, forcing global upscales
    FlowTrace trace;
    trace.num_flows = 4;
    for (int i = 0; i < 5000; ++i) {
        trace.events.push_back(static_cast<std::uint32_t>(i % 4 == 0 ? 1 : 0));
    }
    RunSpec spec;
    spec.scheme = Scheme::cedar;
    spec.runs = 3;
    spec.checkpoints = 50;
    const BenchResult r = run_bench(spec, trace);
    CHECK(r.upscales > 0);
    bool jumped = false;
    for (std::size_t i = 1; i < r.report.progress.size(); ++i) {
        jumped = jumped ||
                 r.report.progress[i].second > r.report.progress[i - 1].second;
    }
    CHECK(jumped);
    CHECK(r.bound ==
          doctest::Approx(epsilon_for_capacity(5000.0, 256)).epsilon(1e-9));
}

TEST_CASE("preconfigured ice never upscales globally") {
    const FlowTrace trace = zipf_trace(1000, 200000, 1.2, 21);
    RunSpec spec;
    spec.scheme = Scheme::ice_no_global;
    spec.runs = 2;
    const BenchResult r = run_bench(spec, trace);
    CHECK(r.upscales == 0);
    CHECK(r.report.overall < r.bound);
}

TEST_CASE("disco sized from the trace total does not saturate") {
    const FlowTrace trace = zipf_trace(50, 50000, 1.0, 33);
    RunSpec spec;
    spec.scheme = Scheme::disco;
    const BenchResult r = run_bench(spec, trace);
    CHECK(r.saturations == 0);
    CHECK(r.bound > 0.0);
}

TEST_CASE("explicit E and S override the automatic configuration") {
    const FlowTrace trace = zipf_trace(64, 5000, 1.0, 2);
    RunSpec spec;
    spec.scheme = Scheme::ice;
    spec.num_scales = 16;
    spec.bucket_size = 8;
    const BenchResult r = run_bench(spec, trace);
    CHECK(r.config.num_scales == 16);
    CHECK(r.config.bucket_size == 8);
    CHECK(r.config.num_buckets == 8);
}

TEST_CASE("input validation") {
    FlowTrace empty;
    RunSpec spec;
    CHECK_THROWS_AS(run_bench(spec, empty), DataError);
    const FlowTrace trace = zipf_trace(10, 100, 1.0, 1);
    spec.runs = 0;
    CHECK_THROWS_AS(run_bench(spec, trace), ConfigError);
    spec.runs = 1;
    spec.bits_per_symbol = 0;
    CHECK_THROWS_AS(run_bench(spec, trace), ConfigError);
}

TEST_CASE("csv emission") {
    const FlowTrace trace = zipf_trace(100, 5000, 1.0, 6);
    RunSpec spec;
    spec.scheme = Scheme::ice;
    spec.runs = 2;
    spec.checkpoints = 4;
    const BenchResult r = run_bench(spec, trace);

    const auto dir = std::filesystem::temp_directory_path() / "icetest_csv";
    std::filesystem::create_directories(dir);
    const std::string overall = (dir / "overall.csv").string();
    const std::string per_value = (dir / "per_value.csv").string();
    const std::string progress = (dir / "progress.csv").string();
    write_overall_csv(overall, spec, r);
    write_per_value_csv(per_value, r);
    write_progress_csv(progress, r);

    const std::string oc = slurp(overall);
    CHECK(oc.rfind("scheme,bits,overall,bound\nice,8,", 0) == 0);
    CHECK(oc.find("\r") == std::string::npos);

    const std::string pc = slurp(per_value);
    CHECK(pc.rfind("true_value,mean_est,rmsre,count\n", 0) == 0);
    // one data row per distinct true count
    const auto rows = static_cast<std::size_t>(
        std::count(pc.begin(), pc.end(), '\n'));
    CHECK(rows == r.report.per_value.size() + 1);

    const std::string gc = slurp(progress);
    CHECK(gc.rfind("packets,overall\n0,0\n", 0) == 0);

    std::filesystem::remove_all(dir);
}
