#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "icebuckets/errors.hpp"
#include "icebuckets/traces.hpp"

using namespace ice;

namespace {

class TempFile {
public:
    explicit TempFile(const std::string& name)
        : path_((std::filesystem::temp_directory_path() / name).string()) {}
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }
    void write(const std::string& content) const {
        std::ofstream out(path_, std::ios::binary);
        out << content;
    }
    void write_gz(const std::string& content) const {
        gzFile gz = gzopen(path_.c_str(), "wb");
        REQUIRE(gz != nullptr);
        gzwrite(gz, content.data(), static_cast<unsigned>(content.size()));
        gzclose(gz);
    }

private:
    std::string path_;
};

}  // namespace

TEST_CASE("load_trace flow_per_line") {
    TempFile f("icetest_lines.txt");
    f.write("a\nb\na\n");
    const FlowTrace t = load_trace(f.path(), TraceFormat::flow_per_line);
    CHECK(t.num_flows == 2);
    CHECK(t.events == std::vector<std::uint32_t>{0, 1, 0});
}

TEST_CASE("load_trace flow_count_pairs") {
    TempFile f("icetest_pairs.txt");
    f.write("a,3\nb,1\n");
    const FlowTrace t = load_trace(f.path(), TraceFormat::flow_count_pairs);
    CHECK(t.num_flows == 2);
    CHECK(t.events == std::vector<std::uint32_t>{0, 0, 0, 1});
}

TEST_CASE("load_trace tolerates blank lines and CRLF") {
    TempFile f("icetest_crlf.txt");
    f.write("x\r\n\r\ny\r\nx\r\n");
    const FlowTrace t = load_trace(f.path(), TraceFormat::flow_per_line);
    CHECK(t.num_flows == 2);
    CHECK(t.events == std::vector<std::uint32_t>{0, 1, 0});
}

TEST_CASE("load_trace empty file") {
    TempFile f("icetest_empty.txt");
    f.write("");
    const FlowTrace t = load_trace(f.path(), TraceFormat::flow_per_line);
    CHECK(t.num_flows == 0);
    CHECK(t.events.empty());
}

TEST_CASE("load_trace gzip round trip") {
    TempFile f("icetest_trace.gz");
    f.write_gz("a\nb\na\nc\n");
    const FlowTrace t = load_trace(f.path(), TraceFormat::flow_per_line);
    CHECK(t.num_flows == 3);
    CHECK(t.events == std::vector<std::uint32_t>{0, 1, 0, 2});
}

TEST_CASE("load_trace errors") {
    CHECK_THROWS_AS(load_trace("/nonexistent/file.txt", TraceFormat::flow_per_line),
                    DataError);
    TempFile bad("icetest_bad.txt");
    bad.write("a,3\nb\n");
    try {
        load_trace(bad.path(), TraceFormat::flow_count_pairs);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        // diagnostics carry the offending line number
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
    TempFile bad2("icetest_bad2.txt");
    bad2.write("a,xyz\n");
    CHECK_THROWS_AS(load_trace(bad2.path(), TraceFormat::flow_count_pairs),
                    DataError);
}

TEST_CASE("save_trace round trips both formats") {
    FlowTrace t;
    t.num_flows = 3;
    t.events = {2, 0, 2, 1, 2};
    TempFile lines("icetest_out_lines.txt");
    save_trace(t, lines.path(), TraceFormat::flow_per_line);
    const FlowTrace back = load_trace(lines.path(), TraceFormat::flow_per_line);
    CHECK(back.num_flows == 3);
    // keys are re-densified in first-seen order: 2->0, 0->1, 1->2
    CHECK(back.events == std::vector<std::uint32_t>{0, 1, 0, 2, 0});

    TempFile pairs("icetest_out_pairs.txt");
    save_trace(t, pairs.path(), TraceFormat::flow_count_pairs);
    const FlowTrace back2 = load_trace(pairs.path(), TraceFormat::flow_count_pairs);
    CHECK(back2.num_flows == 3);
    CHECK(back2.total_packets() == 5);
    const ExactOracle o = oracle_apply(back2);
    CHECK(o.counts == std::vector<std::uint64_t>{3, 1, 1});
}

TEST_CASE("zipf_trace uniform at skew zero") {
    const FlowTrace t = zipf_trace(50, 500000, 0.0, 99);
    const ExactOracle o = oracle_apply(t);
    const auto [mn, mx] = std::minmax_element(o.counts.begin(), o.counts.end());
    CHECK(static_cast<double>(*mx) / static_cast<double>(*mn) < 1.1);
}

TEST_CASE("zipf_trace rank-frequency slope near -1 at skew one") {
    const FlowTrace t = zipf_trace(10000, 1000000, 1.0, 7);
    const ExactOracle o = oracle_apply(t);
    // least-squares fit of log(count) against log(rank) over the populated head
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t r = 0; r < 1000; ++r) {
        if (o.counts[r] == 0) continue;
        const double x = std::log(static_cast<double>(r + 1));
        const double y = std::log(static_cast<double>(o.counts[r]));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.1));
}

TEST_CASE("zipf_trace determinism and shape") {
    const FlowTrace a = zipf_trace(100, 10000, 1.2, 42);
    const FlowTrace b = zipf_trace(100, 10000, 1.2, 42);
    const FlowTrace c = zipf_trace(100, 10000, 1.2, 43);
    CHECK(a.events == b.events);
    CHECK(a.events != c.events);
    CHECK(a.total_packets() == 10000);
    CHECK(*std::max_element(a.events.begin(), a.events.end()) < 100);
    CHECK_THROWS_AS(zipf_trace(0, 10, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(zipf_trace(10, 10, -0.5, 1), ConfigError);
}

TEST_CASE("shuffle_flow_ids permutes without changing multiplicities") {
    FlowTrace t = zipf_trace(200, 20000, 1.0, 5);
    const ExactOracle before = oracle_apply(t);
    shuffle_flow_ids(t, 11);
    const ExactOracle after = oracle_apply(t);
    CHECK(before.total() == after.total());
    std::vector<std::uint64_t> sorted_before = before.counts;
    std::vector<std::uint64_t> sorted_after = after.counts;
    std::sort(sorted_before.begin(), sorted_before.end());
    std::sort(sorted_after.begin(), sorted_after.end());
    CHECK(sorted_before == sorted_after);
    CHECK(before.counts != after.counts);  // seed 11 actually moves something
}

TEST_CASE("exact oracle") {
    FlowTrace empty;
    empty.num_flows = 4;
    CHECK(oracle_apply(empty).total() == 0);
    CHECK(oracle_apply(empty).counts == std::vector<std::uint64_t>{0, 0, 0, 0});

    FlowTrace single;
    single.num_flows = 1;
    single.events.assign(1234, 0);
    CHECK(oracle_apply(single).counts[0] == 1234);

    const FlowTrace t = zipf_trace(64, 5000, 0.8, 3);
    CHECK(oracle_apply(t).total() == 5000);
}
