// Benchmark and bound-calculator CLI for the counter estimation library.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 capacity exceeded.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "icebuckets/bench.hpp"
#include "icebuckets/errors.hpp"
#include "icebuckets/ice_buckets.hpp"
#include "icebuckets/scale.hpp"
#include "icebuckets/single_scale.hpp"
#include "icebuckets/traces.hpp"

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("ICE_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 1;
}

int run_bounds(double max_count, std::uint32_t num_symbols, std::uint32_t num_scales,
               std::uint64_t num_buckets, double bits_per_counter,
               std::uint64_t num_flows) {
    std::cout << std::setprecision(10) << "quantity,value\n";
    if (bits_per_counter > 0.0) {
        if (num_flows == 0) {
            throw ice::ConfigError("--T-bits-per-counter requires --N");
        }
        const auto total_bits = static_cast<std::uint64_t>(
            std::llround(bits_per_counter * static_cast<double>(num_flows)));
        const ice::IceConfig cfg =
            ice::choose_parameters(total_bits, num_flows, max_count);
        std::cout << "chosen_L," << cfg.num_symbols << '\n'
                  << "chosen_E," << cfg.num_scales << '\n'
                  << "chosen_B," << cfg.num_buckets << '\n'
                  << "chosen_S," << cfg.bucket_size << '\n'
                  << "eps_step," << cfg.eps_step << '\n'
                  << "overall_bound," << cfg.predicted_bound << '\n';
        num_symbols = cfg.num_symbols;
    }
    const double eps_max = ice::ice_max_error_bound(max_count, num_symbols);
    std::cout << "epsilon_max," << eps_max << '\n';
    if (num_buckets > 0 && num_scales > 0) {
        std::cout << "overall_bound,"
                  << ice::ice_overall_error_bound(max_count, num_buckets, num_symbols,
                                                  num_scales)
                  << '\n';
    }
    if (eps_max > 0.0 && eps_max < 1.0) {
        const ice::BitBounds bits = ice::bits_required(max_count, eps_max);
        std::cout << "bits_per_symbol," << ice::bits_per_symbol(max_count, eps_max)
                  << '\n'
                  << "bits_lower_bound," << bits.lower_bits << '\n'
                  << "bits_upper_bound," << bits.upper_bits << '\n';
    }
    return 0;
}

int run_upscale_table(std::uint32_t num_scales, double eps_step) {
    std::cout << std::setprecision(10)
              << "old_w,old_eps,new_w,new_eps,requires_upscale\n";
    for (std::uint32_t w = 0; w < num_scales; ++w) {
        const bool odd = (w % 2 == 1);
        const std::uint32_t new_w = odd ? (w + 1) / 2 : w / 2;
        std::cout << w << ',' << eps_step * w << ',' << new_w << ','
                  << 2.0 * eps_step * new_w << ',' << (odd ? "yes" : "no") << '\n';
    }
    return 0;
}

int run_lp_check(const std::vector<double>& eps_grid, double factor,
                 const std::vector<std::uint32_t>& symbol_grid) {
    std::cout << std::setprecision(10) << "eps,eps_prime,L,objective,ratio\n";
    for (double eps : eps_grid) {
        const double eps_prime = eps * factor;
        for (std::uint32_t num_symbols : symbol_grid) {
            const double obj = ice::upscale_error_lp(eps, eps_prime, num_symbols);
            std::cout << eps << ',' << eps_prime << ',' << num_symbols << ',' << obj
                      << ',' << obj / (eps_prime * eps_prime) << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Counter-estimation bounds and trace-driven benchmarks"};
    app.require_subcommand(1);

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Analytic error and memory bounds");
    double b_max = 0.0;
    std::uint32_t b_symbols = 4096, b_scales = 0;
    std::uint64_t b_buckets = 0, b_flows = 0;
    double b_bits = 0.0;
    bounds->add_option("--M", b_max, "Counting capacity")->required();
    bounds->add_option("--L", b_symbols, "Symbols per counter (power of two)");
    bounds->add_option("--E", b_scales, "Number of scales (power of two)");
    bounds->add_option("--B", b_buckets, "Number of buckets");
    bounds->add_option("--T-bits-per-counter", b_bits,
                       "Budget in bits per counter; picks L, E, B, S");
    bounds->add_option("--N", b_flows, "Number of flows (with --T-bits-per-counter)");

    // upscale-table
    auto* table = app.add_subcommand("upscale-table", "Global upscale scale mapping");
    std::uint32_t t_scales = 8;
    double t_step = 0.001;
    table->add_option("--E", t_scales, "Number of scales");
    table->add_option("--eps-step", t_step, "Error step before the upscale");

    // lp-check
    auto* lp = app.add_subcommand("lp-check", "Upscale-error LP objective grid");
    std::vector<double> lp_eps{1e-3, 1e-2, 1e-1};
    double lp_factor = 2.0;
    std::vector<std::uint32_t> lp_symbols{256, 4096};
    lp->add_option("--eps", lp_eps, "Source scale grid");
    lp->add_option("--factor", lp_factor, "eps' = factor * eps")
        ->check(CLI::Range(1.0 + 1e-12, 1e6));
    lp->add_option("--L", lp_symbols, "Symbol count grid");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic trace file");
    std::size_t s_flows = 10000, s_packets = 1000000;
    double s_skew = 1.0;
    std::uint64_t s_seed = default_seed();
    std::string s_out, s_format = "lines";
    synth->add_option("--flows", s_flows, "Number of flows");
    synth->add_option("--packets", s_packets, "Number of packets");
    synth->add_option("--skew", s_skew, "Zipf skew (0 = uniform)");
    synth->add_option("--seed", s_seed, "Generator seed");
    synth->add_option("--out", s_out, "Output path")->required();
    synth->add_option("--format", s_format, "lines|pairs")
        ->check(CLI::IsMember({"lines", "pairs"}));

    // bench
    auto* bench = app.add_subcommand("bench", "Replay a trace and measure errors");
    std::string be_scheme = "ice", be_trace, be_out = ".", be_format = "lines";
    std::string be_zipf;
    ice::RunSpec spec;
    spec.seed = default_seed();
    bench->add_option("--scheme", be_scheme,
                      "ice|ice-no-global|cedar|disco|exact");
    bench->add_option("--trace", be_trace, "Trace file (.gz ok)");
    bench->add_option("--format", be_format, "lines|pairs")
        ->check(CLI::IsMember({"lines", "pairs"}));
    bench->add_option("--zipf", be_zipf, "N,packets,skew synthetic workload");
    bench->add_option("--bits", spec.bits_per_symbol, "Bits per symbol");
    bench->add_option("--overhead-bits", spec.overhead_bits_per_counter,
                      "Scale-index budget per counter");
    bench->add_option("--E", spec.num_scales, "Scales (0 = auto)");
    bench->add_option("--S", spec.bucket_size, "Bucket size (0 = auto)");
    bench->add_option("--M", spec.max_count, "Capacity (0 = trace total)");
    bench->add_option("--seed", spec.seed, "Base seed");
    bench->add_option("--runs", spec.runs, "Independent trials");
    bench->add_option("--checkpoints", spec.checkpoints, "Progress points");
    bench->add_option("--workers", spec.workers, "Worker threads");
    bench->add_option("--out", be_out, "Output directory for CSVs");

    try {
        app.parse(argc, argv);

        if (bounds->parsed()) {
            return run_bounds(b_max, b_symbols, b_scales, b_buckets, b_bits, b_flows);
        }
        if (table->parsed()) {
            return run_upscale_table(t_scales, t_step);
        }
        if (lp->parsed()) {
            return run_lp_check(lp_eps, lp_factor, lp_symbols);
        }
        if (synth->parsed()) {
            const ice::FlowTrace trace =
                ice::zipf_trace(s_flows, s_packets, s_skew, s_seed);
            ice::save_trace(trace, s_out,
                            s_format == "lines" ? ice::TraceFormat::flow_per_line
                                                : ice::TraceFormat::flow_count_pairs);
            std::cout << "wrote " << trace.total_packets() << " events, "
                      << trace.num_flows << " flows to " << s_out << '\n';
            return 0;
        }
        if (bench->parsed()) {
            spec.scheme = ice::scheme_from_name(be_scheme);
            ice::FlowTrace trace;
            if (!be_trace.empty()) {
                trace = ice::load_trace(be_trace,
                                        be_format == "lines"
                                            ? ice::TraceFormat::flow_per_line
                                            : ice::TraceFormat::flow_count_pairs);
            } else if (!be_zipf.empty()) {
                std::size_t flows, packets;
                double skew;
                if (std::sscanf(be_zipf.c_str(), "%zu,%zu,%lf", &flows, &packets,
                                &skew) != 3) {
                    throw CLI::ValidationError("--zipf", "expected N,packets,skew");
                }
                trace = ice::zipf_trace(flows, packets, skew, spec.seed);
            } else {
                throw CLI::RequiredError("--trace or --zipf");
            }
            const ice::BenchResult result = ice::run_bench(spec, trace);
            std::filesystem::create_directories(be_out);
            const std::filesystem::path dir(be_out);
            ice::write_overall_csv((dir / "overall.csv").string(), spec, result);
            ice::write_per_value_csv((dir / "per_value.csv").string(), result);
            if (spec.checkpoints > 0) {
                ice::write_progress_csv((dir / "progress.csv").string(), result);
            }
            std::cout << std::setprecision(10) << "overall=" << result.report.overall
                      << " bound=" << result.bound
                      << " global_upscales=" << result.upscales
                      << " local_upscales=" << result.local_upscales
                      << " saturations=" << result.saturations << '\n';
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ice::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return 4;
    } catch (const ice::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const ice::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
