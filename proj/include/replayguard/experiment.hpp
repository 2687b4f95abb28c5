#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "replayguard/simnet.hpp"

namespace replayguard {

struct SweepSpec {
    std::string axis;
    std::vector<double> values;
};

// A parsed experiment config: one SimConfig, optionally swept along one axis.
// CSV goes to `output` when set, stdout otherwise; `trace_output` dumps the
// event trace and is only meaningful for single runs.
struct ExperimentFile {
    SimConfig config;
    std::optional<SweepSpec> sweep;
    std::optional<std::string> output;
    std::optional<std::string> trace_output;
};

// ConfigError with a "line N:" anchor on parse or validation failure.
ExperimentFile parse_experiment(const std::string& json_text);
// IoError if the file cannot be read, then as parse_experiment.
ExperimentFile load_experiment(const std::string& path);

std::string csv_header();
std::string csv_row(const SimConfig& cfg, const RunMetrics& m);
std::string format_probability(double p);  // 6 significant digits

struct Fig19Row {
    unsigned k;
    double fp_empirical;
    double fp_predicted;
};

// For each k in 1..8: size a filter for ~50% fill at `target_insertions`
// entries, load it to that operating point, then measure the false-positive
// rate over `probes` never-inserted tags.
std::vector<Fig19Row> fig19_rows(std::uint64_t seed, std::size_t probes = 200000,
                                 std::uint32_t target_insertions = 2000);
std::string fig19_csv(const std::vector<Fig19Row>& rows);

struct CalcRequest {
    std::string kind;  // eq4 | fp_exact | fp_approx | state_bytes
    std::optional<std::uint64_t> bytes_per_counter;  // --B
    std::optional<std::uint64_t> node_count;         // --n
    std::optional<std::uint64_t> filter_bits;        // --m
    std::optional<unsigned> hash_count;              // --k
    std::optional<std::uint64_t> insertions;         // --p
    std::optional<std::string> scheme;
    std::optional<std::uint64_t> neighbors;
    std::optional<std::uint64_t> window;
};

// The calc subcommand's output, "<full precision> (<4 significant digits>)"
// per value. ConfigError on missing or out-of-range parameters.
std::string calc_text(const CalcRequest& req);

// Subcommand entry points. Exit codes: 0 ok, 1 I/O failure, 2 validation.
int cmd_run(const std::string& config_path);
int cmd_calc(const CalcRequest& req);
int cmd_fig19(const std::string& out_path);

}  // namespace replayguard
