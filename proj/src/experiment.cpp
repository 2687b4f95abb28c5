#include "replayguard/experiment.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "replayguard/bloom.hpp"
#include "replayguard/errors.hpp"
#include "replayguard/rng.hpp"

namespace replayguard {

namespace {

using nlohmann::json;

std::size_t line_of_offset(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
    std::size_t pos = text.find('"' + key + '"');
    return pos == std::string::npos ? 1 : line_of_offset(text, pos);
}

[[noreturn]] void fail_at(const std::string& text, const std::string& key,
                          const std::string& msg) {
    throw ConfigError("line " + std::to_string(line_of_key(text, key)) + ": " + msg);
}

void check_keys(const std::string& text, const json& obj,
                std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) { known = true; break; }
        if (!known)
            fail_at(text, item.key(), "unknown " + where + " key \"" + item.key() + "\"");
    }
}

std::uint64_t get_count(const std::string& text, const json& obj, const char* key,
                        std::uint64_t fallback, std::uint64_t max) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned())
        fail_at(text, key, std::string(key) + " must be a non-negative integer");
    std::uint64_t n = v.get<std::uint64_t>();
    if (n > max)
        fail_at(text, key, std::string(key) + " must be at most " + std::to_string(max));
    return n;
}

double get_number(const std::string& text, const json& obj, const char* key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail_at(text, key, std::string(key) + " must be a number");
    return v.get<double>();
}

std::string format_full(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_sig4(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string calc_line(double v) { return format_full(v) + " (" + format_sig4(v) + ")"; }

std::string calc_line(std::uint64_t v) {
    return std::to_string(v) + " (" + format_sig4(static_cast<double>(v)) + ")";
}

template <typename T>
T required(const std::optional<T>& opt, const char* kind, const char* flag) {
    if (!opt) throw ConfigError(std::string("calc ") + kind + " requires " + flag);
    return *opt;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to " + path + " failed");
}

}  // namespace

ExperimentFile parse_experiment(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("line " + std::to_string(line_of_offset(json_text, e.byte)) +
                          ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("line 1: top level must be a JSON object");

    check_keys(json_text, j,
               {"n_nodes", "sends_per_node", "p_loss", "reorder_D", "p_capture",
                "replay_delay", "replays_per_capture", "seed", "topology", "detector",
                "sweep", "output", "trace_output"},
               "config");

    ExperimentFile ex;
    SimConfig& cfg = ex.config;
    cfg.n_nodes = static_cast<std::uint32_t>(
        get_count(json_text, j, "n_nodes", cfg.n_nodes, 65536));
    cfg.sends_per_node = static_cast<std::uint32_t>(
        get_count(json_text, j, "sends_per_node", cfg.sends_per_node, 65536));
    cfg.p_loss = get_number(json_text, j, "p_loss", cfg.p_loss);
    cfg.reorder_D = static_cast<std::uint32_t>(
        get_count(json_text, j, "reorder_D", cfg.reorder_D, 0xFFFFFFFFull));
    cfg.p_capture = get_number(json_text, j, "p_capture", cfg.p_capture);
    cfg.replays_per_capture = static_cast<std::uint32_t>(
        get_count(json_text, j, "replays_per_capture", cfg.replays_per_capture, 0xFFFFFFFFull));
    cfg.seed = get_count(json_text, j, "seed", cfg.seed, 0xFFFFFFFFFFFFFFFFull);

    if (j.contains("replay_delay")) {
        const json& rd = j.at("replay_delay");
        if (!rd.is_array() || rd.size() != 2 || !rd[0].is_number_unsigned() ||
            !rd[1].is_number_unsigned()) {
            fail_at(json_text, "replay_delay",
                    "replay_delay must be a [min, max] pair of non-negative integers");
        }
        cfg.replay_delay_min = rd[0].get<std::uint32_t>();
        cfg.replay_delay_max = rd[1].get<std::uint32_t>();
    }

    if (j.contains("topology")) {
        const json& topo = j.at("topology");
        if (!topo.is_array())
            fail_at(json_text, "topology", "topology must be an array of [src, dest] pairs");
        for (const json& pair : topo) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_unsigned() ||
                !pair[1].is_number_unsigned() || pair[0].get<std::uint64_t>() > 65535 ||
                pair[1].get<std::uint64_t>() > 65535) {
                fail_at(json_text, "topology",
                        "each topology entry must be a [src, dest] pair of node ids");
            }
            cfg.topology.emplace_back(pair[0].get<std::uint16_t>(),
                                      pair[1].get<std::uint16_t>());
        }
    }

    if (j.contains("detector")) {
        const json& det = j.at("detector");
        if (!det.is_object()) fail_at(json_text, "detector", "detector must be an object");
        check_keys(json_text, det, {"scheme", "window", "filter_bits", "k", "fp_max"},
                   "detector");
        if (det.contains("scheme")) {
            if (!det.at("scheme").is_string())
                fail_at(json_text, "scheme", "scheme must be a string");
            try {
                cfg.detector.scheme = scheme_from_name(det.at("scheme").get<std::string>());
            } catch (const ConfigError& e) {
                fail_at(json_text, "scheme", e.what());
            }
        }
        cfg.detector.window = static_cast<std::uint32_t>(
            get_count(json_text, det, "window", cfg.detector.window, 65536));
        cfg.detector.filter_bits = static_cast<std::uint32_t>(
            get_count(json_text, det, "filter_bits", cfg.detector.filter_bits, 0xFFFFFFFFull));
        cfg.detector.hash_count = static_cast<unsigned>(
            get_count(json_text, det, "k", cfg.detector.hash_count, 9));
        cfg.detector.fp_max = get_number(json_text, det, "fp_max", cfg.detector.fp_max);
    }

    if (j.contains("sweep")) {
        const json& sw = j.at("sweep");
        if (!sw.is_object()) fail_at(json_text, "sweep", "sweep must be an object");
        check_keys(json_text, sw, {"axis", "values"}, "sweep");
        if (!sw.contains("axis") || !sw.at("axis").is_string())
            fail_at(json_text, "sweep", "sweep requires a string \"axis\"");
        if (!sw.contains("values") || !sw.at("values").is_array())
            fail_at(json_text, "sweep", "sweep requires an array \"values\"");
        SweepSpec spec;
        spec.axis = sw.at("axis").get<std::string>();
        for (const json& v : sw.at("values")) {
            if (!v.is_number()) fail_at(json_text, "values", "sweep values must be numbers");
            spec.values.push_back(v.get<double>());
        }
        try {
            (void)apply_axis(cfg, spec.axis, spec.values.empty() ? 0.0 : spec.values.front());
        } catch (const ConfigError& e) {
            fail_at(json_text, "axis", e.what());
        }
        ex.sweep = std::move(spec);
    }

    if (j.contains("output")) {
        if (!j.at("output").is_string())
            fail_at(json_text, "output", "output must be a path string");
        ex.output = j.at("output").get<std::string>();
    }
    if (j.contains("trace_output")) {
        if (!j.at("trace_output").is_string())
            fail_at(json_text, "trace_output", "trace_output must be a path string");
        if (ex.sweep)
            fail_at(json_text, "trace_output", "trace_output requires a single-run config");
        ex.trace_output = j.at("trace_output").get<std::string>();
    }

    try {
        validate(cfg);
    } catch (const ConfigError& e) {
        // Re-anchor on the offending field when the message names one.
        std::string msg = e.what();
        for (const char* key : {"n_nodes", "sends_per_node", "p_loss", "reorder_D",
                                "p_capture", "replay_delay", "topology", "window",
                                "filter_bits", "hash_count", "fp_max"}) {
            if (msg.find(key) != std::string::npos) fail_at(json_text, key, msg);
        }
        throw ConfigError("line 1: " + msg);
    }
    return ex;
}

ExperimentFile load_experiment(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment(buf.str());
}

std::string format_probability(double p) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", p);
    return buf;
}

std::string csv_header() {
    return "scheme,n_nodes,window,filter_bits,k,seed,sent,delivered,replays_injected,"
           "replays_detected,false_positives,false_negatives,epoch_resets,"
           "state_bytes_bitmap,state_bytes_ledger,fp_predicted";
}

std::string csv_row(const SimConfig& cfg, const RunMetrics& m) {
    std::ostringstream out;
    out << scheme_name(cfg.detector.scheme) << ',' << cfg.n_nodes << ','
        << cfg.detector.window << ',' << cfg.detector.filter_bits << ','
        << effective_hash_count(cfg.detector) << ',' << cfg.seed << ',' << m.sent << ','
        << m.delivered << ',' << m.replays_injected << ',' << m.replays_detected << ','
        << m.false_positives << ',' << m.false_negatives << ',' << m.epoch_resets << ','
        << m.state_bytes_bitmap << ',' << m.state_bytes_ledger << ','
        << format_probability(m.fp_predicted);
    return out.str();
}

std::vector<Fig19Row> fig19_rows(std::uint64_t seed, std::size_t probes,
                                 std::uint32_t target_insertions) {
    std::vector<Fig19Row> rows;
    Xorshift64Star rng(seed);
    for (unsigned k = 1; k <= 8; ++k) {
        auto m = static_cast<std::uint32_t>(
            std::llround(k * target_insertions / std::log(2.0)));
        BloomFilter filter(m, k);
        std::array<std::uint8_t, 16> tag{};
        // Load the designed-for element count, the ~50% fill operating
        // point. Inserted and probed tags carry disjoint prefixes, so no
        // probe was ever inserted.
        tag[0] = 'I';
        for (std::uint32_t i = 0; i < target_insertions; ++i) {
            rng.fill_bytes(std::span(tag).subspan(1));
            filter.query_insert(tag);
        }
        tag[0] = 'P';
        std::size_t hits = 0;
        for (std::size_t i = 0; i < probes; ++i) {
            rng.fill_bytes(std::span(tag).subspan(1));
            if (filter.contains(tag)) ++hits;
        }
        rows.push_back({k, static_cast<double>(hits) / static_cast<double>(probes),
                        fp_approx(k)});
    }
    return rows;
}

std::string fig19_csv(const std::vector<Fig19Row>& rows) {
    std::ostringstream out;
    out << "k,fp_empirical,fp_predicted\n";
    for (const Fig19Row& r : rows) {
        out << r.k << ',' << format_probability(r.fp_empirical) << ','
            << format_probability(r.fp_predicted) << '\n';
    }
    return out.str();
}

std::string calc_text(const CalcRequest& req) {
    if (req.kind == "eq4") {
        std::uint64_t b = required(req.bytes_per_counter, "eq4", "--B");
        std::uint64_t n = required(req.node_count, "eq4", "--n");
        return calc_line(network_storage_overhead(b, n)) + "\n";
    }
    if (req.kind == "fp_approx") {
        unsigned k = required(req.hash_count, "fp_approx", "--k");
        if (k < 1 || k > 64) throw ConfigError("--k must be between 1 and 64");
        return calc_line(fp_approx(k)) + "\n";
    }
    if (req.kind == "fp_exact") {
        std::uint64_t m = required(req.filter_bits, "fp_exact", "--m");
        unsigned k = required(req.hash_count, "fp_exact", "--k");
        std::uint64_t p = required(req.insertions, "fp_exact", "--p");
        if (m < 1) throw ConfigError("--m must be at least 1");
        if (k < 1) throw ConfigError("--k must be at least 1");
        return calc_line(fp_exact(static_cast<std::uint32_t>(m), k,
                                  static_cast<std::uint32_t>(p))) +
               "\n";
    }
    if (req.kind == "state_bytes") {
        DetectorConfig det;
        det.scheme = scheme_from_name(required(req.scheme, "state_bytes", "--scheme"));
        std::uint64_t neighbors = required(req.neighbors, "state_bytes", "--neighbors");
        if (req.window) det.window = static_cast<std::uint32_t>(*req.window);
        if (req.filter_bits) det.filter_bits = static_cast<std::uint32_t>(*req.filter_bits);
        if (req.hash_count) det.hash_count = *req.hash_count;
        validate(det);
        return "bitmap " + calc_line(state_bytes_bitmap(det, neighbors)) + "\nledger " +
               calc_line(state_bytes_ledger(det, neighbors)) + "\n";
    }
    throw ConfigError("unknown calc kind: " + req.kind +
                      " (expected eq4, fp_exact, fp_approx, or state_bytes)");
}

int cmd_run(const std::string& config_path) {
    try {
        ExperimentFile ex = load_experiment(config_path);
        if (const char* env = std::getenv("REPLAYGUARD_SEED"); env && *env) {
            std::uint64_t seed = 0;
            const char* end = env + std::string_view(env).size();
            auto [ptr, ec] = std::from_chars(env, end, seed);
            if (ec != std::errc() || ptr != end) {
                std::cerr << "REPLAYGUARD_SEED must be an unsigned integer\n";
                return 2;
            }
            ex.config.seed = seed;
        }

        std::ostringstream csv;
        csv << csv_header() << '\n';
        RunMetrics totals;
        std::size_t n_runs = 0;
        if (ex.sweep) {
            for (std::size_t i = 0; i < ex.sweep->values.size(); ++i) {
                SimConfig cfg = apply_axis(ex.config, ex.sweep->axis, ex.sweep->values[i]);
                cfg.seed = ex.config.seed + i;
                RunMetrics m = run(cfg).metrics;
                csv << csv_row(cfg, m) << '\n';
                totals.sent += m.sent;
                totals.replays_injected += m.replays_injected;
                totals.replays_detected += m.replays_detected;
                totals.false_positives += m.false_positives;
                totals.false_negatives += m.false_negatives;
                ++n_runs;
            }
        } else {
            RunResult result = run(ex.config);
            csv << csv_row(ex.config, result.metrics) << '\n';
            totals = result.metrics;
            n_runs = 1;
            if (ex.trace_output) write_text_file(*ex.trace_output, trace_to_tsv(result.trace));
        }

        if (ex.output) {
            write_text_file(*ex.output, csv.str());
        } else {
            std::cout << csv.str();
            std::cout.flush();
        }
        std::cerr << "runs=" << n_runs << " sent=" << totals.sent
                  << " replays_injected=" << totals.replays_injected
                  << " replays_detected=" << totals.replays_detected
                  << " false_positives=" << totals.false_positives
                  << " false_negatives=" << totals.false_negatives << '\n';
        return 0;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

int cmd_calc(const CalcRequest& req) {
    try {
        std::cout << calc_text(req);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

int cmd_fig19(const std::string& out_path) {
    std::uint64_t seed = 19;
    if (const char* env = std::getenv("REPLAYGUARD_SEED"); env && *env) {
        std::uint64_t parsed = 0;
        const char* end = env + std::string_view(env).size();
        auto [ptr, ec] = std::from_chars(env, end, parsed);
        if (ec != std::errc() || ptr != end) {
            std::cerr << "REPLAYGUARD_SEED must be an unsigned integer\n";
            return 2;
        }
        seed = parsed;
    }
    try {
        write_text_file(out_path, fig19_csv(fig19_rows(seed)));
        return 0;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace replayguard
