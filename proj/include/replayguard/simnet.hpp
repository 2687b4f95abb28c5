#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "replayguard/replay.hpp"
#include "replayguard/wire.hpp"

namespace replayguard {

struct SimConfig {
    std::uint32_t n_nodes = 2;
    std::uint32_t sends_per_node = 100;  // sends per topology pair
    double p_loss = 0.0;
    std::uint32_t reorder_D = 0;  // max displacement in queue positions
    double p_capture = 0.0;
    std::uint32_t replay_delay_min = 1;
    std::uint32_t replay_delay_max = 1;
    std::uint32_t replays_per_capture = 1;
    DetectorConfig detector;
    std::uint64_t seed = 1;
    // Directed sender -> receiver pairs. Empty means the sink pattern:
    // every node except node 0 sends to node 0.
    std::vector<std::pair<std::uint16_t, std::uint16_t>> topology;
};

void validate(const SimConfig& cfg);  // ConfigError on bad parameters

// The pairs actually simulated (cfg.topology, or the sink default).
std::vector<std::pair<std::uint16_t, std::uint16_t>> effective_topology(const SimConfig& cfg);

struct RunMetrics {
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;  // genuine deliveries; sent = delivered + lost
    std::uint64_t lost = 0;
    std::uint64_t replays_injected = 0;
    std::uint64_t replays_detected = 0;
    std::uint64_t false_positives = 0;  // genuine deliveries judged Replayed
    std::uint64_t false_negatives = 0;  // injected replays judged Fresh
    std::uint64_t epoch_resets = 0;
    std::uint64_t state_bytes_bitmap = 0;
    std::uint64_t state_bytes_ledger = 0;
    double fp_predicted = 0.0;  // fp_approx(k) for bloom schemes, else 0
};

enum class EventKind : std::uint8_t { Send, Deliver, Drop, Capture, ReplayInject };

constexpr std::string_view event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Send: return "send";
        case EventKind::Deliver: return "deliver";
        case EventKind::Drop: return "drop";
        case EventKind::Capture: return "capture";
        case EventKind::ReplayInject: return "replay-inject";
    }
    return "?";
}

struct TraceEvent {
    std::uint64_t index = 0;  // position in the trace
    EventKind kind = EventKind::Send;
    PacketAE packet;
    bool ground_truth = false;  // true iff this delivery is an injected copy
    bool has_verdict = false;   // deliveries only
    Verdict verdict = Verdict::Fresh;
};

struct RunResult {
    RunMetrics metrics;
    std::vector<TraceEvent> trace;
};

RunResult run(const SimConfig& cfg);

// One run per value with seeds base.seed, base.seed + 1, ...; axis names a
// SimConfig or DetectorConfig scalar (n_nodes, sends_per_node, p_loss,
// reorder_D, p_capture, replays_per_capture, replay_delay_min,
// replay_delay_max, window, filter_bits, k, fp_max).
std::vector<RunMetrics> sweep(const SimConfig& base, const std::string& axis,
                              const std::vector<double>& values);

SimConfig apply_axis(const SimConfig& base, const std::string& axis, double value);

std::string trace_to_tsv(const std::vector<TraceEvent>& trace);

}  // namespace replayguard
