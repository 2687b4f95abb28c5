#include "replayguard/simnet.hpp"

#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "replayguard/errors.hpp"
#include "replayguard/rng.hpp"

namespace replayguard {

namespace {

struct Scheduled {
    std::uint64_t time;
    std::uint64_t seq;  // schedule order; breaks ties so reordering is bounded
    PacketAE packet;
    bool is_replay;
};

struct ScheduledAfter {
    bool operator()(const Scheduled& a, const Scheduled& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

}  // namespace

void validate(const SimConfig& cfg) {
    if (cfg.n_nodes > 65536) throw ConfigError("n_nodes must be at most 65536");
    if (cfg.sends_per_node > 65536)
        throw ConfigError("sends_per_node must be at most 65536");
    if (cfg.p_loss < 0.0 || cfg.p_loss > 1.0)
        throw ConfigError("p_loss must be in [0, 1]");
    if (cfg.p_capture < 0.0 || cfg.p_capture > 1.0)
        throw ConfigError("p_capture must be in [0, 1]");
    if (cfg.replay_delay_min > cfg.replay_delay_max)
        throw ConfigError("replay_delay min must not exceed max");
    for (const auto& [src, dest] : cfg.topology) {
        if (src >= cfg.n_nodes || dest >= cfg.n_nodes)
            throw ConfigError("topology references a node outside 0..n_nodes-1");
        if (src == dest) throw ConfigError("topology pair sends to itself");
    }
    validate(cfg.detector);
}

std::vector<std::pair<std::uint16_t, std::uint16_t>> effective_topology(const SimConfig& cfg) {
    if (!cfg.topology.empty()) return cfg.topology;
    std::vector<std::pair<std::uint16_t, std::uint16_t>> pairs;
    for (std::uint32_t i = 1; i < cfg.n_nodes; ++i)
        pairs.emplace_back(static_cast<std::uint16_t>(i), 0);
    return pairs;
}

RunResult run(const SimConfig& cfg) {
    validate(cfg);
    const auto pairs = effective_topology(cfg);

    Xorshift64Star rng(cfg.seed);
    RunResult result;
    RunMetrics& m = result.metrics;

    std::unordered_map<std::uint16_t, Detector> detectors;
    std::unordered_map<std::uint16_t, std::unordered_set<std::uint16_t>> peers;
    for (const auto& [src, dest] : pairs) {
        detectors.try_emplace(dest, cfg.detector);
        peers[dest].insert(src);
    }

    std::unordered_map<std::uint16_t, std::uint32_t> next_ctr;
    std::priority_queue<Scheduled, std::vector<Scheduled>, ScheduledAfter> queue;
    std::uint64_t next_seq = 0;

    auto log = [&](EventKind kind, const PacketAE& p, bool ground_truth) -> TraceEvent& {
        TraceEvent ev;
        ev.index = result.trace.size();
        ev.kind = kind;
        ev.packet = p;
        ev.ground_truth = ground_truth;
        result.trace.push_back(std::move(ev));
        return result.trace.back();
    };

    auto process_delivery = [&](const Scheduled& item, std::uint64_t now) {
        Verdict v = detectors.at(item.packet.dest).check(item.packet);
        TraceEvent& ev = log(EventKind::Deliver, item.packet, item.is_replay);
        ev.has_verdict = true;
        ev.verdict = v;
        if (item.is_replay) {
            if (v == Verdict::Replayed) ++m.replays_detected;
            else ++m.false_negatives;
            return;  // injected copies are not captured again
        }
        ++m.delivered;
        if (v == Verdict::Replayed) ++m.false_positives;
        if (cfg.p_capture > 0.0 && rng.chance(cfg.p_capture)) {
            log(EventKind::Capture, item.packet, false);
            for (std::uint32_t r = 0; r < cfg.replays_per_capture; ++r) {
                std::uint64_t delay =
                    cfg.replay_delay_min +
                    rng.uniform(cfg.replay_delay_max - cfg.replay_delay_min + 1ull);
                log(EventKind::ReplayInject, item.packet, true);
                ++m.replays_injected;
                queue.push({now + delay, next_seq++, item.packet, true});
            }
        }
    };

    const std::uint64_t total_sends =
        static_cast<std::uint64_t>(cfg.sends_per_node) * pairs.size();
    for (std::uint64_t tick = 0; tick < total_sends; ++tick) {
        const auto& [src, dest] = pairs[tick % pairs.size()];
        PacketAE p;
        p.dest = dest;
        p.am = 1;
        p.src = src;
        p.ctr = static_cast<std::uint16_t>(next_ctr[src]++ & 0xFFFF);
        p.payload.resize(4);
        rng.fill_bytes(p.payload);
        rng.fill_bytes(p.mac);
        p.len = static_cast<std::uint8_t>(p.payload.size());

        log(EventKind::Send, p, false);
        ++m.sent;
        if (rng.chance(cfg.p_loss)) {
            log(EventKind::Drop, p, false);
            ++m.lost;
        } else {
            std::uint64_t displacement = rng.uniform(static_cast<std::uint64_t>(cfg.reorder_D) + 1);
            queue.push({tick + displacement, next_seq++, p, false});
        }
        while (!queue.empty() && queue.top().time <= tick) {
            Scheduled item = queue.top();
            queue.pop();
            process_delivery(item, item.time);
        }
    }
    while (!queue.empty()) {
        Scheduled item = queue.top();
        queue.pop();
        process_delivery(item, item.time);
    }

    for (const auto& [dest, det] : detectors) {
        m.epoch_resets += det.epoch_resets();
        std::uint64_t n = peers.at(dest).size();
        m.state_bytes_bitmap += state_bytes_bitmap(cfg.detector, n);
        m.state_bytes_ledger += state_bytes_ledger(cfg.detector, n);
    }
    if (cfg.detector.scheme == Scheme::BloomSingle || cfg.detector.scheme == Scheme::BloomMulti)
        m.fp_predicted = fp_approx(effective_hash_count(cfg.detector));
    return result;
}

namespace {

std::uint32_t axis_count(double value, std::uint64_t max, const std::string& axis) {
    if (value < 0.0 || value > static_cast<double>(max) ||
        value != static_cast<double>(static_cast<std::uint64_t>(value))) {
        throw ConfigError("sweep value for " + axis + " must be an integer in [0, " +
                          std::to_string(max) + "]");
    }
    return static_cast<std::uint32_t>(value);
}

}  // namespace

SimConfig apply_axis(const SimConfig& base, const std::string& axis, double value) {
    SimConfig cfg = base;
    if (axis == "n_nodes") cfg.n_nodes = axis_count(value, 65536, axis);
    else if (axis == "sends_per_node") cfg.sends_per_node = axis_count(value, 65536, axis);
    else if (axis == "p_loss") cfg.p_loss = value;
    else if (axis == "reorder_D") cfg.reorder_D = axis_count(value, 0xFFFFFFFFull, axis);
    else if (axis == "p_capture") cfg.p_capture = value;
    else if (axis == "replays_per_capture")
        cfg.replays_per_capture = axis_count(value, 0xFFFFFFFFull, axis);
    else if (axis == "replay_delay_min")
        cfg.replay_delay_min = axis_count(value, 0xFFFFFFFFull, axis);
    else if (axis == "replay_delay_max")
        cfg.replay_delay_max = axis_count(value, 0xFFFFFFFFull, axis);
    else if (axis == "window") cfg.detector.window = axis_count(value, 65536, axis);
    else if (axis == "filter_bits")
        cfg.detector.filter_bits = axis_count(value, 0xFFFFFFFFull, axis);
    else if (axis == "k") cfg.detector.hash_count = axis_count(value, 9, axis);
    else if (axis == "fp_max") cfg.detector.fp_max = value;
    else if (axis == "seed")
        throw ConfigError("seed cannot be a sweep axis; run seeds derive from the base seed");
    else throw ConfigError("unknown sweep axis: " + axis);
    return cfg;
}

std::vector<RunMetrics> sweep(const SimConfig& base, const std::string& axis,
                              const std::vector<double>& values) {
    std::vector<RunMetrics> rows;
    rows.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        SimConfig cfg = apply_axis(base, axis, values[i]);
        cfg.seed = base.seed + i;
        rows.push_back(run(cfg).metrics);
    }
    return rows;
}

std::string trace_to_tsv(const std::vector<TraceEvent>& trace) {
    std::ostringstream out;
    for (const TraceEvent& ev : trace) {
        out << ev.index << '\t' << event_kind_name(ev.kind) << '\t' << ev.packet.src << '\t'
            << ev.packet.dest << '\t' << ev.packet.ctr << '\t' << (ev.ground_truth ? 1 : 0)
            << '\t' << (ev.has_verdict ? verdict_name(ev.verdict) : "-") << '\n';
    }
    return out.str();
}

}  // namespace replayguard
