/**
 * @file
 * @brief Synthetic trace generation from ground-truth sequences.
 *
 * Each trace executes a fresh pool holding `instances_per_pattern` instances of
 * every ground-truth sequence, under one of three scheduling regimes:
 *
 *  - sm_ni: instances run atomically back to back, one message per step;
 *  - sm_i:  one message per step, taken from a uniformly chosen unfinished instance;
 *  - mm_i:  each step takes the next message of k distinct unfinished instances,
 *           k uniform in [1, min(max_batch, #unfinished)].
 */

#pragma once

#include "flowminer/core.hpp"
#include "flowminer/flow.hpp"
#include "flowminer/random.hpp"

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flowminer {

enum class GenMode { sm_ni, sm_i, mm_i };
enum class AddressMode { none, per_instance };

[[nodiscard]] inline std::string_view to_string(GenMode m) noexcept {
    switch (m) {
        case GenMode::sm_ni:
            return "sm-ni";
        case GenMode::sm_i:
            return "sm-i";
        case GenMode::mm_i:
            return "mm-i";
    }
    return "?";
}

[[nodiscard]] inline GenMode gen_mode_from_string(std::string_view s) {
    if (s == "sm-ni" || s == "SM_NI") {
        return GenMode::sm_ni;
    }
    if (s == "sm-i" || s == "SM_I") {
        return GenMode::sm_i;
    }
    if (s == "mm-i" || s == "MM_I") {
        return GenMode::mm_i;
    }
    throw error{ "unknown generation mode '" + std::string{ s } + "'" };
}

struct GenConfig {
    GenMode mode{ GenMode::sm_ni };
    std::size_t instances_per_pattern{ 10 };
    std::size_t num_traces{ 100 };
    std::uint64_t seed{ 0 };
    std::size_t max_batch{ 4 };
    /// Cap on simultaneously started instances in the interleaved modes; 0 = unbounded.
    std::size_t max_active{ 0 };
    AddressMode address_mode{ AddressMode::none };
    std::uint64_t address_pool{ 1 };

    void validate() const {
        if (instances_per_pattern == 0 || num_traces == 0) {
            throw error{ "instances and traces must be positive" };
        }
        if (max_batch == 0) {
            throw error{ "max_batch must be at least 1" };
        }
        if (address_mode == AddressMode::per_instance && address_pool == 0) {
            throw error{ "address_pool must be at least 1" };
        }
    }
};

/// Lifetime of one executed instance, in step indices (inclusive).
struct InstanceSpan {
    std::size_t first_step{ 0 };
    std::size_t last_step{ 0 };
};

struct InstanceRecord {
    std::string id;
    std::size_t sequence{ 0 };  ///< index into the ground truth
    InstanceSpan span{};
    std::optional<std::uint64_t> address{};
};

struct TraceMetadata {
    std::string trace_id;
    std::vector<InstanceRecord> instances;
};

struct GenMetadata {
    GenConfig config{};
    std::vector<TraceMetadata> traces;
};

struct GeneratedTraces {
    TraceSet traces;
    GenMetadata metadata;
};

/**
 * @brief Gives each instance an address shared by all of its messages.
 *
 * Instances whose lifetimes overlap (including sharing a step) get distinct
 * addresses; an address is reused, lowest first, once its instance has finished.
 * Throws when more than @p pool instances are alive at once.
 */
[[nodiscard]] inline std::vector<std::uint64_t> assign_addresses(std::span<const InstanceSpan> spans, std::uint64_t pool) {
    std::vector<std::size_t> order(spans.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return spans[a].first_step < spans[b].first_step; });

    std::vector<std::uint64_t> result(spans.size(), 0);
    std::set<std::pair<std::size_t, std::size_t>> alive;  // (last_step, instance)
    std::set<std::uint64_t> released;
    std::uint64_t fresh = 0;
    for (std::size_t inst : order) {
        const std::size_t start = spans[inst].first_step;
        while (!alive.empty() && alive.begin()->first < start) {
            released.insert(result[alive.begin()->second]);
            alive.erase(alive.begin());
        }
        if (!released.empty()) {
            result[inst] = *released.begin();
            released.erase(released.begin());
        } else if (fresh < pool) {
            result[inst] = fresh++;
        } else {
            throw error{ "address pool exhausted: more than " + std::to_string(pool) + " instances alive at step " + std::to_string(start) };
        }
        alive.emplace(spans[inst].last_step, inst);
    }
    return result;
}

namespace detail {

struct Running {
    std::size_t instance;  // index into the trace's instance records
    std::size_t next{ 0 };
};

}  // namespace detail

/// Generates one trace; @p trace_index selects the derived seed.
[[nodiscard]] inline std::pair<Trace, TraceMetadata> generate_trace(const GroundTruth &gt, const GenConfig &cfg, std::size_t trace_index) {
    Rng rng{ cfg.seed ^ static_cast<std::uint64_t>(trace_index) };
    const std::string trace_id = std::to_string(trace_index);

    TraceMetadata meta{ trace_id, {} };
    for (std::size_t g = 0; g < gt.size(); ++g) {
        for (std::size_t k = 0; k < cfg.instances_per_pattern; ++k) {
            meta.instances.push_back({ "t" + trace_id + ".i" + std::to_string(meta.instances.size()), g, {}, std::nullopt });
        }
    }
    std::vector<std::size_t> pool(meta.instances.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        pool[i] = i;
    }
    shuffle(pool, rng);

    // (instance, position in its sequence) per step
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> plan;
    const auto length = [&](std::size_t inst) { return gt.sequences[meta.instances[inst].sequence].size(); };

    if (cfg.mode == GenMode::sm_ni) {
        for (std::size_t inst : pool) {
            for (std::size_t pos = 0; pos < length(inst); ++pos) {
                plan.push_back({ { inst, pos } });
            }
        }
    } else {
        const std::size_t cap = cfg.max_active == 0 ? pool.size() : cfg.max_active;
        std::size_t pooled = 0;
        std::vector<detail::Running> active;
        const auto refill = [&] {
            while (active.size() < cap && pooled < pool.size()) {
                active.push_back({ pool[pooled++], 0 });
            }
        };
        refill();
        std::vector<std::size_t> slots;
        while (!active.empty()) {
            std::size_t k = 1;
            if (cfg.mode == GenMode::mm_i) {
                k = 1 + uniform_index(rng, std::min(cfg.max_batch, active.size()));
            }
            slots.resize(active.size());
            for (std::size_t i = 0; i < slots.size(); ++i) {
                slots[i] = i;
            }
            // partial Fisher-Yates: the first k slots are a uniform k-subset
            for (std::size_t i = 0; i < k; ++i) {
                std::swap(slots[i], slots[i + uniform_index(rng, slots.size() - i)]);
            }
            std::vector<std::pair<std::size_t, std::size_t>> step;
            for (std::size_t i = 0; i < k; ++i) {
                detail::Running &r = active[slots[i]];
                step.emplace_back(r.instance, r.next++);
            }
            plan.push_back(std::move(step));
            std::erase_if(active, [&](const detail::Running &r) { return r.next == length(r.instance); });
            refill();
        }
    }

    for (std::size_t s = 0; s < plan.size(); ++s) {
        for (const auto &[inst, pos] : plan[s]) {
            InstanceSpan &span = meta.instances[inst].span;
            if (pos == 0) {
                span.first_step = s;
            }
            if (pos + 1 == length(inst)) {
                span.last_step = s;
            }
        }
    }
    if (cfg.address_mode == AddressMode::per_instance) {
        std::vector<InstanceSpan> spans;
        spans.reserve(meta.instances.size());
        for (const InstanceRecord &r : meta.instances) {
            spans.push_back(r.span);
        }
        const auto addresses = assign_addresses(spans, cfg.address_pool);
        for (std::size_t i = 0; i < addresses.size(); ++i) {
            meta.instances[i].address = addresses[i];
        }
    }

    Trace trace{ trace_id, {} };
    trace.steps.reserve(plan.size());
    for (const auto &planned : plan) {
        Step step;
        step.reserve(planned.size());
        for (const auto &[inst, pos] : planned) {
            const InstanceRecord &rec = meta.instances[inst];
            step.push_back({ gt.sequences[rec.sequence][pos], rec.address, rec.id });
        }
        trace.steps.push_back(std::move(step));
    }
    return { std::move(trace), std::move(meta) };
}

/// Generates `cfg.num_traces` traces. Deterministic in (gt, cfg).
[[nodiscard]] inline GeneratedTraces generate(const GroundTruth &gt, const GenConfig &cfg) {
    cfg.validate();
    if (gt.empty()) {
        throw error{ "cannot generate traces from an empty ground truth" };
    }
    GeneratedTraces out;
    out.metadata.config = cfg;
    for (std::size_t i = 0; i < cfg.num_traces; ++i) {
        auto [trace, meta] = generate_trace(gt, cfg, i);
        out.traces.traces.push_back(std::move(trace));
        out.metadata.traces.push_back(std::move(meta));
    }
    return out;
}

/// Metadata sidecar document.
[[nodiscard]] inline nlohmann::ordered_json metadata_to_json(const GenMetadata &meta, const GroundTruth &gt) {
    nlohmann::ordered_json doc;
    doc["mode"] = std::string{ to_string(meta.config.mode) };
    doc["seed"] = meta.config.seed;
    doc["instances_per_pattern"] = meta.config.instances_per_pattern;
    doc["max_batch"] = meta.config.max_batch;
    doc["max_active"] = meta.config.max_active;
    doc["address_mode"] = meta.config.address_mode == AddressMode::per_instance ? "per-instance" : "none";
    doc["address_pool"] = meta.config.address_pool;
    auto &seqs = doc["ground_truth"] = nlohmann::ordered_json::array();
    for (const auto &seq : gt.sequences) {
        auto tokens = nlohmann::ordered_json::array();
        for (const Message &m : seq) {
            tokens.push_back(m.render());
        }
        seqs.push_back(std::move(tokens));
    }
    auto &traces = doc["traces"] = nlohmann::ordered_json::array();
    for (const TraceMetadata &t : meta.traces) {
        nlohmann::ordered_json entry;
        entry["id"] = t.trace_id;
        auto &insts = entry["instances"] = nlohmann::ordered_json::array();
        for (const InstanceRecord &r : t.instances) {
            nlohmann::ordered_json inst;
            inst["id"] = r.id;
            inst["sequence"] = r.sequence;
            inst["first_step"] = r.span.first_step;
            inst["last_step"] = r.span.last_step;
            if (r.address) {
                inst["address"] = *r.address;
            }
            insts.push_back(std::move(inst));
        }
        traces.push_back(std::move(entry));
    }
    return doc;
}

}  // namespace flowminer
