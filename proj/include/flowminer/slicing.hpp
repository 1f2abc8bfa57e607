/**
 * @file
 * @brief Address-based trace slicing.
 *
 * Instances of one flow instance share an address, so instances carrying
 * different addresses are never correlated. A trace is split into one
 * sub-trace per address; step order is preserved and emptied steps vanish.
 */

#pragma once

#include "flowminer/core.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace flowminer {

/// What happens to instances that carry no address.
enum class NoAddressPolicy {
    own_slice,  ///< collected in a dedicated sub-trace
    broadcast,  ///< copied into every address sub-trace
    drop,       ///< discarded
};

[[nodiscard]] inline NoAddressPolicy no_address_policy_from_string(std::string_view s) {
    if (s == "own") {
        return NoAddressPolicy::own_slice;
    }
    if (s == "broadcast") {
        return NoAddressPolicy::broadcast;
    }
    if (s == "drop") {
        return NoAddressPolicy::drop;
    }
    throw error{ "unknown no-address policy '" + std::string{ s } + "'" };
}

/// Address of a sub-trace; empty for the address-less slice.
using SliceKey = std::optional<std::uint64_t>;

[[nodiscard]] inline std::string slice_key_name(const SliceKey &key) { return key ? std::to_string(*key) : std::string{ "noaddr" }; }

/**
 * @brief Splits @p t by address.
 *
 * Address slices come first in ascending address order, the address-less slice
 * (own_slice policy) last. Under broadcast, a trace without any address yields
 * a single address-less slice so nothing is lost.
 */
[[nodiscard]] inline std::vector<std::pair<SliceKey, Trace>> slice_trace(const Trace &t, NoAddressPolicy policy = NoAddressPolicy::own_slice) {
    std::map<std::uint64_t, std::vector<Step>> by_address;
    std::vector<Step> unaddressed;
    for (const Step &step : t.steps) {
        for (const MessageInstance &mi : step) {
            if (mi.address) {
                by_address.try_emplace(*mi.address);
            }
        }
    }
    const bool broadcast = policy == NoAddressPolicy::broadcast && !by_address.empty();
    for (const Step &step : t.steps) {
        std::map<std::uint64_t, Step> pieces;
        Step loose;
        for (const MessageInstance &mi : step) {
            if (mi.address) {
                pieces[*mi.address].push_back(mi);
            } else {
                loose.push_back(mi);
            }
        }
        if (broadcast && !loose.empty()) {
            for (auto &[addr, steps] : by_address) {
                Step &piece = pieces[addr];
                piece.insert(piece.end(), loose.begin(), loose.end());
            }
        }
        for (auto &[addr, piece] : pieces) {
            by_address[addr].push_back(std::move(piece));
        }
        if (!loose.empty() && (policy == NoAddressPolicy::own_slice || (policy == NoAddressPolicy::broadcast && !broadcast))) {
            unaddressed.push_back(std::move(loose));
        }
    }
    std::vector<std::pair<SliceKey, Trace>> out;
    for (auto &[addr, steps] : by_address) {
        out.emplace_back(addr, Trace{ t.id + "@" + std::to_string(addr), std::move(steps) });
    }
    if (!unaddressed.empty()) {
        out.emplace_back(std::nullopt, Trace{ t.id + "@noaddr", std::move(unaddressed) });
    }
    return out;
}

/// Slices every trace. Sub-trace ids are `<origin id>@<address|noaddr>`.
[[nodiscard]] inline TraceSet slice_set(const TraceSet &set, NoAddressPolicy policy = NoAddressPolicy::own_slice) {
    TraceSet out;
    for (const Trace &t : set.traces) {
        for (auto &[key, sub] : slice_trace(t, policy)) {
            out.traces.push_back(std::move(sub));
        }
    }
    return out;
}

}  // namespace flowminer
