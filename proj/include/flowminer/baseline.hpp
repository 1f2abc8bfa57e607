/**
 * @file
 * @brief Alternating-pattern baseline miner.
 *
 * A pair (A, B) qualifies when, in every trace, the projection of the trace
 * onto {A, B} is a strict alternation A B A B ... A B (possibly empty), and the
 * pair occurs at least once overall. Only the 100% satisfaction regime exists
 * here. Chaining joins pairs into sequences whose every ordered pair qualified.
 */

#pragma once

#include "flowminer/core.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <set>
#include <vector>

namespace flowminer {

/// Raised for traces the single-event baseline cannot read.
class unsupported_trace : public error {
  public:
    using error::error;
};

namespace detail {

// steps of a and b must interleave as a0 < b0 < a1 < b1 < ...
[[nodiscard]] inline bool alternates(const std::vector<std::size_t> &a, const std::vector<std::size_t> &b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!(a[k] < b[k])) {
            return false;
        }
        if (k + 1 < a.size() && !(b[k] < a[k + 1])) {
            return false;
        }
    }
    return true;
}

}  // namespace detail

/// Throws unsupported_trace when any step holds more than one message.
[[nodiscard]] inline SequenceSet<Message> mine_alternating(const TraceSet &set) {
    const std::vector<Message> alphabet = set.alphabet();
    std::map<Message, std::size_t> ids;
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
        ids.emplace(alphabet[i], i);
    }
    // per message: trace index -> step positions
    std::vector<std::map<std::size_t, std::vector<std::size_t>>> positions(alphabet.size());
    for (std::size_t ti = 0; ti < set.traces.size(); ++ti) {
        const Trace &t = set.traces[ti];
        for (std::size_t si = 0; si < t.steps.size(); ++si) {
            if (t.steps[si].size() != 1) {
                throw unsupported_trace{ "trace '" + t.id + "' step " + std::to_string(si) + " holds " + std::to_string(t.steps[si].size()) +
                                         " messages; the alternating miner needs exactly one per step" };
            }
            positions[ids.at(t.steps[si].front().message)][ti].push_back(si);
        }
    }
    SequenceSet<Message> out;
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
        for (std::size_t b = 0; b < alphabet.size(); ++b) {
            if (a == b) {
                continue;
            }
            const auto &pa = positions[a];
            const auto &pb = positions[b];
            // a trace holding only one of the two cannot alternate
            bool ok = pa.size() == pb.size();
            for (auto ia = pa.begin(), ib = pb.begin(); ok && ia != pa.end(); ++ia, ++ib) {
                ok = ia->first == ib->first && detail::alternates(ia->second, ib->second);
            }
            if (ok && !pa.empty()) {
                out.insert({ alphabet[a], alphabet[b] });
            }
        }
    }
    return out;
}

/**
 * @brief Maximal sequences whose every ordered pair (e_i, e_j), i < j, is in @p pairs.
 *
 * A sequence is dropped when another message could be inserted somewhere in it
 * while keeping the property.
 */
template <typename Sym>
[[nodiscard]] SequenceSet<Sym> chain_alternating(const SequenceSet<Sym> &pairs) {
    std::map<Sym, std::set<Sym>> succ;
    std::set<Sym> symbols;
    for (const auto &p : pairs) {
        if (p.size() == 2 && p[0] != p[1]) {
            succ[p[0]].insert(p[1]);
            symbols.insert(p[0]);
            symbols.insert(p[1]);
        }
    }
    const auto has = [&](const Sym &a, const Sym &b) {
        const auto it = succ.find(a);
        return it != succ.end() && it->second.contains(b);
    };
    const auto maximal = [&](const Sequence<Sym> &seq) {
        for (const Sym &v : symbols) {
            if (std::find(seq.begin(), seq.end(), v) != seq.end()) {
                continue;
            }
            // v fits at position i iff seq[j] -> v for j < i and v -> seq[j] for j >= i
            std::size_t prefix = 0;
            while (prefix < seq.size() && has(seq[prefix], v)) {
                ++prefix;
            }
            std::size_t suffix_start = seq.size();
            while (suffix_start > 0 && has(v, seq[suffix_start - 1])) {
                --suffix_start;
            }
            if (suffix_start <= prefix) {
                return false;
            }
        }
        return true;
    };

    SequenceSet<Sym> out;
    Sequence<Sym> seq;
    // candidates: symbols that every element of seq points to
    const auto extend = [&](auto &&self, const std::set<Sym> &candidates) -> void {
        if (seq.size() >= 2 && maximal(seq)) {
            out.insert(seq);
        }
        for (const Sym &v : candidates) {
            std::set<Sym> next;
            const auto it = succ.find(v);
            if (it != succ.end()) {
                std::set_intersection(candidates.begin(), candidates.end(), it->second.begin(), it->second.end(), std::inserter(next, next.end()));
            }
            seq.push_back(v);
            self(self, next);
            seq.pop_back();
        }
    };
    for (const Sym &start : symbols) {
        seq = { start };
        const auto it = succ.find(start);
        if (it != succ.end()) {
            extend(extend, it->second);
        }
    }
    return out;
}

}  // namespace flowminer
