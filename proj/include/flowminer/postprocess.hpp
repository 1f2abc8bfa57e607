/**
 * @file
 * @brief Redundancy removal and the final C/R merge.
 */

#pragma once

#include "flowminer/core.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace flowminer {

template <typename Sym>
[[nodiscard]] bool is_prefix_of(const Sequence<Sym> &p, const Sequence<Sym> &q) {
    return p.size() <= q.size() && std::equal(p.begin(), p.end(), q.begin());
}

template <typename Sym>
[[nodiscard]] bool is_suffix_of(const Sequence<Sym> &p, const Sequence<Sym> &q) {
    return p.size() <= q.size() && std::equal(p.rbegin(), p.rend(), q.rbegin());
}

/// Drops every pattern that is a contiguous prefix or suffix of another pattern in @p set.
template <typename Sym>
[[nodiscard]] SequenceSet<Sym> remove_redundant(const SequenceSet<Sym> &set) {
    // a redundant pattern shares its first or its last symbol with a longer one
    std::map<Sym, std::vector<const Sequence<Sym> *>> by_first;
    std::map<Sym, std::vector<const Sequence<Sym> *>> by_last;
    for (const Sequence<Sym> &q : set) {
        if (!q.empty()) {
            by_first[q.front()].push_back(&q);
            by_last[q.back()].push_back(&q);
        }
    }
    SequenceSet<Sym> out;
    for (const Sequence<Sym> &p : set) {
        bool redundant = false;
        if (!p.empty()) {
            for (const Sequence<Sym> *q : by_first[p.front()]) {
                if (q->size() > p.size() && is_prefix_of(p, *q)) {
                    redundant = true;
                    break;
                }
            }
            for (const Sequence<Sym> *q : by_last[p.back()]) {
                if (redundant) {
                    break;
                }
                if (q->size() > p.size() && is_suffix_of(p, *q)) {
                    redundant = true;
                }
            }
        }
        if (!redundant) {
            out.insert(p);
        }
    }
    return out;
}

/// Union of the post-processed sets; a sequence found in both is tagged with both origins.
[[nodiscard]] inline std::vector<Pattern> merge(const SequenceSet<Message> &forward, const SequenceSet<Message> &backward,
                                                const Pattern::Link &link = {}) {
    std::map<Sequence<Message>, Origin> origins;
    for (const auto &p : forward) {
        origins.emplace(p, Origin::forward);
    }
    for (const auto &p : backward) {
        const auto [it, inserted] = origins.emplace(p, Origin::backward);
        if (!inserted) {
            it->second = it->second | Origin::backward;
        }
    }
    std::vector<Pattern> out;
    out.reserve(origins.size());
    for (const auto &[seq, origin] : origins) {
        out.emplace_back(seq, origin, link);
    }
    return out;
}

}  // namespace flowminer
