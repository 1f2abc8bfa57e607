/**
 * @file
 * @brief Growing binary patterns into longer ones.
 *
 * Two patterns chain when a non-empty proper suffix of the first equals a
 * proper prefix of the second; the result is the first followed by the rest of
 * the second. Four rules apply, in order:
 *
 *  1. closure of C under chaining (forward confidence carries over);
 *  2. closure of R under chaining (backward confidence carries over);
 *  3. R patterns extended by C patterns, added to R;
 *  4. C patterns extended by R patterns, kept only when the end-to-end pair
 *     (first of the C pattern, last of the R pattern) has qualifying confidence
 *     over the traces: forward adds to C, backward adds to R.
 */

#pragma once

#include "flowminer/core.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace flowminer {

template <typename Sym>
[[nodiscard]] bool all_unique(const Sequence<Sym> &seq) {
    Sequence<Sym> sorted = seq;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

/**
 * @brief Chains @p p1 and @p p2 over their longest suffix/prefix overlap.
 *
 * Returns nullopt when there is no overlap or the chained sequence would repeat
 * a message.
 */
template <typename Sym>
[[nodiscard]] std::optional<Sequence<Sym>> chain_overlap(const Sequence<Sym> &p1, const Sequence<Sym> &p2) {
    if (p1.size() < 2 || p2.size() < 2) {
        return std::nullopt;
    }
    for (std::size_t len = std::min(p1.size(), p2.size()) - 1; len >= 1; --len) {
        if (std::equal(p1.end() - static_cast<std::ptrdiff_t>(len), p1.end(), p2.begin())) {
            Sequence<Sym> out = p1;
            out.insert(out.end(), p2.begin() + static_cast<std::ptrdiff_t>(len), p2.end());
            if (!all_unique(out)) {
                return std::nullopt;
            }
            return out;
        }
    }
    return std::nullopt;
}

namespace detail {

template <typename Sym>
using FirstIndex = std::map<Sym, std::vector<const Sequence<Sym> *>>;

template <typename Sym, typename Range>
[[nodiscard]] FirstIndex<Sym> index_by_first(const Range &patterns) {
    FirstIndex<Sym> index;
    for (const Sequence<Sym> &p : patterns) {
        if (!p.empty()) {
            index[p.front()].push_back(&p);
        }
    }
    return index;
}

/// Calls @p emit with every chain of p1 against the partners indexed in @p partners.
template <typename Sym, typename Emit>
void chain_against(const Sequence<Sym> &p1, const FirstIndex<Sym> &partners, Emit &&emit) {
    for (std::size_t i = 1; i < p1.size(); ++i) {
        const auto it = partners.find(p1[i]);
        if (it == partners.end()) {
            continue;
        }
        for (const Sequence<Sym> *p2 : it->second) {
            if (auto chained = chain_overlap(p1, *p2)) {
                emit(*p2, std::move(*chained));
            }
        }
    }
}

}  // namespace detail

/**
 * @brief Least fixpoint of @p set under pairwise chaining.
 *
 * Semi-naive: each round only chains pairs involving a pattern added in the
 * previous round. Terminates because chained patterns never repeat a message.
 */
template <typename Sym>
void close_under_chaining(SequenceSet<Sym> &set) {
    SequenceSet<Sym> frontier = set;
    while (!frontier.empty()) {
        const auto all_index = detail::index_by_first<Sym>(set);
        const auto new_index = detail::index_by_first<Sym>(frontier);
        SequenceSet<Sym> added;
        const auto keep = [&](const Sequence<Sym> &, Sequence<Sym> chained) {
            if (!set.contains(chained)) {
                added.insert(std::move(chained));
            }
        };
        for (const Sequence<Sym> &p1 : frontier) {
            detail::chain_against(p1, all_index, keep);
        }
        for (const Sequence<Sym> &p1 : set) {
            if (!frontier.contains(p1)) {
                detail::chain_against(p1, new_index, keep);
            }
        }
        set.insert(added.begin(), added.end());
        frontier = std::move(added);
    }
}

template <typename Sym>
[[nodiscard]] SequenceSet<Sym> chain_rule1(SequenceSet<Sym> forward) {
    close_under_chaining(forward);
    return forward;
}

template <typename Sym>
[[nodiscard]] SequenceSet<Sym> chain_rule2(SequenceSet<Sym> backward) {
    close_under_chaining(backward);
    return backward;
}

/// One pass of R patterns extended by C patterns. The original R patterns are kept.
template <typename Sym>
[[nodiscard]] SequenceSet<Sym> chain_rule3(SequenceSet<Sym> backward, const SequenceSet<Sym> &forward) {
    const auto index = detail::index_by_first<Sym>(forward);
    SequenceSet<Sym> added;
    for (const Sequence<Sym> &p1 : backward) {
        detail::chain_against(p1, index, [&](const Sequence<Sym> &, Sequence<Sym> chained) { added.insert(std::move(chained)); });
    }
    backward.insert(added.begin(), added.end());
    return backward;
}

/// Outcome of the end-to-end confidence check used by rule 4.
struct EvidenceVerdict {
    bool forward{ false };
    bool backward{ false };
};

template <typename Sym>
struct ChainedSets {
    SequenceSet<Sym> forward;
    SequenceSet<Sym> backward;
};

/**
 * @brief Evidence-oriented chaining of C patterns with R patterns.
 *
 * @p evidence is called as `evidence(first, last)` and tells whether
 * `first -> last` has qualifying forward and/or backward confidence.
 */
template <typename Sym, typename Evidence>
[[nodiscard]] ChainedSets<Sym> chain_rule4_evidence(SequenceSet<Sym> forward, SequenceSet<Sym> backward, Evidence &&evidence) {
    const auto index = detail::index_by_first<Sym>(backward);
    SequenceSet<Sym> to_forward;
    SequenceSet<Sym> to_backward;
    for (const Sequence<Sym> &p1 : forward) {
        detail::chain_against(p1, index, [&](const Sequence<Sym> &p2, Sequence<Sym> chained) {
            const EvidenceVerdict v = evidence(p1.front(), p2.back());
            if (v.forward) {
                to_forward.insert(chained);
            }
            if (v.backward) {
                to_backward.insert(std::move(chained));
            }
        });
    }
    forward.insert(to_forward.begin(), to_forward.end());
    backward.insert(to_backward.begin(), to_backward.end());
    return { std::move(forward), std::move(backward) };
}

struct ChainOptions {
    bool evidence_rule{ true };
};

/// Rules 1 to 4 in order.
template <typename Sym, typename Evidence>
[[nodiscard]] ChainedSets<Sym> chain_all(SequenceSet<Sym> forward, SequenceSet<Sym> backward, Evidence &&evidence, const ChainOptions &opts = {}) {
    forward = chain_rule1(std::move(forward));
    backward = chain_rule2(std::move(backward));
    backward = chain_rule3(std::move(backward), forward);
    if (!opts.evidence_rule) {
        return { std::move(forward), std::move(backward) };
    }
    return chain_rule4_evidence(std::move(forward), std::move(backward), std::forward<Evidence>(evidence));
}

}  // namespace flowminer
