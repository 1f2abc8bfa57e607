/**
 * @file
 * @brief Supports, forward/backward confidence and binary pattern mining.
 *
 * Occurrences of a sequence in a trace are counted as the maximum number of
 * instance-disjoint embeddings at strictly increasing step indices. Two
 * instances in the same step are unordered and never form an occurrence.
 */

#pragma once

#include "flowminer/core.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace flowminer {

/// Reading of the structural causality filter.
enum class Causality {
    dest_src,          ///< m1.dest == m2.src: m2 is the receiver's reaction
    src_dest_literal,  ///< m1.src == m2.dest, the formula as literally written
    off,
};

[[nodiscard]] inline Causality causality_from_string(std::string_view s) {
    if (s == "dest-src") {
        return Causality::dest_src;
    }
    if (s == "src-dest") {
        return Causality::src_dest_literal;
    }
    if (s == "off") {
        return Causality::off;
    }
    throw error{ "unknown causality mode '" + std::string{ s } + "'" };
}

[[nodiscard]] inline bool causal(const Message &m1, const Message &m2, Causality mode = Causality::dest_src) {
    switch (mode) {
        case Causality::dest_src:
            return m1.dest() == m2.src();
        case Causality::src_dest_literal:
            return m1.src() == m2.dest();
        case Causality::off:
            return true;
    }
    return false;
}

[[nodiscard]] inline Pattern::Link causality_link(Causality mode) {
    return [mode](const Message &a, const Message &b) { return causal(a, b, mode); };
}

/// Instances of @p m over all steps of @p t.
[[nodiscard]] inline std::size_t supp_message(const Message &m, const Trace &t) {
    std::size_t n = 0;
    for (const Step &step : t.steps) {
        n += static_cast<std::size_t>(std::count_if(step.begin(), step.end(), [&](const MessageInstance &mi) { return mi.message == m; }));
    }
    return n;
}

namespace detail {

// Distinct symbols: an instance fits exactly one stage, and advancing a waiting
// partial occurrence is never worse than leaving it.
[[nodiscard]] inline std::size_t supp_seq_distinct(std::span<const Message> s, const Trace &t) {
    const std::size_t len = s.size();
    std::vector<std::size_t> waiting(len, 0);  // waiting[k]: partials with k symbols matched
    std::vector<std::size_t> arrived(len, 0);
    std::size_t complete = 0;
    for (const Step &step : t.steps) {
        std::fill(arrived.begin(), arrived.end(), 0);
        for (const MessageInstance &mi : step) {
            const auto it = std::find(s.begin(), s.end(), mi.message);
            if (it == s.end()) {
                continue;
            }
            const auto stage = static_cast<std::size_t>(it - s.begin());
            if (stage > 0) {
                if (waiting[stage] == 0) {
                    continue;
                }
                --waiting[stage];
            }
            if (stage + 1 == len) {
                ++complete;
            } else {
                ++arrived[stage + 1];
            }
        }
        for (std::size_t k = 1; k < len; ++k) {
            waiting[k] += arrived[k];
        }
    }
    return complete;
}

// Repeated symbols: an instance may start, extend or finish an occurrence, and
// the best choice depends on the future. Partial occurrences with the same
// number of matched symbols are interchangeable, so the search runs over
// vectors of per-stage counts, keeping the best completion count for each.
[[nodiscard]] inline std::size_t supp_seq_general(std::span<const Message> s, const Trace &t) {
    const std::size_t len = s.size();
    // state layout: [0, len) waiting per stage, [len, 2 len) arrived in the current step
    using State = std::vector<std::uint32_t>;
    std::map<State, std::size_t> states{ { State(2 * len, 0), 0 } };
    for (const Step &step : t.steps) {
        for (const MessageInstance &mi : step) {
            std::map<State, std::size_t> next;
            const auto offer = [&](const State &st, std::size_t done) {
                auto [it, inserted] = next.emplace(st, done);
                if (!inserted && it->second < done) {
                    it->second = done;
                }
            };
            for (const auto &[st, done] : states) {
                offer(st, done);
                for (std::size_t k = 0; k < len; ++k) {
                    if (s[k] != mi.message || (k > 0 && st[k] == 0)) {
                        continue;
                    }
                    State moved = st;
                    if (k > 0) {
                        --moved[k];
                    }
                    if (k + 1 == len) {
                        offer(moved, done + 1);
                    } else {
                        ++moved[len + k + 1];
                        offer(moved, done);
                    }
                }
            }
            states = std::move(next);
        }
        std::map<State, std::size_t> settled;
        for (const auto &[key, done] : states) {
            State st = key;
            for (std::size_t k = 0; k < len; ++k) {
                st[k] += st[len + k];
                st[len + k] = 0;
            }
            auto [it, inserted] = settled.emplace(std::move(st), done);
            if (!inserted && it->second < done) {
                it->second = done;
            }
        }
        states = std::move(settled);
    }
    std::size_t best = 0;
    for (const auto &[st, done] : states) {
        best = std::max(best, done);
    }
    return best;
}

}  // namespace detail

/**
 * @brief Maximum number of disjoint occurrences of @p s in @p t.
 *
 * Partial occurrences are kept as counts per matched-prefix length; a partial
 * extended in a step becomes usable only from the next step on.
 */
[[nodiscard]] inline std::size_t supp_seq(std::span<const Message> s, const Trace &t) {
    if (s.empty()) {
        throw error{ "supp_seq needs a non-empty sequence" };
    }
    std::vector<Message> sorted(s.begin(), s.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
        return detail::supp_seq_distinct(s, t);
    }
    return detail::supp_seq_general(s, t);
}

[[nodiscard]] inline std::size_t supp_seq(std::initializer_list<Message> s, const Trace &t) {
    return supp_seq(std::span<const Message>{ s.begin(), s.size() }, t);
}

namespace detail {

[[nodiscard]] inline Sequence<Message> concat(std::span<const Message> a, std::span<const Message> b) {
    Sequence<Message> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace detail

/// supp(s1#s2) / supp(s1); nullopt when s1 does not occur in @p t.
[[nodiscard]] inline std::optional<double> conf_f(std::span<const Message> s1, std::span<const Message> s2, const Trace &t) {
    const std::size_t den = supp_seq(s1, t);
    if (den == 0) {
        return std::nullopt;
    }
    return static_cast<double>(supp_seq(detail::concat(s1, s2), t)) / static_cast<double>(den);
}

/// supp(s1#s2) / supp(s2); nullopt when s2 does not occur in @p t.
[[nodiscard]] inline std::optional<double> conf_b(std::span<const Message> s1, std::span<const Message> s2, const Trace &t) {
    const std::size_t den = supp_seq(s2, t);
    if (den == 0) {
        return std::nullopt;
    }
    return static_cast<double>(supp_seq(detail::concat(s1, s2), t)) / static_cast<double>(den);
}

/// Confidence over a trace set.
struct SetConfidence {
    /// Mean of the per-trace confidence over the traces where it is defined.
    std::optional<double> average{};
    /// Defined somewhere, and numerator support equals denominator support on every defined trace.
    bool exact_100{ false };
    std::size_t defined_traces{ 0 };

    /// Qualification test; a threshold of 1 or more demands exactness.
    [[nodiscard]] bool meets(double threshold) const noexcept {
        if (threshold >= 1.0) {
            return exact_100;
        }
        return average.has_value() && *average >= threshold;
    }
};

namespace detail {

/// Folds per-trace (numerator, denominator) supports; the summation order is canonical.
class ConfidenceFold {
  public:
    void add(std::size_t num, std::size_t den) {
        if (den == 0) {
            return;
        }
        ratios_.push_back(static_cast<double>(num) / static_cast<double>(den));
        exact_ = exact_ && num == den;
    }

    [[nodiscard]] SetConfidence result() {
        SetConfidence out;
        out.defined_traces = ratios_.size();
        if (!ratios_.empty()) {
            std::sort(ratios_.begin(), ratios_.end());
            double sum = 0.0;
            for (double r : ratios_) {
                sum += r;
            }
            out.average = sum / static_cast<double>(ratios_.size());
            out.exact_100 = exact_;
        }
        return out;
    }

  private:
    std::vector<double> ratios_;
    bool exact_{ true };
};

}  // namespace detail

[[nodiscard]] inline SetConfidence conf_f_set(std::span<const Message> s1, std::span<const Message> s2, const TraceSet &set) {
    detail::ConfidenceFold fold;
    const auto joined = detail::concat(s1, s2);
    for (const Trace &t : set.traces) {
        fold.add(supp_seq(joined, t), supp_seq(s1, t));
    }
    return fold.result();
}

[[nodiscard]] inline SetConfidence conf_b_set(std::span<const Message> s1, std::span<const Message> s2, const TraceSet &set) {
    detail::ConfidenceFold fold;
    const auto joined = detail::concat(s1, s2);
    for (const Trace &t : set.traces) {
        fold.add(supp_seq(joined, t), supp_seq(s2, t));
    }
    return fold.result();
}

/// Forward and backward confidence of one ordered message pair.
struct PairConfidence {
    SetConfidence forward;
    SetConfidence backward;
};

/**
 * @brief Interned, message-major occurrence index over a trace set.
 *
 * For every message, the traces it occurs in and the step index of each
 * instance. Answers pair confidences without rescanning whole traces.
 */
class SupportIndex {
  public:
    using Id = std::uint32_t;

    explicit SupportIndex(const TraceSet &set) :
        trace_count_{ set.size() } {
        alphabet_ = set.alphabet();
        for (std::size_t i = 0; i < alphabet_.size(); ++i) {
            ids_.emplace(alphabet_[i], static_cast<Id>(i));
        }
        postings_.resize(alphabet_.size());
        for (std::size_t ti = 0; ti < set.traces.size(); ++ti) {
            const Trace &t = set.traces[ti];
            for (std::size_t si = 0; si < t.steps.size(); ++si) {
                for (const MessageInstance &mi : t.steps[si]) {
                    auto &list = postings_[ids_.at(mi.message)];
                    if (list.empty() || list.back().trace != ti) {
                        list.push_back({ static_cast<std::uint32_t>(ti), {} });
                    }
                    list.back().steps.push_back(static_cast<std::uint32_t>(si));
                }
            }
        }
    }

    [[nodiscard]] const std::vector<Message> &alphabet() const noexcept { return alphabet_; }
    [[nodiscard]] std::size_t trace_count() const noexcept { return trace_count_; }

    [[nodiscard]] std::optional<Id> id(const Message &m) const {
        const auto it = ids_.find(m);
        return it == ids_.end() ? std::nullopt : std::optional<Id>{ it->second };
    }

    /// Disjoint occurrences of (a, b) given the sorted step lists of a and b in one trace.
    [[nodiscard]] static std::size_t pair_support(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
        std::size_t i = 0, j = 0, pending = 0, matched = 0;
        while (j < b.size()) {
            const std::uint32_t step = i < a.size() ? std::min(a[i], b[j]) : b[j];
            std::size_t ca = 0, cb = 0;
            for (; i < a.size() && a[i] == step; ++i) {
                ++ca;
            }
            for (; j < b.size() && b[j] == step; ++j) {
                ++cb;
            }
            const std::size_t use = std::min(pending, cb);
            matched += use;
            pending = pending - use + ca;
        }
        return matched;
    }

    /**
     * @brief Confidences of the ordered pair (a, b).
     *
     * With @p exact_only set, evaluation stops at the first trace that rules out
     * exactness; a failed direction then reports exact_100 = false and no average.
     */
    [[nodiscard]] PairConfidence pair_confidence(Id a, Id b, bool exact_only = false) const {
        const auto &pa = postings_[a];
        const auto &pb = postings_[b];
        PairConfidence out;
        if (exact_only) {
            out.forward = exact_direction(pa, pb, true);
            out.backward = exact_direction(pa, pb, false);
            return out;
        }
        detail::ConfidenceFold fwd, bwd;
        std::size_t i = 0, j = 0;
        while (i < pa.size() || j < pb.size()) {
            const std::uint32_t ta = i < pa.size() ? pa[i].trace : UINT32_MAX;
            const std::uint32_t tb = j < pb.size() ? pb[j].trace : UINT32_MAX;
            if (ta < tb) {
                fwd.add(0, pa[i].steps.size());
                ++i;
            } else if (tb < ta) {
                bwd.add(0, pb[j].steps.size());
                ++j;
            } else {
                const std::size_t num = pair_support(pa[i].steps, pb[j].steps);
                fwd.add(num, pa[i].steps.size());
                bwd.add(num, pb[j].steps.size());
                ++i;
                ++j;
            }
        }
        out.forward = fwd.result();
        out.backward = bwd.result();
        return out;
    }

    [[nodiscard]] PairConfidence pair_confidence(const Message &a, const Message &b, bool exact_only = false) const {
        const auto ia = id(a);
        const auto ib = id(b);
        if (!ia || !ib) {
            PairConfidence out;
            // a present alone: forward defined with ratio 0; b present alone: backward likewise
            if (ia) {
                detail::ConfidenceFold fold;
                for (const auto &occ : postings_[*ia]) {
                    fold.add(0, occ.steps.size());
                }
                out.forward = fold.result();
            }
            if (ib) {
                detail::ConfidenceFold fold;
                for (const auto &occ : postings_[*ib]) {
                    fold.add(0, occ.steps.size());
                }
                out.backward = fold.result();
            }
            return out;
        }
        return pair_confidence(*ia, *ib, exact_only);
    }

  private:
    struct Occurrence {
        std::uint32_t trace;
        std::vector<std::uint32_t> steps;
    };

    // forward: every trace holding a must match all of its a's; backward: same for b
    [[nodiscard]] static SetConfidence exact_direction(const std::vector<Occurrence> &pa, const std::vector<Occurrence> &pb, bool forward) {
        const auto &driver = forward ? pa : pb;
        const auto &other = forward ? pb : pa;
        SetConfidence out;
        if (driver.empty()) {
            return out;
        }
        std::size_t j = 0;
        for (const Occurrence &occ : driver) {
            while (j < other.size() && other[j].trace < occ.trace) {
                ++j;
            }
            if (j == other.size() || other[j].trace != occ.trace || other[j].steps.size() < occ.steps.size()) {
                return SetConfidence{ std::nullopt, false, 0 };
            }
            const std::size_t num = forward ? pair_support(occ.steps, other[j].steps) : pair_support(other[j].steps, occ.steps);
            if (num != occ.steps.size()) {
                return SetConfidence{ std::nullopt, false, 0 };
            }
        }
        return SetConfidence{ 1.0, true, driver.size() };
    }

    std::size_t trace_count_;
    std::vector<Message> alphabet_;
    std::map<Message, Id> ids_;
    std::vector<std::vector<Occurrence>> postings_;
};

struct MiningOptions {
    /// 1.0 means exact 100% confidence; lower values compare the averaged confidence.
    double confidence{ 1.0 };
    Causality causality{ Causality::dest_src };
    unsigned jobs{ 1 };
};

/// Binary patterns qualified by forward (C) and backward (R) confidence.
struct BinaryPatterns {
    SequenceSet<Message> forward;
    SequenceSet<Message> backward;
    std::map<Sequence<Message>, SupportStats> forward_stats;
    std::map<Sequence<Message>, SupportStats> backward_stats;
};

/**
 * @brief Mines all causal message pairs with qualifying confidence.
 *
 * Pairs are evaluated independently; with `jobs > 1` they are split across
 * worker threads. Each pair folds its traces in index order, so the result does
 * not depend on the number of workers.
 */
[[nodiscard]] inline BinaryPatterns mine_binary(const SupportIndex &index, const MiningOptions &opts = {}) {
    const auto &alphabet = index.alphabet();
    std::vector<std::pair<SupportIndex::Id, SupportIndex::Id>> candidates;
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
        for (std::size_t b = 0; b < alphabet.size(); ++b) {
            if (a != b && causal(alphabet[a], alphabet[b], opts.causality)) {
                candidates.emplace_back(static_cast<SupportIndex::Id>(a), static_cast<SupportIndex::Id>(b));
            }
        }
    }
    const bool exact = opts.confidence >= 1.0;
    std::vector<PairConfidence> results(candidates.size());
    const auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            results[k] = index.pair_confidence(candidates[k].first, candidates[k].second, exact);
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min<std::size_t>(opts.jobs, candidates.size()));
    if (jobs <= 1) {
        work(0, candidates.size());
    } else {
        std::vector<std::jthread> workers;
        const std::size_t chunk = (candidates.size() + jobs - 1) / jobs;
        for (std::size_t begin = 0; begin < candidates.size(); begin += chunk) {
            workers.emplace_back(work, begin, std::min(candidates.size(), begin + chunk));
        }
    }

    BinaryPatterns out;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const Sequence<Message> pair{ alphabet[candidates[k].first], alphabet[candidates[k].second] };
        const PairConfidence &pc = results[k];
        if (pc.forward.meets(opts.confidence)) {
            out.forward.insert(pair);
            out.forward_stats[pair] = { pc.forward.defined_traces, pc.forward.average.value_or(0.0) };
        }
        if (pc.backward.meets(opts.confidence)) {
            out.backward.insert(pair);
            out.backward_stats[pair] = { pc.backward.defined_traces, pc.backward.average.value_or(0.0) };
        }
    }
    return out;
}

[[nodiscard]] inline BinaryPatterns mine_binary(const TraceSet &set, const MiningOptions &opts = {}) {
    return mine_binary(SupportIndex{ set }, opts);
}

}  // namespace flowminer
