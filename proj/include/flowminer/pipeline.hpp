/**
 * @file
 * @brief End-to-end mining: slice, mine binary patterns, chain, prune, merge.
 */

#pragma once

#include "flowminer/baseline.hpp"
#include "flowminer/chaining.hpp"
#include "flowminer/core.hpp"
#include "flowminer/mining.hpp"
#include "flowminer/postprocess.hpp"
#include "flowminer/slicing.hpp"

#include <map>
#include <utility>
#include <vector>

namespace flowminer {

struct PipelineOptions {
    bool slice{ false };
    NoAddressPolicy no_address{ NoAddressPolicy::own_slice };
    MiningOptions mining{};
    ChainOptions chaining{};
};

struct PipelineResult {
    BinaryPatterns binary;
    ChainedSets<Message> chained;
    SequenceSet<Message> forward;   ///< C after redundancy removal
    SequenceSet<Message> backward;  ///< R after redundancy removal
    std::vector<Pattern> patterns;  ///< merged result
};

/// Rule-4 evidence answered from a support index, memoised per message pair.
class IndexEvidence {
  public:
    IndexEvidence(const SupportIndex &index, double threshold) :
        index_{ &index },
        threshold_{ threshold } {}

    EvidenceVerdict operator()(const Message &first, const Message &last) {
        const auto key = std::make_pair(first, last);
        if (const auto it = cache_.find(key); it != cache_.end()) {
            return it->second;
        }
        const PairConfidence pc = index_->pair_confidence(first, last, threshold_ >= 1.0);
        const EvidenceVerdict v{ pc.forward.meets(threshold_), pc.backward.meets(threshold_) };
        cache_.emplace(key, v);
        return v;
    }

  private:
    const SupportIndex *index_;
    double threshold_;
    std::map<std::pair<Message, Message>, EvidenceVerdict> cache_;
};

/// Mines @p input (already sliced, or not) end to end.
[[nodiscard]] inline PipelineResult run_flowminer(const TraceSet &input, const PipelineOptions &opts = {}) {
    const TraceSet sliced = opts.slice ? slice_set(input, opts.no_address) : TraceSet{};
    const TraceSet &traces = opts.slice ? sliced : input;
    const SupportIndex index{ traces };

    PipelineResult result;
    result.binary = mine_binary(index, opts.mining);
    result.chained = chain_all(result.binary.forward, result.binary.backward, IndexEvidence{ index, opts.mining.confidence }, opts.chaining);
    result.forward = remove_redundant(result.chained.forward);
    result.backward = remove_redundant(result.chained.backward);
    result.patterns = merge(result.forward, result.backward, causality_link(opts.mining.causality));

    for (Pattern &p : result.patterns) {
        const auto &stats = p.origin() == Origin::backward ? result.binary.backward_stats : result.binary.forward_stats;
        if (const auto it = stats.find(p.messages()); it != stats.end()) {
            p = Pattern{ p.messages(), p.origin(), {}, it->second };
        }
    }
    return result;
}

/// Alternating baseline with its chaining, on the (optionally sliced) traces.
[[nodiscard]] inline std::vector<Pattern> run_baseline(const TraceSet &input, bool slice = false, NoAddressPolicy policy = NoAddressPolicy::own_slice) {
    const SequenceSet<Message> pairs = slice ? mine_alternating(slice_set(input, policy)) : mine_alternating(input);
    std::vector<Pattern> out;
    for (const auto &seq : chain_alternating(pairs)) {
        // a strict alternation has exact forward and backward confidence
        out.emplace_back(seq, Origin::both);
    }
    return out;
}

}  // namespace flowminer
