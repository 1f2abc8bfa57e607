/**
 * @file
 * @brief Judging mined patterns against ground-truth sequences.
 *
 * A pattern is valid when some ground-truth sequence orders every pair of its
 * messages the same way, for the pairs whose two messages both appear in that
 * sequence. Precision is the valid fraction of mined patterns; recall is the
 * fraction of ground-truth sequences mined exactly.
 */

#pragma once

#include "flowminer/core.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace flowminer {

enum class ValidityMode {
    /// Pairs absent from the witness impose nothing, so a disjoint witness suffices.
    literal,
    /// The witness must also contain every message of the pattern.
    strict,
};

struct Verdict {
    bool valid{ false };
    std::optional<std::size_t> witness{};  ///< index into the ground truth
};

template <typename Sym>
[[nodiscard]] bool consistent_with(const Sequence<Sym> &pattern, const Sequence<Sym> &truth, ValidityMode mode = ValidityMode::literal) {
    std::map<Sym, std::size_t> position;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        position.emplace(truth[i], i);
    }
    std::vector<std::optional<std::size_t>> pos(pattern.size());
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const auto it = position.find(pattern[i]);
        if (it != position.end()) {
            pos[i] = it->second;
        } else if (mode == ValidityMode::strict) {
            return false;
        }
    }
    // every ordered pair i < j, not only adjacent ones
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        for (std::size_t j = i + 1; j < pattern.size(); ++j) {
            if (pos[i] && pos[j] && !(*pos[i] < *pos[j])) {
                return false;
            }
        }
    }
    return true;
}

template <typename Sym>
[[nodiscard]] Verdict is_valid(const Sequence<Sym> &pattern, const std::vector<Sequence<Sym>> &gt, ValidityMode mode = ValidityMode::literal) {
    for (std::size_t k = 0; k < gt.size(); ++k) {
        if (consistent_with(pattern, gt[k], mode)) {
            return { true, k };
        }
    }
    return {};
}

/// |valid| / |mined|; nullopt for an empty mined set.
template <typename Sym>
[[nodiscard]] std::optional<double> precision(const std::vector<Sequence<Sym>> &mined, const std::vector<Sequence<Sym>> &gt,
                                              ValidityMode mode = ValidityMode::literal) {
    if (mined.empty()) {
        return std::nullopt;
    }
    std::size_t valid = 0;
    for (const auto &p : mined) {
        valid += is_valid(p, gt, mode).valid ? 1 : 0;
    }
    return static_cast<double>(valid) / static_cast<double>(mined.size());
}

/// Ground-truth sequences matched exactly by some mined pattern.
template <typename Sym>
[[nodiscard]] std::set<std::size_t> matched_ground_truth(const std::vector<Sequence<Sym>> &mined, const std::vector<Sequence<Sym>> &gt) {
    const std::set<Sequence<Sym>> mined_set(mined.begin(), mined.end());
    std::set<std::size_t> matched;
    for (std::size_t k = 0; k < gt.size(); ++k) {
        if (mined_set.contains(gt[k])) {
            matched.insert(k);
        }
    }
    return matched;
}

template <typename Sym>
[[nodiscard]] double recall(const std::vector<Sequence<Sym>> &mined, const std::vector<Sequence<Sym>> &gt) {
    if (gt.empty()) {
        throw error{ "recall is undefined for an empty ground truth" };
    }
    return static_cast<double>(matched_ground_truth(mined, gt).size()) / static_cast<double>(gt.size());
}

/// length -> (valid count, invalid count)
using LengthHistogram = std::map<std::size_t, std::pair<std::size_t, std::size_t>>;

template <typename Sym>
[[nodiscard]] LengthHistogram length_histogram(const std::vector<Sequence<Sym>> &mined, const std::vector<Sequence<Sym>> &gt,
                                               ValidityMode mode = ValidityMode::literal) {
    LengthHistogram hist;
    for (const auto &p : mined) {
        auto &[valid, invalid] = hist[p.size()];
        if (is_valid(p, gt, mode).valid) {
            ++valid;
        } else {
            ++invalid;
        }
    }
    return hist;
}

template <typename Sym>
struct EvalReport {
    std::vector<Sequence<Sym>> mined;
    std::vector<Verdict> verdicts;  ///< parallel to mined
    std::optional<double> precision;
    double recall{ 0.0 };
    LengthHistogram histogram;
    std::set<std::size_t> gt_matched;
    std::size_t gt_size{ 0 };

    [[nodiscard]] std::size_t valid_count() const {
        std::size_t n = 0;
        for (const Verdict &v : verdicts) {
            n += v.valid ? 1 : 0;
        }
        return n;
    }
};

template <typename Sym>
[[nodiscard]] EvalReport<Sym> evaluate(std::vector<Sequence<Sym>> mined, const std::vector<Sequence<Sym>> &gt, ValidityMode mode = ValidityMode::literal) {
    EvalReport<Sym> report;
    report.mined = std::move(mined);
    const auto &view = report.mined;
    for (const auto &p : report.mined) {
        report.verdicts.push_back(is_valid(p, gt, mode));
        auto &[valid, invalid] = report.histogram[p.size()];
        ++(report.verdicts.back().valid ? valid : invalid);
    }
    if (!report.mined.empty()) {
        report.precision = static_cast<double>(report.valid_count()) / static_cast<double>(report.mined.size());
    }
    report.gt_matched = matched_ground_truth(view, gt);
    report.gt_size = gt.size();
    report.recall = recall(view, gt);
    return report;
}

[[nodiscard]] inline std::vector<Sequence<Message>> sequences_of(const std::vector<Pattern> &patterns) {
    std::vector<Sequence<Message>> out;
    out.reserve(patterns.size());
    for (const Pattern &p : patterns) {
        out.push_back(p.messages());
    }
    return out;
}

}  // namespace flowminer
