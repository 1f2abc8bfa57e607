/**
 * @file
 * @brief Pattern and evaluation documents.
 *
 * Pattern document: `{"patterns": [{"messages": [...], "set": "C"|"R"|"CR", "length": n}]}`,
 * sorted by length descending, then lexicographically by canonical tokens.
 */

#pragma once

#include "flowminer/core.hpp"
#include "flowminer/evaluation.hpp"
#include "flowminer/flow.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace flowminer {

using json = nlohmann::ordered_json;

/// Output order of a pattern document.
inline void sort_patterns(std::vector<Pattern> &patterns) {
    const auto tokens = [](const Pattern &p) {
        std::vector<std::string> out;
        for (const Message &m : p.messages()) {
            out.push_back(m.render());
        }
        return out;
    };
    std::stable_sort(patterns.begin(), patterns.end(), [&](const Pattern &a, const Pattern &b) {
        if (a.size() != b.size()) {
            return a.size() > b.size();
        }
        return tokens(a) < tokens(b);
    });
}

[[nodiscard]] inline json patterns_to_json(std::vector<Pattern> patterns) {
    sort_patterns(patterns);
    json doc;
    auto &list = doc["patterns"] = json::array();
    for (const Pattern &p : patterns) {
        json entry;
        auto &msgs = entry["messages"] = json::array();
        for (const Message &m : p.messages()) {
            msgs.push_back(m.render());
        }
        entry["set"] = std::string{ to_string(p.origin()) };
        entry["length"] = p.size();
        list.push_back(std::move(entry));
    }
    return doc;
}

[[nodiscard]] inline std::vector<Pattern> patterns_from_json(const std::string &text, const std::string &source = {}) {
    std::vector<Pattern> out;
    try {
        const json doc = json::parse(text);
        for (const auto &entry : doc.at("patterns")) {
            Sequence<Message> msgs;
            for (const auto &token : entry.at("messages")) {
                msgs.push_back(Message::parse(token.get<std::string>()));
            }
            const Origin origin = entry.contains("set") ? origin_from_string(entry.at("set").get<std::string>()) : Origin::both;
            out.emplace_back(std::move(msgs), origin);
        }
    } catch (const nlohmann::json::exception &e) {
        throw parse_error{ e.what(), source };
    } catch (const parse_error &e) {
        throw parse_error{ e.what(), source };
    } catch (const error &e) {
        throw parse_error{ e.what(), source };
    }
    return out;
}

[[nodiscard]] inline std::vector<Pattern> read_patterns_file(const std::string &path) {
    std::ifstream in{ path };
    if (!in) {
        throw error{ "cannot open pattern file '" + path + "'" };
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return patterns_from_json(buf.str(), path);
}

/// Ground-truth sequences as a pattern list (used to feed the evaluator its own truth).
[[nodiscard]] inline std::vector<Pattern> ground_truth_patterns(const GroundTruth &gt) {
    std::vector<Pattern> out;
    for (const auto &seq : gt.sequences) {
        if (seq.size() >= 2) {
            out.emplace_back(seq, Origin::both);
        }
    }
    return out;
}

[[nodiscard]] inline json eval_report_to_json(const EvalReport<Message> &report, const GroundTruth &gt) {
    json doc;
    doc["patterns"] = report.mined.size();
    doc["valid"] = report.valid_count();
    doc["precision"] = report.precision ? json(*report.precision) : json(nullptr);
    doc["recall"] = report.recall;
    doc["ground_truth"] = report.gt_size;
    doc["ground_truth_matched"] = report.gt_matched.size();
    auto &verdicts = doc["verdicts"] = json::array();
    for (std::size_t i = 0; i < report.mined.size(); ++i) {
        json v;
        auto &msgs = v["messages"] = json::array();
        for (const Message &m : report.mined[i]) {
            msgs.push_back(m.render());
        }
        v["valid"] = report.verdicts[i].valid;
        if (report.verdicts[i].witness) {
            auto &w = v["witness"] = json::array();
            for (const Message &m : gt.sequences[*report.verdicts[i].witness]) {
                w.push_back(m.render());
            }
        }
        v["exact_match"] = std::find(gt.sequences.begin(), gt.sequences.end(), report.mined[i]) != gt.sequences.end();
        verdicts.push_back(std::move(v));
    }
    auto &hist = doc["length_histogram"] = json::array();
    for (const auto &[len, counts] : report.histogram) {
        hist.push_back(json{ { "length", len }, { "valid", counts.first }, { "invalid", counts.second } });
    }
    return doc;
}

namespace detail {

[[nodiscard]] inline std::string percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", v * 100.0);
    return buf;
}

}  // namespace detail

/// Plain-text summary: one row with #patterns, precision and recall, then the length breakdown.
[[nodiscard]] inline std::string eval_summary(const EvalReport<Message> &report, const std::string &tool = "flowminer") {
    std::ostringstream out;
    out << std::left << std::setw(12) << "tool" << std::setw(12) << "#patterns" << std::setw(12) << "precision" << "recall\n";
    out << std::setw(12) << tool << std::setw(12) << report.mined.size() << std::setw(12)
        << (report.precision ? detail::percent(*report.precision) : std::string{ "n/a" }) << detail::percent(report.recall) << '\n';
    out << "\nlength";
    for (const auto &[len, counts] : report.histogram) {
        out << '\t' << len;
    }
    out << "\ttotal\tGT\nvalid";
    std::size_t valid = 0, invalid = 0;
    for (const auto &[len, counts] : report.histogram) {
        out << '\t' << counts.first;
        valid += counts.first;
    }
    out << '\t' << valid << '\t' << report.gt_matched.size() << "\ninvalid";
    for (const auto &[len, counts] : report.histogram) {
        out << '\t' << counts.second;
        invalid += counts.second;
    }
    out << '\t' << invalid << '\n';
    return out.str();
}

}  // namespace flowminer
