/**
 * @file
 * @brief Flow specifications, ground-truth path enumeration and DOT export.
 *
 * A flow is a DAG of messages with a single start message and one or more
 * terminal messages. Out-edges of a node are alternatives: an execution picks
 * exactly one of them. Every start-to-terminal path is a ground-truth pattern.
 */

#pragma once

#include "flowminer/core.hpp"

#include "json.hpp"

#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace flowminer {

struct FlowSpec {
    std::string name;
    std::vector<std::string> ids;     ///< message ids as written in the document
    std::vector<Message> messages;    ///< parallel to ids
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::size_t start{ 0 };
    std::vector<std::size_t> terminals;

    [[nodiscard]] bool is_terminal(std::size_t node) const {
        return std::find(terminals.begin(), terminals.end(), node) != terminals.end();
    }

    /// Successors of each node in edge insertion order.
    [[nodiscard]] std::vector<std::vector<std::size_t>> adjacency() const {
        std::vector<std::vector<std::size_t>> adj(messages.size());
        for (const auto &[from, to] : edges) {
            adj[from].push_back(to);
        }
        return adj;
    }

    /// Throws when the DAG invariants do not hold.
    void validate() const {
        const std::size_t n = messages.size();
        if (n == 0) {
            throw error{ "flow '" + name + "' has no messages" };
        }
        if (start >= n) {
            throw error{ "flow '" + name + "': unknown start message" };
        }
        if (terminals.empty()) {
            throw error{ "flow '" + name + "' has no terminal message" };
        }
        for (std::size_t t : terminals) {
            if (t >= n) {
                throw error{ "flow '" + name + "': unknown terminal message" };
            }
        }
        std::set<Message> distinct(messages.begin(), messages.end());
        if (distinct.size() != n) {
            throw error{ "flow '" + name + "' lists the same message twice" };
        }
        const auto adj = adjacency();
        // 0 = unvisited, 1 = on stack, 2 = done
        std::vector<int> state(n, 0);
        std::vector<std::pair<std::size_t, std::size_t>> stack{ { start, 0 } };
        state[start] = 1;
        while (!stack.empty()) {
            auto &[node, next] = stack.back();
            if (next < adj[node].size()) {
                const std::size_t succ = adj[node][next++];
                if (state[succ] == 1) {
                    throw error{ "flow '" + name + "': cycle detected through " + ids[succ] };
                }
                if (state[succ] == 0) {
                    state[succ] = 1;
                    stack.emplace_back(succ, 0);
                }
            } else {
                state[node] = 2;
                stack.pop_back();
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (state[i] == 0) {
                throw error{ "flow '" + name + "': message " + ids[i] + " is unreachable from start" };
            }
            if (adj[i].empty() && !is_terminal(i)) {
                throw error{ "flow '" + name + "': path ends at non-terminal message " + ids[i] };
            }
        }
    }
};

/// Start-to-terminal paths of a set of flows, without duplicates.
struct GroundTruth {
    std::vector<Sequence<Message>> sequences;
    std::vector<std::string> flow_names;  ///< parallel to sequences

    [[nodiscard]] std::size_t size() const noexcept { return sequences.size(); }
    [[nodiscard]] bool empty() const noexcept { return sequences.empty(); }

    void add(Sequence<Message> seq, const std::string &flow) {
        if (std::find(sequences.begin(), sequences.end(), seq) == sequences.end()) {
            sequences.push_back(std::move(seq));
            flow_names.push_back(flow);
        }
    }
};

namespace detail {

using ordered_json = nlohmann::ordered_json;

[[nodiscard]] inline FlowSpec flow_from_json(const ordered_json &doc) {
    if (!doc.is_object()) {
        throw parse_error{ "flow must be a JSON object" };
    }
    for (const char *key : { "name", "messages", "edges", "start", "terminals" }) {
        if (!doc.contains(key)) {
            throw parse_error{ std::string{ "flow is missing field '" } + key + "'" };
        }
    }
    FlowSpec flow;
    try {
        flow.name = doc.at("name").get<std::string>();
        std::map<std::string, std::size_t> index;
        const auto &msgs = doc.at("messages");
        if (!msgs.is_object()) {
            throw parse_error{ "flow '" + flow.name + "': messages must be an object" };
        }
        for (const auto &[id, m] : msgs.items()) {
            index.emplace(id, flow.ids.size());
            flow.ids.push_back(id);
            flow.messages.emplace_back(m.at("src").get<std::string>(), m.at("dest").get<std::string>(), m.at("cmd").get<std::string>());
        }
        const auto lookup = [&](const std::string &id, const char *what) {
            const auto it = index.find(id);
            if (it == index.end()) {
                throw parse_error{ "flow '" + flow.name + "': unknown " + what + " reference '" + id + "'" };
            }
            return it->second;
        };
        for (const auto &edge : doc.at("edges")) {
            if (!edge.is_array() || edge.size() != 2) {
                throw parse_error{ "flow '" + flow.name + "': an edge must be a pair of ids" };
            }
            flow.edges.emplace_back(lookup(edge[0].get<std::string>(), "edge"), lookup(edge[1].get<std::string>(), "edge"));
        }
        flow.start = lookup(doc.at("start").get<std::string>(), "start");
        for (const auto &t : doc.at("terminals")) {
            flow.terminals.push_back(lookup(t.get<std::string>(), "terminal"));
        }
        flow.validate();
    } catch (const nlohmann::json::exception &e) {
        throw parse_error{ "flow '" + flow.name + "': " + e.what() };
    } catch (const parse_error &) {
        throw;
    } catch (const error &e) {
        throw parse_error{ e.what() };
    }
    return flow;
}

}  // namespace detail

/// Parses a single flow object.
[[nodiscard]] inline FlowSpec parse_flow_spec(std::string_view text) {
    detail::ordered_json doc;
    try {
        doc = detail::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw parse_error{ e.what() };
    }
    if (doc.contains("flows")) {
        if (doc.at("flows").size() != 1) {
            throw parse_error{ "expected exactly one flow" };
        }
        return detail::flow_from_json(doc.at("flows").at(0));
    }
    return detail::flow_from_json(doc);
}

/// Parses a library document `{"flows": [...]}`; a bare flow object is accepted too.
[[nodiscard]] inline std::vector<FlowSpec> parse_flow_library(std::string_view text, const std::string &source = {}) {
    detail::ordered_json doc;
    try {
        doc = detail::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw parse_error{ e.what(), source };
    }
    std::vector<FlowSpec> flows;
    try {
        if (doc.is_object() && doc.contains("flows")) {
            for (const auto &f : doc.at("flows")) {
                flows.push_back(detail::flow_from_json(f));
            }
        } else {
            flows.push_back(detail::flow_from_json(doc));
        }
    } catch (const error &e) {
        throw parse_error{ e.what(), source };
    }
    return flows;
}

[[nodiscard]] inline std::vector<FlowSpec> read_flow_library_file(const std::string &path) {
    std::ifstream in{ path };
    if (!in) {
        throw error{ "cannot open flow library '" + path + "'" };
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_flow_library(buf.str(), path);
}

/**
 * @brief Every start-to-terminal path of @p flow.
 *
 * Depth-first, following out-edges in insertion order, so the output order is deterministic.
 */
[[nodiscard]] inline GroundTruth enumerate_paths(const FlowSpec &flow) {
    GroundTruth gt;
    const auto adj = flow.adjacency();
    std::vector<std::size_t> path{ flow.start };
    std::vector<std::size_t> cursor{ 0 };
    const auto emit = [&] {
        Sequence<Message> seq;
        seq.reserve(path.size());
        for (std::size_t node : path) {
            seq.push_back(flow.messages[node]);
        }
        gt.add(std::move(seq), flow.name);
    };
    if (flow.is_terminal(flow.start)) {
        emit();
    }
    while (!path.empty()) {
        const std::size_t node = path.back();
        std::size_t &next = cursor.back();
        if (next < adj[node].size()) {
            const std::size_t succ = adj[node][next++];
            path.push_back(succ);
            cursor.push_back(0);
            if (flow.is_terminal(succ)) {
                emit();
            }
        } else {
            path.pop_back();
            cursor.pop_back();
        }
    }
    return gt;
}

[[nodiscard]] inline GroundTruth enumerate_paths(const std::vector<FlowSpec> &flows) {
    GroundTruth gt;
    for (const FlowSpec &f : flows) {
        GroundTruth part = enumerate_paths(f);
        for (std::size_t i = 0; i < part.size(); ++i) {
            gt.add(std::move(part.sequences[i]), part.flow_names[i]);
        }
    }
    return gt;
}

namespace detail {

[[nodiscard]] inline std::string dot_quote(const std::string &s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out + '"';
}

}  // namespace detail

[[nodiscard]] inline std::string export_dot(const FlowSpec &flow) {
    std::ostringstream out;
    out << "digraph " << detail::dot_quote(flow.name) << " {\n";
    for (std::size_t i = 0; i < flow.messages.size(); ++i) {
        out << "  " << detail::dot_quote(flow.messages[i].render());
        if (i == flow.start) {
            out << " [shape=box]";
        } else if (flow.is_terminal(i)) {
            out << " [shape=doublecircle]";
        }
        out << ";\n";
    }
    for (const auto &[from, to] : flow.edges) {
        out << "  " << detail::dot_quote(flow.messages[from].render()) << " -> " << detail::dot_quote(flow.messages[to].render()) << ";\n";
    }
    out << "}\n";
    return out.str();
}

/// Union graph of @p patterns; each edge is labelled with the index of its pattern.
[[nodiscard]] inline std::string export_dot(const std::vector<Pattern> &patterns, const std::string &name = "patterns") {
    std::ostringstream out;
    out << "digraph " << detail::dot_quote(name) << " {\n";
    std::set<Message> nodes;
    for (const Pattern &p : patterns) {
        nodes.insert(p.messages().begin(), p.messages().end());
    }
    for (const Message &m : nodes) {
        out << "  " << detail::dot_quote(m.render()) << ";\n";
    }
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        const auto &msgs = patterns[i].messages();
        for (std::size_t k = 0; k + 1 < msgs.size(); ++k) {
            out << "  " << detail::dot_quote(msgs[k].render()) << " -> " << detail::dot_quote(msgs[k + 1].render())
                << " [label=\"p" << i << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace flowminer
