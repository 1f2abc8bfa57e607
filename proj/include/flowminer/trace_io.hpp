/**
 * @file
 * @brief Text trace format.
 *
 * One step per line, instances separated by `;`, each instance `src:dest:cmd`
 * with an optional `@<decimal address>` suffix. Lines starting with `#` are
 * comments and blank lines are ignored. A line `== trace <id> ==` starts a new
 * trace; instances before the first header belong to an implicit trace.
 */

#pragma once

#include "flowminer/core.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

namespace flowminer {

namespace detail {

[[nodiscard]] inline std::string_view trim(std::string_view s) noexcept {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

[[nodiscard]] inline MessageInstance parse_instance(std::string_view text, const std::string &source, std::size_t line) {
    MessageInstance inst;
    const auto at = text.find('@');
    std::string_view body = text.substr(0, at);
    if (at != std::string_view::npos) {
        const std::string_view addr = text.substr(at + 1);
        std::uint64_t value = 0;
        const auto [ptr, ec] = std::from_chars(addr.data(), addr.data() + addr.size(), value);
        if (addr.empty() || ec != std::errc{} || ptr != addr.data() + addr.size()) {
            throw parse_error{ "bad address '" + std::string{ addr } + "'", source, line };
        }
        inst.address = value;
    }
    try {
        inst.message = Message::parse(body);
    } catch (const parse_error &e) {
        throw parse_error{ e.what(), source, line };
    }
    return inst;
}

}  // namespace detail

[[nodiscard]] inline std::string render_instance(const MessageInstance &mi) {
    std::string out = mi.message.render();
    if (mi.address) {
        out += '@' + std::to_string(*mi.address);
    }
    return out;
}

/// Reads every trace in @p in. @p source names the input in error messages.
[[nodiscard]] inline TraceSet read_traces(std::istream &in, const std::string &source = {}) {
    TraceSet set;
    std::optional<Trace> current;
    std::string line;
    std::size_t lineno = 0;
    const auto flush = [&] {
        if (current) {
            set.traces.push_back(std::move(*current));
            current.reset();
        }
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view text = detail::trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        if (text.starts_with("==")) {
            constexpr std::string_view open = "== trace ";
            if (!text.starts_with(open) || !text.ends_with("==") || text.size() < open.size() + 2) {
                throw parse_error{ "malformed trace header", source, lineno };
            }
            const std::string_view id = detail::trim(text.substr(open.size(), text.size() - open.size() - 2));
            if (id.empty()) {
                throw parse_error{ "trace header without id", source, lineno };
            }
            flush();
            current = Trace{ std::string{ id }, {} };
            continue;
        }
        if (!current) {
            // a file without headers holds one trace named after the file
            current = Trace{ source.empty() ? std::string{ "0" } : std::filesystem::path{ source }.stem().string(), {} };
        }
        Step step;
        std::string_view rest = text;
        while (true) {
            const auto semi = rest.find(';');
            const std::string_view item = detail::trim(rest.substr(0, semi));
            if (item.empty()) {
                throw parse_error{ "empty message instance", source, lineno };
            }
            step.push_back(detail::parse_instance(item, source, lineno));
            if (semi == std::string_view::npos) {
                break;
            }
            rest = rest.substr(semi + 1);
        }
        current->steps.push_back(std::move(step));
    }
    flush();
    return set;
}

[[nodiscard]] inline TraceSet read_traces_file(const std::string &path) {
    std::ifstream in{ path };
    if (!in) {
        throw error{ "cannot open trace file '" + path + "'" };
    }
    return read_traces(in, path);
}

[[nodiscard]] inline TraceSet parse_traces(std::string_view text, const std::string &source = {}) {
    std::istringstream in{ std::string{ text } };
    return read_traces(in, source);
}

inline void write_trace(std::ostream &out, const Trace &t) {
    out << "== trace " << t.id << " ==\n";
    for (const Step &step : t.steps) {
        for (std::size_t i = 0; i < step.size(); ++i) {
            if (i != 0) {
                out << ';';
            }
            out << render_instance(step[i]);
        }
        out << '\n';
    }
}

inline void write_traces(std::ostream &out, const TraceSet &set) {
    for (const Trace &t : set.traces) {
        write_trace(out, t);
    }
}

[[nodiscard]] inline std::string format_traces(const TraceSet &set) {
    std::ostringstream out;
    write_traces(out, set);
    return out.str();
}

}  // namespace flowminer
