/**
 * @file
 * @brief Messages, traces and patterns shared by every stage of the miner.
 */

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flowminer {

/// Base class of every error raised by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input. Carries an optional source name and 1-based line.
class parse_error : public error {
  public:
    parse_error(const std::string &what, std::string source = {}, std::size_t line = 0) :
        error{ format(what, source, line) },
        source_{ std::move(source) },
        line_{ line } {}

    [[nodiscard]] const std::string &source() const noexcept { return source_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    static std::string format(const std::string &what, const std::string &source, std::size_t line) {
        if (source.empty() && line == 0) {
            return what;
        }
        std::string out = source.empty() ? std::string{ "<input>" } : source;
        if (line != 0) {
            out += ':' + std::to_string(line);
        }
        return out + ": " + what;
    }

    std::string source_;
    std::size_t line_;
};

namespace detail {

[[nodiscard]] inline bool is_delimiter(char c) noexcept {
    return c == ':' || c == ';' || c == '@' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

[[nodiscard]] inline bool valid_token(std::string_view token) noexcept {
    return !token.empty() && std::none_of(token.begin(), token.end(), is_delimiter);
}

}  // namespace detail

/**
 * @brief A static message triple (source component, destination component, command).
 *
 * Messages are the alphabet of mining. Runtime data such as addresses lives on
 * MessageInstance, never here. Ordering follows the canonical `src:dest:cmd` rendering.
 */
class Message {
  public:
    Message() = default;

    Message(std::string src, std::string dest, std::string cmd) :
        src_{ std::move(src) },
        dest_{ std::move(dest) },
        cmd_{ std::move(cmd) } {
        if (!detail::valid_token(src_) || !detail::valid_token(dest_) || !detail::valid_token(cmd_)) {
            throw error{ "invalid message field in (" + src_ + ", " + dest_ + ", " + cmd_ + ")" };
        }
    }

    [[nodiscard]] const std::string &src() const noexcept { return src_; }
    [[nodiscard]] const std::string &dest() const noexcept { return dest_; }
    [[nodiscard]] const std::string &cmd() const noexcept { return cmd_; }

    [[nodiscard]] std::string render() const { return src_ + ':' + dest_ + ':' + cmd_; }

    /// Parses the canonical rendering produced by render().
    [[nodiscard]] static Message parse(std::string_view text) {
        const auto first = text.find(':');
        const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
        if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos) {
            throw parse_error{ "expected src:dest:cmd, got '" + std::string{ text } + "'" };
        }
        try {
            return Message{ std::string{ text.substr(0, first) },
                            std::string{ text.substr(first + 1, second - first - 1) },
                            std::string{ text.substr(second + 1) } };
        } catch (const error &) {
            throw parse_error{ "invalid message token '" + std::string{ text } + "'" };
        }
    }

    friend bool operator==(const Message &, const Message &) = default;

    // compares the rendered strings without materialising them
    friend std::strong_ordering operator<=>(const Message &lhs, const Message &rhs) noexcept {
        const std::string_view left[] = { lhs.src_, ":", lhs.dest_, ":", lhs.cmd_ };
        const std::string_view right[] = { rhs.src_, ":", rhs.dest_, ":", rhs.cmd_ };
        std::size_t li = 0, lo = 0, ri = 0, ro = 0;
        while (true) {
            while (li < 5 && lo == left[li].size()) {
                ++li;
                lo = 0;
            }
            while (ri < 5 && ro == right[ri].size()) {
                ++ri;
                ro = 0;
            }
            if (li == 5 || ri == 5) {
                return (li == 5) == (ri == 5) ? std::strong_ordering::equal
                                              : (li == 5 ? std::strong_ordering::less : std::strong_ordering::greater);
            }
            const auto a = static_cast<unsigned char>(left[li][lo++]);
            const auto b = static_cast<unsigned char>(right[ri][ro++]);
            if (a != b) {
                return a <=> b;
            }
        }
    }

  private:
    std::string src_;
    std::string dest_;
    std::string cmd_;
};

[[nodiscard]] inline std::string canonical_render(const Message &m) { return m.render(); }

/// A runtime occurrence of a message.
struct MessageInstance {
    Message message;
    std::optional<std::uint64_t> address{};
    /// Generator bookkeeping only. The miner never reads it.
    std::optional<std::string> instance_id{};

    friend bool operator==(const MessageInstance &, const MessageInstance &) = default;
};

/// Messages observed at the same time. A multiset: intra-step order carries no meaning.
using Step = std::vector<MessageInstance>;

/// A sequence of non-empty steps.
struct Trace {
    std::string id{};
    std::vector<Step> steps{};

    [[nodiscard]] std::size_t size() const noexcept { return steps.size(); }

    [[nodiscard]] std::size_t message_count() const noexcept {
        std::size_t n = 0;
        for (const Step &s : steps) {
            n += s.size();
        }
        return n;
    }

    /// Throws when a step is empty.
    void validate() const {
        for (std::size_t i = 0; i < steps.size(); ++i) {
            if (steps[i].empty()) {
                throw error{ "trace '" + id + "' has an empty step at index " + std::to_string(i) };
            }
        }
    }
};

/**
 * @brief Temporal order between two steps of @p t.
 *
 * Instances in the same step are unordered, so `precedes(t, i, i)` is false.
 */
[[nodiscard]] inline bool precedes(const Trace &t, std::size_t i, std::size_t j) {
    if (i >= t.steps.size() || j >= t.steps.size()) {
        throw std::out_of_range{ "step index out of range" };
    }
    return i < j;
}

struct TraceSet {
    std::vector<Trace> traces{};

    [[nodiscard]] bool empty() const noexcept { return traces.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return traces.size(); }

    /// Distinct messages occurring anywhere, in canonical order.
    [[nodiscard]] std::vector<Message> alphabet() const {
        std::set<Message> seen;
        for (const Trace &t : traces) {
            for (const Step &s : t.steps) {
                for (const MessageInstance &mi : s) {
                    seen.insert(mi.message);
                }
            }
        }
        return { seen.begin(), seen.end() };
    }
};

/// Ordered message sequence; the raw form of a pattern.
template <typename Sym>
using Sequence = std::vector<Sym>;

/// Deterministically ordered set of sequences.
template <typename Sym>
using SequenceSet = std::set<Sequence<Sym>>;

/// Which confidence set(s) a pattern came from.
enum class Origin : std::uint8_t {
    forward = 1,   ///< set C
    backward = 2,  ///< set R
    both = 3,
};

[[nodiscard]] constexpr Origin operator|(Origin a, Origin b) noexcept {
    return static_cast<Origin>(static_cast<std::uint8_t>(a) | static_cast<std::uint8_t>(b));
}

[[nodiscard]] inline std::string_view to_string(Origin o) noexcept {
    switch (o) {
        case Origin::forward:
            return "C";
        case Origin::backward:
            return "R";
        case Origin::both:
            return "CR";
    }
    return "?";
}

[[nodiscard]] inline Origin origin_from_string(std::string_view s) {
    if (s == "C") {
        return Origin::forward;
    }
    if (s == "R") {
        return Origin::backward;
    }
    if (s == "CR") {
        return Origin::both;
    }
    throw parse_error{ "unknown pattern set '" + std::string{ s } + "'" };
}

/// Averaged confidences recorded when a pattern was qualified.
struct SupportStats {
    std::size_t defined_traces{ 0 };
    double confidence{ 0.0 };
};

/**
 * @brief A mined sequential pattern.
 *
 * Construction enforces the structural rules: at least two messages, all distinct,
 * and every consecutive pair accepted by @p link (the causality predicate in use).
 */
class Pattern {
  public:
    using Link = std::function<bool(const Message &, const Message &)>;

    Pattern(Sequence<Message> messages, Origin origin, const Link &link = {}, std::optional<SupportStats> stats = std::nullopt) :
        messages_{ std::move(messages) },
        origin_{ origin },
        stats_{ stats } {
        if (messages_.size() < 2) {
            throw error{ "a pattern needs at least two messages" };
        }
        std::set<Message> seen;
        for (const Message &m : messages_) {
            if (!seen.insert(m).second) {
                throw error{ "pattern repeats message " + m.render() };
            }
        }
        if (link) {
            for (std::size_t i = 0; i + 1 < messages_.size(); ++i) {
                if (!link(messages_[i], messages_[i + 1])) {
                    throw error{ "pattern pair (" + messages_[i].render() + ", " + messages_[i + 1].render() + ") is not causal" };
                }
            }
        }
    }

    [[nodiscard]] const Sequence<Message> &messages() const noexcept { return messages_; }
    [[nodiscard]] std::size_t size() const noexcept { return messages_.size(); }
    [[nodiscard]] Origin origin() const noexcept { return origin_; }
    [[nodiscard]] const std::optional<SupportStats> &stats() const noexcept { return stats_; }

    void add_origin(Origin o) noexcept { origin_ = origin_ | o; }

  private:
    Sequence<Message> messages_;
    Origin origin_;
    std::optional<SupportStats> stats_;
};

}  // namespace flowminer

template <>
struct std::hash<flowminer::Message> {
    std::size_t operator()(const flowminer::Message &m) const noexcept {
        std::size_t h = std::hash<std::string>{}(m.src());
        h ^= std::hash<std::string>{}(m.dest()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<std::string>{}(m.cmd()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};
