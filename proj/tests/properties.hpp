// Randomized invariant checks shared by the unit suite and the acceptance run.
// Each check returns the number of cases run, the failures and the first failure.

#pragma once

#include "flowminer/flowminer.hpp"

#include "oracles.hpp"

#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <string>

namespace props {

using namespace flowminer;

struct Outcome {
    std::size_t cases{ 0 };
    std::size_t failures{ 0 };
    std::string first_failure;

    void fail(const std::string &why) {
        if (failures++ == 0) {
            first_failure = "case " + std::to_string(cases) + ": " + why;
        }
    }
    [[nodiscard]] bool ok() const { return failures == 0; }
};

inline TraceSet random_set(std::mt19937_64 &rng, std::size_t max_traces, std::size_t max_steps, std::size_t alphabet) {
    TraceSet set;
    const std::size_t n = 1 + rng() % max_traces;
    for (std::size_t i = 0; i < n; ++i) {
        Trace t = oracle::random_trace(rng, max_steps, alphabet, 2);
        t.id = std::to_string(i);
        set.traces.push_back(std::move(t));
    }
    return set;
}

inline Sequence<Message> random_sequence(std::mt19937_64 &rng, std::size_t max_len, std::size_t alphabet) {
    Sequence<Message> s;
    const std::size_t len = 1 + rng() % max_len;
    for (std::size_t i = 0; i < len; ++i) {
        s.push_back(oracle::small_message(rng, alphabet));
    }
    return s;
}

/// Ratios stay in [0, 1]; exactness implies an average of 1; joint support never exceeds either side.
inline Outcome confidence_bounds(std::uint64_t seed, std::size_t cases) {
    std::mt19937_64 rng{ seed };
    Outcome out;
    for (; out.cases < cases; ++out.cases) {
        const TraceSet set = random_set(rng, 4, 10, 4);
        const auto s1 = random_sequence(rng, 2, 4);
        const auto s2 = random_sequence(rng, 2, 4);
        Sequence<Message> joined = s1;
        joined.insert(joined.end(), s2.begin(), s2.end());
        for (const Trace &t : set.traces) {
            const std::size_t j = supp_seq(joined, t);
            if (j > supp_seq(s1, t) || j > supp_seq(s2, t)) {
                out.fail("joint support exceeds a side");
            }
            for (const auto &c : { conf_f(s1, s2, t), conf_b(s1, s2, t) }) {
                if (c && (*c < 0.0 || *c > 1.0)) {
                    out.fail("per-trace confidence out of range");
                }
            }
        }
        for (const SetConfidence &c : { conf_f_set(s1, s2, set), conf_b_set(s1, s2, set) }) {
            if (c.average && (*c.average < 0.0 || *c.average > 1.0)) {
                out.fail("set confidence out of range");
            }
            if (c.exact_100 && (!c.average || *c.average != 1.0)) {
                out.fail("exact confidence without an average of 1");
            }
            if (c.defined_traces > set.size()) {
                out.fail("more defined traces than traces");
            }
        }
    }
    return out;
}

/// Listing every trace twice leaves C, R and the final pattern set unchanged.
inline Outcome duplication_invariance(std::uint64_t seed, std::size_t cases) {
    std::mt19937_64 rng{ seed };
    Outcome out;
    for (; out.cases < cases; ++out.cases) {
        const TraceSet set = random_set(rng, 4, 10, 4);
        TraceSet doubled = set;
        doubled.traces.insert(doubled.traces.end(), set.traces.begin(), set.traces.end());
        PipelineOptions opts;
        opts.mining.causality = rng() % 2 == 0 ? Causality::off : Causality::dest_src;
        const auto one = run_flowminer(set, opts);
        const auto two = run_flowminer(doubled, opts);
        if (one.binary.forward != two.binary.forward || one.binary.backward != two.binary.backward) {
            out.fail("binary C/R changed under duplication");
        }
        if (one.forward != two.forward || one.backward != two.backward) {
            out.fail("final C/R changed under duplication");
        }
    }
    return out;
}

/// Closure terminates, is closed, keeps its seed, yields unique-symbol chains built from seed pairs.
inline Outcome chaining_invariants(std::uint64_t seed, std::size_t cases) {
    std::mt19937_64 rng{ seed };
    Outcome out;
    for (; out.cases < cases; ++out.cases) {
        SequenceSet<int> fwd, bwd;
        const int symbols = 3 + static_cast<int>(rng() % 5);
        for (int i = 0; i < 10; ++i) {
            const int p = static_cast<int>(rng() % static_cast<unsigned>(symbols));
            const int q = static_cast<int>(rng() % static_cast<unsigned>(symbols));
            if (p != q) {
                (rng() % 2 == 0 ? fwd : bwd).insert({ p, q });
            }
        }
        const SequenceSet<int> closed = chain_rule1(fwd);
        for (const auto &p : fwd) {
            if (!closed.contains(p)) {
                out.fail("closure lost a seed pattern");
            }
        }
        for (const auto &p : closed) {
            if (!all_unique(p)) {
                out.fail("closure produced a repeated symbol");
            }
            for (std::size_t k = 0; k + 1 < p.size(); ++k) {
                if (!fwd.contains({ p[k], p[k + 1] })) {
                    out.fail("closure pattern has a step outside the seed pairs");
                }
            }
            for (const auto &q : closed) {
                if (const auto c = chain_overlap(p, q); c && !closed.contains(*c)) {
                    out.fail("closure is not closed");
                }
            }
        }
        if (closed != oracle::chaining_closure(fwd)) {
            out.fail("closure differs from the naive fixpoint");
        }

        const SequenceSet<int> r_closed = chain_rule2(bwd);
        const SequenceSet<int> r3 = chain_rule3(r_closed, closed);
        for (const auto &p : r_closed) {
            if (!r3.contains(p)) {
                out.fail("rule 3 dropped an R pattern");
            }
        }
        for (const auto &p : r3) {
            if (r_closed.contains(p)) {
                continue;
            }
            bool explained = false;
            for (const auto &a : r_closed) {
                for (const auto &b : closed) {
                    explained = explained || chain_overlap(a, b) == p;
                }
            }
            if (!explained) {
                out.fail("rule 3 added a pattern that is not an R/C chain");
            }
        }

        const auto all = chain_all(fwd, bwd, [&](int f, int l) { return EvidenceVerdict{ (f + l) % 2 == 0, (f + l) % 3 == 0 }; });
        for (const auto &p : closed) {
            if (!all.forward.contains(p)) {
                out.fail("chain_all lost a C pattern");
            }
        }
        for (const auto &p : r3) {
            if (!all.backward.contains(p)) {
                out.fail("chain_all lost an R pattern");
            }
        }
        for (const auto *set : { &all.forward, &all.backward }) {
            for (const auto &p : *set) {
                if (!all_unique(p)) {
                    out.fail("chain_all produced a repeated symbol");
                }
            }
        }
    }
    return out;
}

/// Redundancy removal is idempotent, keeps a subset and leaves no prefix/suffix pairs.
inline Outcome postprocess_idempotence(std::uint64_t seed, std::size_t cases) {
    std::mt19937_64 rng{ seed };
    Outcome out;
    for (; out.cases < cases; ++out.cases) {
        SequenceSet<int> set;
        const std::size_t n = 1 + rng() % 12;
        for (std::size_t i = 0; i < n; ++i) {
            Sequence<int> s;
            const std::size_t len = 2 + rng() % 4;
            for (std::size_t k = 0; k < len; ++k) {
                s.push_back(static_cast<int>(rng() % 5));
            }
            set.insert(std::move(s));
        }
        const auto once = remove_redundant(set);
        if (remove_redundant(once) != once) {
            out.fail("not idempotent");
        }
        for (const auto &p : once) {
            if (!set.contains(p)) {
                out.fail("introduced a pattern");
            }
            for (const auto &q : once) {
                if (p != q && (is_prefix_of(p, q) || is_suffix_of(p, q))) {
                    out.fail("left a prefix or suffix behind");
                }
            }
        }
        for (const auto &p : set) {
            if (once.contains(p)) {
                continue;
            }
            bool covered = false;
            for (const auto &q : set) {
                covered = covered || (q.size() > p.size() && (is_prefix_of(p, q) || is_suffix_of(p, q)));
            }
            if (!covered) {
                out.fail("dropped a pattern that was not redundant");
            }
        }
    }
    return out;
}

/// Projecting a generated trace onto one instance gives back its ground-truth path.
inline Outcome generator_projection(std::uint64_t seed, std::size_t cases) {
    std::mt19937_64 rng{ seed };
    Outcome out;
    for (; out.cases < cases; ++out.cases) {
        GroundTruth gt;
        const std::size_t paths = 1 + rng() % 3;
        for (std::size_t p = 0; p < paths; ++p) {
            Sequence<Message> seq;
            const std::size_t len = 2 + rng() % 4;
            for (std::size_t k = 0; k < len; ++k) {
                seq.emplace_back("C" + std::to_string(k), "C" + std::to_string(k + 1), "p" + std::to_string(p) + "m" + std::to_string(k));
            }
            gt.add(std::move(seq), "f" + std::to_string(p));
        }
        GenConfig cfg;
        cfg.mode = static_cast<GenMode>(rng() % 3);
        cfg.instances_per_pattern = 1 + rng() % 4;
        cfg.num_traces = 1 + rng() % 3;
        cfg.max_batch = 1 + rng() % 4;
        cfg.max_active = rng() % 4;
        cfg.seed = rng();
        cfg.address_mode = AddressMode::per_instance;
        cfg.address_pool = 64;
        const GeneratedTraces gen = generate(gt, cfg);
        for (std::size_t ti = 0; ti < gen.traces.size(); ++ti) {
            const Trace &t = gen.traces.traces[ti];
            std::map<std::string, std::vector<std::pair<std::size_t, MessageInstance>>> groups;
            for (std::size_t s = 0; s < t.steps.size(); ++s) {
                if (t.steps[s].empty()) {
                    out.fail("empty step");
                }
                if (cfg.mode != GenMode::mm_i && t.steps[s].size() != 1) {
                    out.fail("single-message mode emitted a batch");
                }
                if (t.steps[s].size() > cfg.max_batch) {
                    out.fail("batch larger than max_batch");
                }
                for (const auto &mi : t.steps[s]) {
                    groups[*mi.instance_id].emplace_back(s, mi);
                }
            }
            const auto &records = gen.metadata.traces[ti].instances;
            if (groups.size() != records.size() || records.size() != gt.size() * cfg.instances_per_pattern) {
                out.fail("instance count mismatch");
                continue;
            }
            for (const InstanceRecord &rec : records) {
                const auto &got = groups[rec.id];
                const auto &want = gt.sequences[rec.sequence];
                if (got.size() != want.size()) {
                    out.fail("projection length differs");
                    continue;
                }
                for (std::size_t k = 0; k < want.size(); ++k) {
                    if (got[k].second.message != want[k] || got[k].second.address != rec.address) {
                        out.fail("projection differs from the path");
                    }
                    if (k > 0 && !(got[k - 1].first < got[k].first)) {
                        out.fail("projection steps not strictly increasing");
                    }
                }
            }
            for (std::size_t i = 0; i < records.size(); ++i) {
                for (std::size_t j = i + 1; j < records.size(); ++j) {
                    const auto &p = records[i].span;
                    const auto &q = records[j].span;
                    const bool overlap = !(p.last_step < q.first_step || q.last_step < p.first_step);
                    if (overlap && cfg.mode == GenMode::sm_ni) {
                        out.fail("sm-ni instances overlap");
                    }
                    if (overlap && records[i].address == records[j].address) {
                        out.fail("overlapping instances share an address");
                    }
                }
            }
        }
    }
    return out;
}

/// supp_seq against exhaustive search over all embeddings.
inline Outcome support_oracle(std::uint64_t seed, std::size_t cases, std::size_t *mismatches = nullptr) {
    std::mt19937_64 rng{ seed };
    Outcome out;
    for (; out.cases < cases; ++out.cases) {
        const std::size_t alphabet = 1 + rng() % 4;
        const Trace t = oracle::random_trace(rng, 12, alphabet, 3);
        const auto s = random_sequence(rng, 3, alphabet);
        const std::size_t got = supp_seq(s, t);
        const std::size_t want = oracle::max_disjoint_occurrences(s, t);
        if (got != want) {
            std::ostringstream why;
            why << "supp_seq " << got << " != exhaustive " << want;
            out.fail(why.str());
        }
    }
    if (mismatches != nullptr) {
        *mismatches = out.failures;
    }
    return out;
}

}  // namespace props
