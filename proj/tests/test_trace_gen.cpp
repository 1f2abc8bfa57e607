#include "flowminer/trace_gen.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

using namespace flowminer;
using namespace testutil;

namespace {

GroundTruth cpu_write() { return enumerate_paths(read_flow_library_file(data_file("cpu_write_flow.json"))); }

// The messages of one instance, in trace order.
std::map<std::string, std::vector<std::pair<std::size_t, Message>>> by_instance(const Trace &t) {
    std::map<std::string, std::vector<std::pair<std::size_t, Message>>> out;
    for (std::size_t s = 0; s < t.steps.size(); ++s) {
        for (const auto &mi : t.steps[s]) {
            out[*mi.instance_id].emplace_back(s, mi.message);
        }
    }
    return out;
}

void expect_projection(const GeneratedTraces &out, const GroundTruth &gt) {
    for (std::size_t ti = 0; ti < out.traces.size(); ++ti) {
        const Trace &t = out.traces.traces[ti];
        const auto groups = by_instance(t);
        const auto &meta = out.metadata.traces[ti];
        ASSERT_EQ(groups.size(), meta.instances.size());
        for (const InstanceRecord &rec : meta.instances) {
            const auto &msgs = groups.at(rec.id);
            const auto &seq = gt.sequences[rec.sequence];
            ASSERT_EQ(msgs.size(), seq.size());
            for (std::size_t k = 0; k < seq.size(); ++k) {
                EXPECT_EQ(msgs[k].second, seq[k]);
                if (k > 0) {
                    EXPECT_LT(msgs[k - 1].first, msgs[k].first);
                }
            }
            EXPECT_EQ(msgs.front().first, rec.span.first_step);
            EXPECT_EQ(msgs.back().first, rec.span.last_step);
        }
    }
}

}  // namespace

TEST(TraceGen, SmNiRunsInstancesBackToBack) {
    const GroundTruth gt = cpu_write();
    GenConfig cfg;
    cfg.num_traces = 3;
    cfg.seed = 7;
    const auto out = generate(gt, cfg);
    ASSERT_EQ(out.traces.size(), 3U);
    for (const Trace &t : out.traces.traces) {
        EXPECT_EQ(t.size(), 10U * (2 + 4 + 8));
        for (const Step &step : t.steps) {
            EXPECT_EQ(step.size(), 1U);
        }
    }
    for (const auto &meta : out.metadata.traces) {
        for (std::size_t i = 0; i < meta.instances.size(); ++i) {
            for (std::size_t j = i + 1; j < meta.instances.size(); ++j) {
                const auto &p = meta.instances[i].span;
                const auto &q = meta.instances[j].span;
                EXPECT_TRUE(p.last_step < q.first_step || q.last_step < p.first_step);
            }
        }
    }
    expect_projection(out, gt);
}

TEST(TraceGen, SmIEmitsOneMessagePerStep) {
    const GroundTruth gt = cpu_write();
    GenConfig cfg;
    cfg.mode = GenMode::sm_i;
    cfg.num_traces = 4;
    cfg.seed = 1000;
    const auto out = generate(gt, cfg);
    for (const Trace &t : out.traces.traces) {
        EXPECT_EQ(t.message_count(), t.size());
    }
    expect_projection(out, gt);
}

TEST(TraceGen, MmIRespectsBatchBound) {
    const GroundTruth gt = cpu_write();
    GenConfig cfg;
    cfg.mode = GenMode::mm_i;
    cfg.num_traces = 4;
    cfg.max_batch = 3;
    cfg.seed = 9;
    const auto out = generate(gt, cfg);
    bool saw_batch = false;
    for (const Trace &t : out.traces.traces) {
        for (const Step &step : t.steps) {
            EXPECT_GE(step.size(), 1U);
            EXPECT_LE(step.size(), 3U);
            saw_batch = saw_batch || step.size() > 1;
        }
    }
    EXPECT_TRUE(saw_batch);
    expect_projection(out, gt);
}

TEST(TraceGen, SameSeedSameOutput) {
    const GroundTruth gt = cpu_write();
    GenConfig cfg;
    cfg.mode = GenMode::mm_i;
    cfg.num_traces = 5;
    cfg.seed = 123456;
    cfg.address_mode = AddressMode::per_instance;
    cfg.address_pool = 1000;
    const auto one = generate(gt, cfg);
    const auto two = generate(gt, cfg);
    EXPECT_EQ(format_traces(one.traces), format_traces(two.traces));
    EXPECT_EQ(metadata_to_json(one.metadata, gt).dump(), metadata_to_json(two.metadata, gt).dump());
    cfg.seed = 123457;
    EXPECT_NE(format_traces(generate(gt, cfg).traces), format_traces(one.traces));
}

TEST(TraceGen, MaxActiveBoundsConcurrency) {
    const GroundTruth gt = cpu_write();
    GenConfig cfg;
    cfg.mode = GenMode::mm_i;
    cfg.num_traces = 3;
    cfg.max_active = 4;
    cfg.address_mode = AddressMode::per_instance;
    cfg.address_pool = 4;
    cfg.seed = 77;
    const auto out = generate(gt, cfg);
    for (const auto &meta : out.metadata.traces) {
        std::set<std::uint64_t> used;
        for (const auto &rec : meta.instances) {
            ASSERT_TRUE(rec.address.has_value());
            used.insert(*rec.address);
        }
        EXPECT_LE(used.size(), 4U);
    }
    expect_projection(out, gt);
}

TEST(TraceGen, AddressPoolExhaustionIsReported) {
    GenConfig cfg;
    cfg.mode = GenMode::sm_i;
    cfg.num_traces = 1;
    cfg.address_mode = AddressMode::per_instance;
    cfg.address_pool = 2;
    EXPECT_THROW((void)generate(cpu_write(), cfg), error);
}

TEST(TraceGen, RejectsBadConfig) {
    GenConfig cfg;
    cfg.instances_per_pattern = 0;
    EXPECT_THROW((void)generate(cpu_write(), cfg), error);
    EXPECT_THROW((void)generate(GroundTruth{}, GenConfig{}), error);
    EXPECT_THROW((void)gen_mode_from_string("fast"), error);
}

// Overlapping lifetimes never share an address; addresses stay inside the pool.
TEST(TraceGen, AddressAssignmentOnRandomSpans) {
    std::mt19937_64 rng{ 17 };
    for (int round = 0; round < 500; ++round) {
        std::vector<InstanceSpan> spans(1 + rng() % 20);
        for (auto &s : spans) {
            s.first_step = rng() % 30;
            s.last_step = s.first_step + rng() % 8;
        }
        std::size_t peak = 0;
        for (std::size_t step = 0; step < 40; ++step) {
            peak = std::max<std::size_t>(peak, std::count_if(spans.begin(), spans.end(), [&](const InstanceSpan &s) {
                                             return s.first_step <= step && step <= s.last_step;
                                         }));
        }
        const auto addrs = assign_addresses(spans, peak);
        for (std::size_t i = 0; i < spans.size(); ++i) {
            EXPECT_LT(addrs[i], peak);
            for (std::size_t j = i + 1; j < spans.size(); ++j) {
                const bool overlap = !(spans[i].last_step < spans[j].first_step || spans[j].last_step < spans[i].first_step);
                if (overlap) {
                    EXPECT_NE(addrs[i], addrs[j]);
                }
            }
        }
        if (peak > 1) {
            EXPECT_THROW((void)assign_addresses(spans, peak - 1), error);
        }
    }
}
