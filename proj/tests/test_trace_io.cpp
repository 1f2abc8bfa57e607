#include "flowminer/trace_io.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace flowminer;
using namespace testutil;

TEST(TraceIo, ParsesStepsAddressesAndComments) {
    const TraceSet set = parse_traces(
        "# comment\n"
        "\n"
        "CPU_x:Cache_x:m1@10\n"
        "  Cache_x:Bus:m2@10 ; CPU_x:Cache_x:m1@15  \n"
        "Bus:Mem:m3\n");
    ASSERT_EQ(set.size(), 1U);
    const Trace &t = set.traces[0];
    ASSERT_EQ(t.size(), 3U);
    EXPECT_EQ(t.steps[1].size(), 2U);
    EXPECT_EQ(t.steps[0][0].address, 10U);
    EXPECT_EQ(t.steps[1][1].message, (Message{ "CPU_x", "Cache_x", "m1" }));
    EXPECT_EQ(t.steps[1][1].address, 15U);
    EXPECT_FALSE(t.steps[2][0].address.has_value());
}

TEST(TraceIo, SplitsMultiTraceFiles) {
    const TraceSet set = parse_traces("== trace first ==\nA:B:a\n== trace second ==\nA:B:a\nB:C:b\n");
    ASSERT_EQ(set.size(), 2U);
    EXPECT_EQ(set.traces[0].id, "first");
    EXPECT_EQ(set.traces[1].id, "second");
    EXPECT_EQ(set.traces[1].size(), 2U);
}

TEST(TraceIo, ErrorsCarryLineNumbers) {
    try {
        (void)parse_traces("A:B:a\nA:B\n", "bad.trace");
        FAIL() << "expected a parse error";
    } catch (const parse_error &e) {
        EXPECT_EQ(e.line(), 2U);
        EXPECT_EQ(e.source(), "bad.trace");
        EXPECT_NE(std::string{ e.what() }.find("bad.trace:2"), std::string::npos);
    }
    EXPECT_THROW((void)parse_traces("A:B:a@x\n"), parse_error);
    EXPECT_THROW((void)parse_traces("A:B:a@\n"), parse_error);
    EXPECT_THROW((void)parse_traces("A:B:a;;B:C:b\n"), parse_error);
    EXPECT_THROW((void)parse_traces("== trace ==\n"), parse_error);
    EXPECT_THROW((void)parse_traces("== nope\n"), parse_error);
}

// Serialization keeps the multiset of instances of every step.
TEST(TraceIo, RoundTripPreservesInstanceMultisets) {
    std::mt19937_64 rng{ 11 };
    for (int round = 0; round < 200; ++round) {
        TraceSet set;
        const std::size_t n = 1 + rng() % 3;
        for (std::size_t i = 0; i < n; ++i) {
            Trace t = oracle::random_trace(rng, 10, 4, 3);
            t.id = "t" + std::to_string(i);
            for (auto &step : t.steps) {
                for (auto &mi : step) {
                    if (rng() % 2 == 0) {
                        mi.address = rng() % 1000;
                    }
                }
            }
            set.traces.push_back(std::move(t));
        }
        const TraceSet back = parse_traces(format_traces(set));
        ASSERT_EQ(back.size(), set.size());
        for (std::size_t i = 0; i < set.size(); ++i) {
            EXPECT_EQ(back.traces[i].id, set.traces[i].id);
            ASSERT_EQ(back.traces[i].size(), set.traces[i].size());
            for (std::size_t s = 0; s < set.traces[i].size(); ++s) {
                auto key = [](const Step &step) {
                    std::vector<std::string> out;
                    for (const auto &mi : step) {
                        out.push_back(render_instance(mi));
                    }
                    std::sort(out.begin(), out.end());
                    return out;
                };
                EXPECT_EQ(key(back.traces[i].steps[s]), key(set.traces[i].steps[s]));
            }
        }
    }
}
