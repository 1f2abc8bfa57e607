#include "properties.hpp"

#include <gtest/gtest.h>

namespace {

void expect_clean(const props::Outcome &o, std::size_t min_cases) {
    EXPECT_GE(o.cases, min_cases);
    EXPECT_EQ(o.failures, 0U) << o.first_failure;
}

}  // namespace

TEST(Properties, ConfidenceBounds) { expect_clean(props::confidence_bounds(101, 600), 500); }

TEST(Properties, DuplicationInvariance) { expect_clean(props::duplication_invariance(202, 500), 500); }

TEST(Properties, ChainingInvariants) { expect_clean(props::chaining_invariants(303, 500), 500); }

TEST(Properties, PostprocessIdempotence) { expect_clean(props::postprocess_idempotence(404, 800), 500); }

TEST(Properties, GeneratorProjection) { expect_clean(props::generator_projection(505, 500), 500); }

TEST(Properties, SupportMatchesExhaustiveSearch) { expect_clean(props::support_oracle(606, 1000), 1000); }
