#include <gtest/gtest.h>

#include "properties.hpp"

using namespace anisodg;

TEST(Properties, AmgVcycleContracts)
{
    EXPECT_LE(properties::amg_contraction(), 0.5);
}

TEST(Properties, CondestBracketsOneNormCondition)
{
    const auto r = properties::condest_ratios();
    EXPECT_GE(r.min_ratio, 0.1);
    EXPECT_LE(r.max_ratio, 1.0 + 1e-10);
}

TEST(Properties, MultiplicativeCombinationMatchesErrorPropagation)
{
    EXPECT_LE(properties::multiplicative_identity_error(), 1e-12);
}

TEST(Properties, InclusionIsContinuousAcrossFaces)
{
    EXPECT_LE(properties::inclusion_jump(), 1e-11);
}

TEST(Properties, SuiteReportsEveryCheckPassing)
{
    const auto checks = properties::run_all();
    EXPECT_GE(checks.size(), 10u);
    for (const auto& c : checks) {
        EXPECT_TRUE(c.pass) << c.name << " = " << c.value << " (bound " << c.bound << ")";
    }
}
