// SPDX-License-Identifier: Apache-2.0
#include "gentool/metrics/metrics.hpp"

#include "fixture_cases.hpp"

#include <gtest/gtest.h>

using namespace gentool;
using fixtures::load;

namespace {

class Fixtures : public ::testing::TestWithParam<std::string> {};

}  // namespace

TEST_P(Fixtures, ScoresMatchExpectation) {
    const auto f = load(GetParam());
    const auto& expect = f.data["expect"];
    const auto out = textio::parse_model_output(f.data["response"].get<std::string>());
    const auto score = metrics::score_instance(out, f.instance);

    EXPECT_EQ(score.format_ok, expect["format_ok"].get<double>());
    EXPECT_EQ(score.tool_selection, expect["tool_selection"].get<double>());
    EXPECT_NEAR(score.param_name, expect["param_name"].get<double>(), 1e-12);
    if (expect.contains("param_value")) {
        EXPECT_NEAR(score.param_value, expect["param_value"].get<double>(), 1e-12);
    } else {
        ASSERT_TRUE(out.parse_ok);
        const double v = fixtures::oracle_param_value(out.invocation, f.instance.gold_call);
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, 1.0);
        EXPECT_NEAR(score.param_value, v, 1e-12);
    }

    const auto rank = metrics::rank_analysis({out}, {f.instance});
    EXPECT_EQ(rank.consistency, expect["consistent"].get<bool>() ? 100.0 : 0.0);
    EXPECT_EQ(rank.pairs, 5u);
    EXPECT_NEAR(rank.ordering_accuracy, expect["pairs_correct"].get<double>() / 5.0 * 100.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(ErrorCases, Fixtures,
                         ::testing::ValuesIn(fixtures::names()));

TEST(FixtureDetails, CarRentalInvocation) {
    const auto f = load("car_rental_ranked");
    const auto out = textio::parse_model_output(f.data["response"].get<std::string>());
    ASSERT_TRUE(out.parse_ok);
    EXPECT_EQ(textio::render_invocation(out.invocation), R"(simple_car_rental("carCode"="ABC123"))");
}

TEST(FixtureDetails, WashingMachineValueBreakdown) {
    const auto f = load("washing_machine_partial_values");
    const auto out = textio::parse_model_output(f.data["response"].get<std::string>());
    ASSERT_TRUE(out.parse_ok);
    // Hand count: appliance loses "LG " (3 of 18), problem keeps 10 of 41
    // characters (31 deletions), four values match, appointment_time absent.
    const double expected = ((1.0 - 3.0 / 18.0) + 1.0 + (1.0 - 31.0 / 41.0) + 1.0 + 1.0 + 0.0) / 6.0;
    EXPECT_NEAR(metrics::score_param_values(out.invocation, f.instance.gold_call), expected, 1e-12);
}

TEST(FixtureDetails, BareNumberKeptAsText) {
    const auto f = load("apartment_hallucinated_id");
    const auto out = textio::parse_model_output(f.data["response"].get<std::string>());
    ASSERT_TRUE(out.parse_ok);
    EXPECT_EQ(*out.invocation.find_argument("marketPrice"), "3200000");
    EXPECT_EQ(*out.invocation.find_argument("apartmentID"), "A123");
}
