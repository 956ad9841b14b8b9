#include <gtest/gtest.h>

#include <cmath>

#include "dlmorse/cyclic_system.hpp"
#include "dlmorse/error.hpp"

using namespace dlmorse;

TEST(Nonlinearity, Families) {
  const auto lin = Nonlinearity::linear(-1, 2);
  EXPECT_DOUBLE_EQ(lin(1, 1), 1.0);
  EXPECT_EQ(lin.d1_at_origin(), -1.0);
  EXPECT_EQ(lin.d2_at_origin(), 2.0);
  const auto th = Nonlinearity::tanh_feedback(-1, -2, 2);
  EXPECT_NEAR(th(0.5, 0.3), -0.5 - 2 * std::tanh(0.6), 1e-15);
  EXPECT_EQ(th.d2_at_origin(), -4.0);
  const auto mg = Nonlinearity::mackey_glass(-1, -2, 4);
  EXPECT_NEAR(mg(0, 1), -1.0, 1e-15);
  EXPECT_EQ(mg.d2_at_origin(), -2.0);
}

TEST(Nonlinearity, PresetRoundTrip) {
  const auto th = Nonlinearity::tanh_feedback(-1, -2, 2);
  ASSERT_TRUE(th.preset());
  const auto again = Nonlinearity::from_preset(*th.preset());
  EXPECT_DOUBLE_EQ(again(0.3, -0.7), th(0.3, -0.7));
  EXPECT_THROW(Nonlinearity::from_preset({"cosine", {}}), Error);
  EXPECT_THROW(Nonlinearity::from_preset({"linear", {{"a", 1.0}}}), Error);
}

TEST(CyclicSystem, ValidWrightSystem) {
  const auto sys = CyclicSystemSpec::make({Nonlinearity::tanh_feedback(-1, -2, 2)}, Feedback::Negative, 3.0);
  EXPECT_EQ(sys.n_components(), 0u);
  EXPECT_TRUE(sys.validate().empty());
  EXPECT_NEAR(sys.lipschitz_bound(), 5.0, 0.05);
}

TEST(CyclicSystem, WrongFeedbackSignIsReported) {
  const auto sys = CyclicSystemSpec::make({Nonlinearity::linear(-1, 0.5)}, Feedback::Negative, 3.0);
  EXPECT_FALSE(sys.validate().empty());
}

TEST(CyclicSystem, InnerComponentsNeedPositiveCoupling) {
  const auto bad = CyclicSystemSpec::make({Nonlinearity::linear(-1, -1), Nonlinearity::linear(-1, -1)},
                                          Feedback::Positive, 3.0);
  EXPECT_FALSE(bad.validate().empty());
  const auto good = CyclicSystemSpec::make({Nonlinearity::linear(-1, 0.5), Nonlinearity::tanh_feedback(-1, -0.5, 1)},
                                           Feedback::Negative, 3.0);
  EXPECT_TRUE(good.validate().empty());
}

TEST(CyclicSystem, RejectsBadArguments) {
  EXPECT_THROW(CyclicSystemSpec::make({}, Feedback::Negative, 1.0), Error);
  EXPECT_THROW(CyclicSystemSpec::make({Nonlinearity::linear(-1, -1)}, Feedback::Negative, -1.0), Error);
  EXPECT_THROW(feedback_from_int(0), Error);
  EXPECT_EQ(feedback_from_int(1), Feedback::Positive);
}

TEST(CyclicSystem, SatisfiesFeedback) {
  EXPECT_TRUE(satisfies_feedback(Nonlinearity::linear(0, -1), -1, 2.0));
  EXPECT_FALSE(satisfies_feedback(Nonlinearity::linear(0, -1), 1, 2.0));
}
