#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pdfw/schedule.hpp"

namespace pdfw {
namespace {

TEST(Schedule, S1AtStart) {
  const auto s = schedule_eval(StepSchedule::s1(), 0, 1.0);
  EXPECT_EQ(s.tau, 1.0);
  EXPECT_EQ(s.sigma, 1.0);
  EXPECT_EQ(s.alpha, 1.0);
  EXPECT_EQ(s.theta, 0.0);
}

TEST(Schedule, S1AtTwo) {
  const double L = 3.0;
  const auto s = schedule_eval(StepSchedule::s1(), 2, L);
  EXPECT_DOUBLE_EQ(s.tau, 0.5);
  EXPECT_DOUBLE_EQ(s.sigma, 2.0 / (L * L));
  EXPECT_DOUBLE_EQ(s.alpha, std::pow(0.5, 0.49));
  EXPECT_EQ(s.theta, 0.0);
}

TEST(Schedule, S2IsConstantInTauSigma) {
  for (std::size_t k : {0u, 1u, 7u, 1000u}) {
    const auto s = schedule_eval(StepSchedule::s2(), k, 4.0);
    EXPECT_EQ(s.tau, 0.25);
    EXPECT_EQ(s.sigma, 0.25);
    EXPECT_DOUBLE_EQ(s.alpha, 2.0 / (2.0 + static_cast<double>(k)));
    EXPECT_EQ(s.theta, 1.0);
  }
}

TEST(Schedule, CustomRules) {
  const auto s = StepSchedule::custom(RateRule::power(0.5, 3.0, 1.0), RateRule::inverse_tau(2.0),
                                      RateRule::constant(0.25), 0.5);
  const auto st = s.eval(3, 2.0);
  EXPECT_DOUBLE_EQ(st.tau, 0.5 * 3.0 / 6.0);
  EXPECT_DOUBLE_EQ(st.sigma, 2.0 / (4.0 * st.tau));
  EXPECT_EQ(st.alpha, 0.25);
  EXPECT_EQ(st.theta, 0.5);
  const auto c = StepSchedule::custom(RateRule::constant_over_l(0.9), RateRule::constant_over_l(0.9),
                                      RateRule::power(1.0, 2.0, 1.0), 1.0);
  EXPECT_TRUE(c.constant_primal_dual_steps());
  EXPECT_DOUBLE_EQ(c.eval(0, 3.0).tau, 0.3);
}

TEST(Schedule, CustomRejectsInvalidRulesAtConstruction) {
  const auto ok = RateRule::constant(0.1);
  EXPECT_THROW(StepSchedule::custom(RateRule::constant(0.0), ok, ok, 0.0), ConfigError);
  EXPECT_THROW(StepSchedule::custom(ok, RateRule::constant(-1.0), ok, 0.0), ConfigError);
  EXPECT_THROW(StepSchedule::custom(ok, ok, RateRule::constant(1.5), 0.0), ConfigError);
  EXPECT_THROW(StepSchedule::custom(ok, ok, RateRule::constant_over_l(0.5), 0.0), ConfigError);
  EXPECT_THROW(StepSchedule::custom(RateRule::inverse_tau(), ok, ok, 0.0), ConfigError);
  EXPECT_THROW(StepSchedule::custom(ok, ok, ok, 1.5), ConfigError);
  EXPECT_THROW(StepSchedule::custom(RateRule::power(1.0, -1.0, 1.0), ok, ok, 0.0), ConfigError);
  EXPECT_NO_THROW(StepSchedule::custom(ok, ok, RateRule::constant(0.0), 0.0));
}

TEST(ScheduleValidator, S1MatchesDirectSummation) {
  const std::size_t K = 10000;
  const auto report = validate_schedule(StepSchedule::s1(), 1.0, K);
  EXPECT_TRUE(report.all_finite);
  EXPECT_TRUE(report.alpha_sum_decreasing);
  EXPECT_TRUE(report.sigma_sum_decreasing);
  EXPECT_TRUE(report.tau_vanishing);
  EXPECT_TRUE(report.tau_sum_diverging);
  EXPECT_EQ(report.checkpoints[0].k, 1000u);
  EXPECT_EQ(report.checkpoints[1].k, 5000u);
  EXPECT_EQ(report.checkpoints[2].k, 10000u);

  std::vector<double> tau(K + 1), one_minus_alpha(K + 1), inv_sigma(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    const double r = 2.0 / (2.0 + static_cast<double>(k));
    tau[k] = r;
    one_minus_alpha[k] = 1.0 - std::pow(r, 0.49);
    inv_sigma[k] = 1.0 / (1.0 + 1.0 / r);
  }
  for (const auto& cp : report.checkpoints) {
    const double a = testing::direct_double_sum(tau, one_minus_alpha, cp.k);
    const double s = testing::direct_double_sum(tau, inv_sigma, cp.k);
    EXPECT_NEAR(cp.alpha_double_sum, a, 1e-9 * a) << "k=" << cp.k;
    EXPECT_NEAR(cp.sigma_double_sum, s, 1e-9 * s) << "k=" << cp.k;
    double partial = 0.0;
    for (std::size_t j = 0; j <= cp.k; ++j) partial += tau[j];
    EXPECT_NEAR(cp.tau_partial_sum, partial, 1e-12 * partial);
  }
}

TEST(ScheduleValidator, ConstantTauIsNotVanishing) {
  const auto report = validate_schedule(StepSchedule::s2(), 2.0, 1000);
  EXPECT_FALSE(report.tau_vanishing);
  EXPECT_TRUE(report.tau_sum_diverging);
  EXPECT_TRUE(report.all_finite);
}

TEST(ScheduleValidator, FullStepAlphaAnnihilatesFirstSum) {
  const auto s = StepSchedule::custom(RateRule::power(1.0, 2.0, 1.0), RateRule::constant(1.0),
                                      RateRule::constant(1.0), 0.0);
  const auto report = validate_schedule(s, 1.0, 100);
  for (const auto& cp : report.checkpoints) EXPECT_EQ(cp.alpha_double_sum, 0.0);
  EXPECT_TRUE(report.alpha_sum_decreasing);
}

TEST(ScheduleValidator, RejectsShortHorizon) {
  EXPECT_THROW(validate_schedule(StepSchedule::s1(), 1.0, 9), ContractViolation);
  // Over a short horizon the first double sum is still growing.
  const auto text = format_report(validate_schedule(StepSchedule::s1(), 1.0, 10));
  EXPECT_NE(text.find("alpha_double_sum_decreasing=false"), std::string::npos) << text;
  EXPECT_NE(text.find("\n10,0.16666666666666666,"), std::string::npos) << text;
}

}  // namespace
}  // namespace pdfw
