#pragma once

#include <array>
#include <cstddef>
#include <string>

namespace pdfw {

/// One scalar step-size sequence.
///   Constant       value = scale
///   ConstantOverL  value = scale / L
///   Power          value = scale * (c / (c + k))^p
///   InverseTau     value = scale / (L^2 * tau_k)   (sigma only)
struct RateRule {
  enum class Kind { Constant, ConstantOverL, Power, InverseTau };
  Kind kind = Kind::Constant;
  double scale = 1.0;
  double c = 1.0;
  double p = 1.0;

  static RateRule constant(double value) { return {Kind::Constant, value, 1.0, 1.0}; }
  static RateRule constant_over_l(double scale) { return {Kind::ConstantOverL, scale, 1.0, 1.0}; }
  static RateRule power(double scale, double c, double p) { return {Kind::Power, scale, c, p}; }
  static RateRule inverse_tau(double scale = 1.0) { return {Kind::InverseTau, scale, 1.0, 1.0}; }

  double eval(std::size_t k, double lipschitz, double tau_k) const;
  bool is_constant() const noexcept { return kind == Kind::Constant || kind == Kind::ConstantOverL; }
};

struct StepSizes {
  double tau = 0.0;
  double sigma = 0.0;
  double alpha = 0.0;
  double theta = 0.0;
};

class StepSchedule {
 public:
  enum class Kind { S1, S2, Custom };

  /// tau_k = 2/(2+k), sigma_k = 1/(L^2 tau_k), alpha_k = (2/(2+k))^0.49, theta = 0.
  static StepSchedule s1();
  /// tau_k = sigma_k = 1/L, alpha_k = 2/(2+k), theta = 1.
  static StepSchedule s2();
  /// Throws ConfigError if a rule can produce tau, sigma <= 0 or alpha outside [0, 1].
  static StepSchedule custom(RateRule tau, RateRule sigma, RateRule alpha, double theta);

  Kind kind() const noexcept { return kind_; }
  std::string name() const;
  double theta() const noexcept { return theta_; }
  const RateRule& tau_rule() const noexcept { return tau_; }
  const RateRule& sigma_rule() const noexcept { return sigma_; }
  const RateRule& alpha_rule() const noexcept { return alpha_; }
  bool constant_primal_dual_steps() const noexcept { return tau_.is_constant() && sigma_.is_constant(); }

  StepSizes eval(std::size_t k, double lipschitz) const;

 private:
  StepSchedule(Kind kind, RateRule tau, RateRule sigma, RateRule alpha, double theta);

  Kind kind_;
  RateRule tau_;
  RateRule sigma_;
  RateRule alpha_;
  double theta_;
};

StepSizes schedule_eval(const StepSchedule& schedule, std::size_t k, double lipschitz);

/// Numerical look at the convergence-theorem conditions over a finite horizon.
struct ScheduleCheckpoint {
  std::size_t k = 0;
  double tau = 0.0;
  double tau_partial_sum = 0.0;   // sum_{j<=k} tau_j
  double alpha_double_sum = 0.0;  // sum_{j=1}^k tau_{j-1} prod_{i=j}^k (1 - alpha_i)
  double sigma_double_sum = 0.0;  // sum_{j=1}^k tau_{j-1} prod_{i=j}^k 1/(1 + sigma_i)
};

struct ScheduleReport {
  std::array<ScheduleCheckpoint, 3> checkpoints{};
  bool tau_vanishing = false;           // tau_k decreasing across checkpoints
  bool tau_sum_diverging = false;       // partial sums increasing across checkpoints
  bool alpha_sum_decreasing = false;
  bool sigma_sum_decreasing = false;
  bool all_finite = false;
};

/// Evaluates the conditions at k in {K/10, K/2, K}. A diagnostic only.
ScheduleReport validate_schedule(const StepSchedule& schedule, double lipschitz, std::size_t horizon);

std::string format_report(const ScheduleReport& report);

}  // namespace pdfw
