#include "pdfw/schedule.hpp"

#include <cmath>
#include <cstdio>

#include "pdfw/errors.hpp"

namespace pdfw {

double RateRule::eval(std::size_t k, double lipschitz, double tau_k) const {
  switch (kind) {
    case Kind::Constant: return scale;
    case Kind::ConstantOverL: return scale / lipschitz;
    case Kind::Power: return scale * std::pow(c / (c + static_cast<double>(k)), p);
    case Kind::InverseTau: return scale / (lipschitz * lipschitz * tau_k);
  }
  return 0.0;
}

namespace {

void check_positive_rule(const RateRule& r, const char* name, bool allow_inverse_tau) {
  const std::string n(name);
  if (r.kind == RateRule::Kind::InverseTau && !allow_inverse_tau) {
    throw ConfigError(n + ": inverse_tau rule is only valid for sigma");
  }
  if (!(r.scale > 0.0) || !std::isfinite(r.scale)) {
    throw ConfigError(n + ": scale must be positive and finite");
  }
  if (r.kind == RateRule::Kind::Power && (!(r.c > 0.0) || !(r.p >= 0.0))) {
    throw ConfigError(n + ": power rule needs c > 0 and p >= 0");
  }
}

void check_alpha_rule(const RateRule& r) {
  switch (r.kind) {
    case RateRule::Kind::Constant:
    case RateRule::Kind::Power:
      break;
    default:
      throw ConfigError("alpha: only constant or power rules are allowed");
  }
  if (!(r.scale >= 0.0 && r.scale <= 1.0)) throw ConfigError("alpha: values must lie in [0, 1]");
  if (r.kind == RateRule::Kind::Power && (!(r.c > 0.0) || !(r.p >= 0.0))) {
    throw ConfigError("alpha: power rule needs c > 0 and p >= 0");
  }
}

}  // namespace

StepSchedule::StepSchedule(Kind kind, RateRule tau, RateRule sigma, RateRule alpha, double theta)
    : kind_(kind), tau_(tau), sigma_(sigma), alpha_(alpha), theta_(theta) {}

StepSchedule StepSchedule::s1() {
  return {Kind::S1, RateRule::power(1.0, 2.0, 1.0), RateRule::inverse_tau(),
          RateRule::power(1.0, 2.0, 0.49), 0.0};
}

StepSchedule StepSchedule::s2() {
  return {Kind::S2, RateRule::constant_over_l(1.0), RateRule::constant_over_l(1.0),
          RateRule::power(1.0, 2.0, 1.0), 1.0};
}

StepSchedule StepSchedule::custom(RateRule tau, RateRule sigma, RateRule alpha, double theta) {
  check_positive_rule(tau, "tau", false);
  check_positive_rule(sigma, "sigma", true);
  check_alpha_rule(alpha);
  if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("theta must lie in [0, 1]");
  return {Kind::Custom, tau, sigma, alpha, theta};
}

std::string StepSchedule::name() const {
  switch (kind_) {
    case Kind::S1: return "S1";
    case Kind::S2: return "S2";
    case Kind::Custom: return "custom";
  }
  return "unknown";
}

StepSizes StepSchedule::eval(std::size_t k, double lipschitz) const {
  if (!(lipschitz > 0.0)) throw ContractViolation("schedule evaluation needs L > 0");
  StepSizes s;
  s.tau = tau_.eval(k, lipschitz, 0.0);
  s.sigma = sigma_.eval(k, lipschitz, s.tau);
  s.alpha = alpha_.eval(k, lipschitz, s.tau);
  s.theta = theta_;
  return s;
}

StepSizes schedule_eval(const StepSchedule& schedule, std::size_t k, double lipschitz) {
  return schedule.eval(k, lipschitz);
}

ScheduleReport validate_schedule(const StepSchedule& schedule, double lipschitz, std::size_t horizon) {
  if (horizon < 10) throw ContractViolation("validate_schedule: horizon must be at least 10");
  const std::array<std::size_t, 3> marks{horizon / 10, horizon / 2, horizon};

  ScheduleReport report;
  double partial = 0.0;
  double s_alpha = 0.0;
  double s_sigma = 0.0;
  double tau_prev = 0.0;
  std::size_t next = 0;
  for (std::size_t k = 0; k <= horizon; ++k) {
    const StepSizes st = schedule.eval(k, lipschitz);
    if (k > 0) {
      s_alpha = (1.0 - st.alpha) * (s_alpha + tau_prev);
      s_sigma = (s_sigma + tau_prev) / (1.0 + st.sigma);
    }
    partial += st.tau;
    tau_prev = st.tau;
    while (next < marks.size() && marks[next] == k) {
      report.checkpoints[next] = {k, st.tau, partial, s_alpha, s_sigma};
      ++next;
    }
  }

  const auto& c = report.checkpoints;
  auto decreasing = [](double a, double b, double d) { return a > b && b > d; };
  auto settling = [](double a, double b, double d) { return b <= a && d <= b && (d < a || a == 0.0); };
  report.tau_vanishing = decreasing(c[0].tau, c[1].tau, c[2].tau);
  report.tau_sum_diverging = c[0].tau_partial_sum < c[1].tau_partial_sum &&
                             c[1].tau_partial_sum < c[2].tau_partial_sum;
  report.alpha_sum_decreasing =
      settling(c[0].alpha_double_sum, c[1].alpha_double_sum, c[2].alpha_double_sum);
  report.sigma_sum_decreasing =
      settling(c[0].sigma_double_sum, c[1].sigma_double_sum, c[2].sigma_double_sum);
  report.all_finite = true;
  for (const auto& cp : c) {
    report.all_finite = report.all_finite && std::isfinite(cp.tau) &&
                        std::isfinite(cp.tau_partial_sum) && std::isfinite(cp.alpha_double_sum) &&
                        std::isfinite(cp.sigma_double_sum);
  }
  return report;
}

std::string format_report(const ScheduleReport& report) {
  std::string out = "k,tau_k,sum_tau,alpha_double_sum,sigma_double_sum\n";
  char line[256];
  for (const auto& cp : report.checkpoints) {
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g,%.17g\n", cp.k, cp.tau,
                  cp.tau_partial_sum, cp.alpha_double_sum, cp.sigma_double_sum);
    out += line;
  }
  auto flag = [](bool b) { return b ? "true" : "false"; };
  out += std::string("tau_vanishing=") + flag(report.tau_vanishing) + "\n";
  out += std::string("tau_sum_diverging=") + flag(report.tau_sum_diverging) + "\n";
  out += std::string("alpha_double_sum_decreasing=") + flag(report.alpha_sum_decreasing) + "\n";
  out += std::string("sigma_double_sum_decreasing=") + flag(report.sigma_sum_decreasing) + "\n";
  out += std::string("all_finite=") + flag(report.all_finite) + "\n";
  return out;
}

}  // namespace pdfw
