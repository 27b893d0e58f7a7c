#include "weaktime/twolevel.hpp"

#include <cmath>

namespace weaktime::twolevel {

namespace {

// Below this postselection weight the closed forms divide by ~0.
constexpr double kSingularWeight = 1e-14;

void require_level(int level) {
  if (level != 0 && level != 1) throw UnknownIndex("two-level index must be 0 or 1, got " + std::to_string(level));
}

void require_time(double t) {
  if (!std::isfinite(t) || t < 0) throw NegativeTime("time must be finite and >= 0");
}

}  // namespace

double Params::rabi() const { return std::sqrt(omega * omega + 4 * std::norm(v)); }

double Params::ratio() const {
  const double big = rabi();
  return big == 0 ? 1.0 : (omega * omega) / (big * big);
}

SystemModel build_two_level(double omega, std::complex<double> v) {
  Operator h(2, 2);
  h << -omega / 2, std::conj(v),
       v,          omega / 2;

  Ket ground = Ket::Zero(2);
  ground(0) = 1;
  const Operator p0 = ground * ground.adjoint();
  const Operator p1 = Operator::Identity(2, 2) - p0;

  return validate_system(SystemDraft{
      .hamiltonian = h,
      .initial = State::pure(ground),
      .observable = {.values = {0.0, 1.0}, .projectors = {p0, p1}},
      .finals = {.labels = {"0", "1"}, .projectors = {p0, p1}, .complete = true},
  });
}

Dwell dwell_closed(const Params& params, double t) {
  require_time(t);
  const double big = params.rabi();
  if (big == 0) return {t, 0.0};
  const double r = params.ratio();
  const double osc = std::sin(big * t) * (1 - r) / (2 * big);
  return {0.5 * (1 + r) * t + osc, 0.5 * (1 - r) * t - osc};
}

double rabi_probability(const Params& params, double t, int level) {
  require_level(level);
  require_time(t);
  const double s = std::sin(params.rabi() * t / 2);
  const double p1 = (1 - params.ratio()) * s * s;
  return level == 1 ? p1 : 1 - p1;
}

Conditional conditional_closed(const Params& params, double t, int final_level) {
  require_level(final_level);
  require_time(t);
  if (rabi_probability(params, t, final_level) < kSingularWeight) {
    throw SingularPostselection("level " + std::to_string(final_level) +
                                " has vanishing probability at t = " + std::to_string(t));
  }

  const double big = params.rabi();
  if (big == 0) return {t, 0.0, 0.0, 0.0};  // only reachable for final 0

  const double w = params.omega;
  const double r = params.ratio();
  const double half = big * t / 2;

  Conditional c;
  if (final_level == 1) {
    const double t_cot = t * std::cos(half) / std::sin(half);
    c.tau1_of_0 = t / 2;
    c.tau1_of_1 = t / 2;
    c.tau2_of_0 = w / (2 * big) * (2 / big - t_cot);
    c.tau2_of_0_uncorrected = w / (2 * big) * (1 - t_cot);
    return c;
  }

  const double den = 2 * ((1 + r) + (1 - r) * std::cos(big * t));
  c.tau1_of_0 =
      ((1 + 3 * r) * t + (1 - r) * (2 / big * std::sin(big * t) + t * std::cos(big * t))) / den;
  c.tau1_of_1 = (1 - r) * (t + t * std::cos(big * t) - 2 / big * std::sin(big * t)) / den;
  c.tau2_of_0_uncorrected =
      w / big * (1 - r) * std::sin(half) * (t * std::cos(half) - 2 / big * std::sin(half)) / den;
  c.tau2_of_0 = 2 * c.tau2_of_0_uncorrected;
  return c;
}

}  // namespace weaktime::twolevel
