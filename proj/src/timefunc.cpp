#include "weaktime/timefunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace weaktime {

namespace {

constexpr double kNormEpsilon = 1e-300;

void require_time(double t) {
  if (!std::isfinite(t) || t < 0) throw NegativeTime("time must be finite and >= 0, got " + std::to_string(t));
}

const Operator& chi_projector(const SystemModel& model, std::size_t k) {
  const auto& obs = model.observable();
  if (k >= obs.size()) {
    throw UnknownIndex("observable index " + std::to_string(k) + " out of range (" +
                       std::to_string(obs.size()) + " values)");
  }
  return obs.projectors[k];
}

const Operator& final_projector(const SystemModel& model, std::size_t f) {
  const auto& finals = model.finals();
  if (f >= finals.size()) {
    throw UnknownIndex("final index " + std::to_string(f) + " out of range (" +
                       std::to_string(finals.size()) + " finals)");
  }
  return finals.projectors[f];
}

Operator exact_F(const SystemModel& model, const Operator& projector, double t) {
  const auto& spec = model.spectrum();
  const Eigen::Index n = model.dim();
  Operator f = spec.basis.adjoint() * projector * spec.basis;
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index j = 0; j < n; ++j) {
      f(m, j) *= phase_integral(spec.eigenvalues(m) - spec.eigenvalues(j), t);
    }
  }
  Operator out = spec.basis * f * spec.basis.adjoint();
  return (out + out.adjoint()) / 2.0;
}

Operator simpson_F(const SystemModel& model, const Operator& projector, double t, long samples) {
  const Eigen::Index n = model.dim();
  Operator acc = Operator::Zero(n, n);
  if (t == 0) return acc;
  const double h = t / static_cast<double>(samples);
  for (long i = 0; i <= samples; ++i) {
    const double w = (i == 0 || i == samples) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * interaction_picture(model, projector, h * static_cast<double>(i));
  }
  acc *= h / 3.0;
  return (acc + acc.adjoint()) / 2.0;
}

// Pieces shared by the conditional quantities for one (chi, final, t).
struct ConditionalPieces {
  Operator f;
  Operator p_tilde;
  double prob = 0;
};

ConditionalPieces conditional_pieces(const SystemModel& model, std::size_t k, std::size_t f,
                                     double t) {
  require_time(t);
  ConditionalPieces pieces;
  pieces.f = accumulate_F(model, k, t).matrix;
  pieces.p_tilde = interaction_picture(model, final_projector(model, f), t);
  pieces.prob = checked_real(expectation(model.initial(), pieces.p_tilde), "postselection probability");
  return pieces;
}

double relative_commutator_norm(const Operator& p_tilde, const Operator& f) {
  return frob_norm(commutator(p_tilde, f)) / (frob_norm(p_tilde) * frob_norm(f) + kNormEpsilon);
}

ConditionalResult components_from(const SystemModel& model, const ConditionalPieces& pieces,
                                  const Tolerances& tol) {
  if (!(pieces.prob >= tol.p_min)) {
    throw VanishingPostselection("postselection probability " + std::to_string(pieces.prob) +
                                 " is below p_min = " + std::to_string(tol.p_min));
  }
  const Complex sym = expectation(model.initial(), anticommutator(pieces.p_tilde, pieces.f));
  const Complex comm = expectation(model.initial(), commutator(pieces.p_tilde, pieces.f));

  ConditionalResult r;
  r.prob_f = pieces.prob;
  r.tau1 = checked_real(sym, "tau1 numerator") / (2 * pieces.prob);
  // <[A,B]> is purely imaginary for Hermitian A, B.
  r.tau2 = checked_real(Complex(comm.imag(), comm.real()), "tau2 numerator") / (2 * pieces.prob);
  r.commutator_norm = relative_commutator_norm(pieces.p_tilde, pieces.f);
  r.definite = r.commutator_norm <= tol.definiteness_threshold;
  return r;
}

}  // namespace

double SumRuleReport::max_residual() const {
  double m = chi_sum_dwell;
  for (const auto* v : {&weighted_tau1, &weighted_tau2, &chi_sum_tau1, &chi_sum_tau2}) {
    for (double x : *v) m = std::max(m, x);
  }
  return m;
}

Complex phase_integral(double omega, double t) {
  const double x = omega * t;
  if (std::abs(x) < 1e-8) return t * Complex(1 - x * x / 6, x / 2);
  // (e^{ix} - 1) / (i omega) = t e^{ix/2} sin(x/2) / (x/2), free of cancellation
  const double half = x / 2;
  return t * std::polar(std::sin(half) / half, half);
}

long quadrature_samples(const SystemModel& model, double t, const Tolerances& tol) {
  long n = 0;
  if (tol.quadrature_N) {
    n = std::max(2L, *tol.quadrature_N);
  } else {
    const double by_frequency = std::ceil(20 * frob_norm(model.hamiltonian()) * t);
    const double by_step = std::ceil(t / 1e-3);
    n = std::max({200L, static_cast<long>(by_frequency), static_cast<long>(by_step)});
  }
  return n + (n % 2);
}

Operator interaction_picture(const SystemModel& model, const Operator& a, double t) {
  if (!std::isfinite(t)) throw ValidationError("interaction_picture: non-finite time");
  require_same_dim(model.hamiltonian(), a, "interaction_picture");
  if (t == 0) return a;
  const Operator u = evolve_unitary(model.spectrum(), t);
  return u.adjoint() * a * u;
}

FOperator accumulate_F(const SystemModel& model, std::size_t chi_index, double t, FMethod method,
                       const Tolerances& tol) {
  require_time(t);
  const Operator& projector = chi_projector(model, chi_index);
  FOperator out;
  out.chi_value = model.observable().values[chi_index];
  out.t = t;
  out.method = method;
  out.matrix = method == FMethod::ExactEigenbasis
                   ? exact_F(model, projector, t)
                   : simpson_F(model, projector, t, quadrature_samples(model, t, tol));
  return out;
}

double presence_probability(const SystemModel& model, std::size_t chi_index, double t) {
  require_time(t);
  const Operator d = interaction_picture(model, chi_projector(model, chi_index), t);
  return checked_real(expectation(model.initial(), d), "presence probability");
}

double dwell_time(const SystemModel& model, std::size_t chi_index, double t) {
  const FOperator f = accumulate_F(model, chi_index, t);
  return checked_real(expectation(model.initial(), f.matrix), "dwell time");
}

double region_time(const SystemModel& model, const std::set<std::size_t>& region, double t) {
  if (region.empty()) throw ValidationError("region_time: empty region");
  double total = 0;
  for (std::size_t k : region) total += dwell_time(model, k, t);
  return total;
}

double postselection_probability(const SystemModel& model, std::size_t final_index, double t) {
  require_time(t);
  const Operator p = interaction_picture(model, final_projector(model, final_index), t);
  return checked_real(expectation(model.initial(), p), "postselection probability");
}

ConditionalResult conditional_components(const SystemModel& model, std::size_t chi_index,
                                         std::size_t final_index, double t, const Tolerances& tol) {
  return components_from(model, conditional_pieces(model, chi_index, final_index, t), tol);
}

double conditional_time(const SystemModel& model, std::size_t chi_index, std::size_t final_index,
                        double t, double detector_coeff, const Tolerances& tol) {
  const auto r = conditional_components(model, chi_index, final_index, t, tol);
  return r.tau1 + detector_coeff * r.tau2;
}

DefinitenessReport definiteness_check(const SystemModel& model, std::size_t chi_index,
                                      std::size_t final_index, double t, double threshold) {
  require_time(t);
  const Operator f = accumulate_F(model, chi_index, t).matrix;
  const Operator p = interaction_picture(model, final_projector(model, final_index), t);
  DefinitenessReport r;
  r.norm = relative_commutator_norm(p, f);
  r.definite = r.norm <= threshold;
  return r;
}

SumRuleReport sum_rule_report(const SystemModel& model, double t, const Tolerances& tol) {
  require_time(t);
  const auto& finals = model.finals();
  if (!finals.complete || finals.size() == 0) {
    throw IncompleteFinals("sum rules need a final family declared complete");
  }
  const std::size_t nchi = model.observable().size();
  const std::size_t nf = finals.size();

  std::vector<Operator> fs(nchi);
  std::vector<double> dwell(nchi);
  for (std::size_t k = 0; k < nchi; ++k) {
    fs[k] = accumulate_F(model, k, t).matrix;
    dwell[k] = checked_real(expectation(model.initial(), fs[k]), "dwell time");
  }

  SumRuleReport report;
  report.weighted_tau1.assign(nchi, 0.0);
  report.weighted_tau2.assign(nchi, 0.0);
  report.chi_sum_tau1.assign(nf, 0.0);
  report.chi_sum_tau2.assign(nf, 0.0);

  std::vector<double> acc1(nchi, 0.0), acc2(nchi, 0.0);
  for (std::size_t f = 0; f < nf; ++f) {
    ConditionalPieces pieces;
    pieces.p_tilde = interaction_picture(model, finals.projectors[f], t);
    pieces.prob = checked_real(expectation(model.initial(), pieces.p_tilde), "postselection probability");
    double sum1 = 0, sum2 = 0;
    for (std::size_t k = 0; k < nchi; ++k) {
      pieces.f = fs[k];
      const auto r = components_from(model, pieces, tol);
      acc1[k] += r.prob_f * r.tau1;
      acc2[k] += r.prob_f * r.tau2;
      sum1 += r.tau1;
      sum2 += r.tau2;
    }
    report.chi_sum_tau1[f] = std::abs(sum1 - t);
    report.chi_sum_tau2[f] = std::abs(sum2);
  }
  double dwell_sum = 0;
  for (std::size_t k = 0; k < nchi; ++k) {
    report.weighted_tau1[k] = std::abs(acc1[k] - dwell[k]);
    report.weighted_tau2[k] = std::abs(acc2[k]);
    dwell_sum += dwell[k];
  }
  report.chi_sum_dwell = std::abs(dwell_sum - t);
  return report;
}

}  // namespace weaktime
