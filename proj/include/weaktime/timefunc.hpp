#pragma once

// Weak-measurement time observables for a validated SystemModel.
//
// Notation used below, with hbar = 1:
//   U_S(t)      = exp(-i H_S t)
//   X~(t)       = U_S(t)^dagger X U_S(t)                 (interaction picture)
//   F(k, t)     = int_0^t Pi_k~(s) ds                     (accumulated operator)
//   tau(k, t)   = <F(k, t)>                               (dwell time)
//   p_f(t)      = <P_f~(t)>                               (postselection weight)
//   tau1_f(k,t) = <P_f~ F + F P_f~> / (2 p_f)
//   tau2_f(k,t) = <[P_f~, F]> / (2 i p_f)
//   tau_f(k,t)  = tau1_f + c tau2_f,  c = 2(<q><p> - Re<qp>) of the pointer
//
// All expectations are taken in the initial system state.

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "weaktime/model.hpp"

namespace weaktime {

struct Tolerances {
  double p_min = 1e-10;                   // postselection floor
  double definiteness_threshold = 1e-9;   // relative Frobenius norm of [P_f~, F]
  std::optional<long> quadrature_N;       // overrides the automatic Simpson sample count
};

enum class FMethod { ExactEigenbasis, Quadrature };

struct FOperator {
  double chi_value = 0;
  double t = 0;
  Operator matrix;
  FMethod method = FMethod::ExactEigenbasis;
};

struct ConditionalResult {
  double tau1 = 0;
  double tau2 = 0;
  double prob_f = 0;
  double commutator_norm = 0;
  bool definite = false;
};

struct DefinitenessReport {
  double norm = 0;
  bool definite = false;
};

struct SumRuleReport {
  // indexed by chi
  std::vector<double> weighted_tau1;  // |sum_f p_f tau1_f(k) - tau(k)|
  std::vector<double> weighted_tau2;  // |sum_f p_f tau2_f(k)|
  // indexed by final
  std::vector<double> chi_sum_tau1;   // |sum_k tau1_f(k) - t|
  std::vector<double> chi_sum_tau2;   // |sum_k tau2_f(k)|
  // |sum_k tau(k) - t|
  double chi_sum_dwell = 0;

  double max_residual() const;
};

/// exp(iwt) integrated over [0, t]; guarded Taylor series for |w t| < 1e-8.
Complex phase_integral(double omega, double t);

/// Simpson sample count: even, >= 200, >= 20 |H_S|_F t and with step <= 1e-3.
long quadrature_samples(const SystemModel& model, double t, const Tolerances& tol = {});

Operator interaction_picture(const SystemModel& model, const Operator& a, double t);

FOperator accumulate_F(const SystemModel& model, std::size_t chi_index, double t,
                       FMethod method = FMethod::ExactEigenbasis, const Tolerances& tol = {});

double presence_probability(const SystemModel& model, std::size_t chi_index, double t);

double dwell_time(const SystemModel& model, std::size_t chi_index, double t);

double region_time(const SystemModel& model, const std::set<std::size_t>& region, double t);

/// <P_f~(t)>, no floor applied.
double postselection_probability(const SystemModel& model, std::size_t final_index, double t);

ConditionalResult conditional_components(const SystemModel& model, std::size_t chi_index,
                                         std::size_t final_index, double t,
                                         const Tolerances& tol = {});

double conditional_time(const SystemModel& model, std::size_t chi_index, std::size_t final_index,
                        double t, double detector_coeff, const Tolerances& tol = {});

DefinitenessReport definiteness_check(const SystemModel& model, std::size_t chi_index,
                                      std::size_t final_index, double t,
                                      double threshold = Tolerances{}.definiteness_threshold);

SumRuleReport sum_rule_report(const SystemModel& model, double t, const Tolerances& tol = {});

}  // namespace weaktime
