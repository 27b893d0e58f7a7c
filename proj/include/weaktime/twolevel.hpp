#pragma once

// Closed-form results for a two-level system driven between its levels:
//
//   H = diag(-omega/2, +omega/2) + v |1><0| + conj(v) |0><1|,   psi(0) = |0>
//
// with Rabi frequency Omega = sqrt(omega^2 + 4|v|^2). Levels are ordered
// (|0>, |1>), so index 0 is the lower unperturbed level.

#include <complex>

#include "weaktime/model.hpp"

namespace weaktime::twolevel {

struct Params {
  double omega = 0;
  std::complex<double> v;

  double rabi() const;
  /// omega^2 / Omega^2, or 1 when Omega = 0 (no transitions).
  double ratio() const;
};

SystemModel build_two_level(double omega, std::complex<double> v);

struct Dwell {
  double tau0 = 0;
  double tau1 = 0;
};

/// Unconditional times spent in levels 0 and 1. Omega = 0 returns the
/// no-transition limit tau0 = t, tau1 = 0.
Dwell dwell_closed(const Params& params, double t);

struct Conditional {
  double tau1_of_0 = 0;  // tau^(1)_f(0, t)
  double tau2_of_0 = 0;  // tau^(2)_f(0, t), consistent with the general commutator formula
  double tau1_of_1 = 0;  // tau^(1)_f(1, t)
  // Older closed form for tau^(2)_f(0, t), kept for comparison only: for
  // final 0 it is half of tau2_of_0, for final 1 it reads
  // (omega/2 Omega)(1 - t cot(Omega t/2)). Neither matches the commutator
  // formula or the pointer simulation.
  double tau2_of_0_uncorrected = 0;
};

/// Conditional components postselected on level `final_level` (0 or 1).
/// Throws SingularPostselection where that level has zero probability.
Conditional conditional_closed(const Params& params, double t, int final_level);

/// Population of `level` at time t.
double rabi_probability(const Params& params, double t, int level);

}  // namespace weaktime::twolevel
