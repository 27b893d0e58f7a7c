#pragma once

// Brute-force reference: the system coupled to a pointer through
// H = H_S + gamma q Pi_k, simulated exactly on a uniform q grid. Since the
// generator is diagonal in q, every grid point carries an independent system
// vector psi_j(t) = exp(-i(H_S + gamma q_j Pi_k) t) psi_0 Phi(q_j).
// Times are read from the pointer momentum shift, tau = -(<p(t)> - <p>)/gamma.

#include <cstddef>
#include <optional>
#include <vector>

#include "weaktime/timefunc.hpp"

namespace weaktime::oracle {

struct DetectorSpec {
  double Q = 16;       // grid half-width
  long N = 512;        // grid points, power of two
  double sigma = 1;    // position width
  double chirp = 0;    // quadratic phase coefficient
  double q0 = 0;
  double p0 = 0;
  double gamma = 1e-3;
};

/// Pointer wavefunction exp(-(1 + i chirp)(q - q0)^2 / (4 sigma^2) + i p0 q),
/// normalized on the periodic grid q_j = -Q + j dq, dq = 2Q/N.
struct DetectorState {
  DetectorSpec spec;
  RealVector grid;
  double dq = 0;
  Ket amplitudes;
};

struct DetectorMoments {
  double mean_q = 0;
  double mean_p = 0;
  double re_qp = 0;    // <(qp + pq)/2>
  double coeff_c = 0;  // 2(<q><p> - Re<qp>)
};

struct CompositeState {
  RealVector grid;
  double dq = 0;
  Eigen::MatrixXcd spinors;  // row j holds psi_j (amplitude at q_j)

  double norm() const { return spinors.squaredNorm() * dq; }
};

struct Postselected {
  double prob_f = 0;
  double mean_p_conditional = 0;
};

DetectorState make_detector(const DetectorSpec& spec);

/// Angular wavenumbers of the discrete Fourier modes, in FFT order.
RealVector momentum_grid(long n, double dq);

/// -i d/dq applied spectrally.
Ket apply_momentum(const Ket& amplitudes, double dq);

DetectorMoments detector_moments(const DetectorState& det);

/// Exact evolution of psi0 (x) Phi under h + gamma q coupling.
CompositeState evolve_coupled(const Operator& h, const Operator& coupling, const DetectorState& det,
                              const Ket& psi0, double t, unsigned threads = 1);

/// Pure initial states only; mixed states go through `oracle_time`.
CompositeState evolve_composite(const SystemModel& model, const DetectorState& det,
                                std::size_t chi_index, double t, unsigned threads = 1);

double mean_momentum(const CompositeState& c);

Postselected postselect(const CompositeState& c, const SystemModel& model, std::size_t final_index,
                        double p_min = Tolerances{}.p_min);

double extract_time(double delta_p, double gamma);

/// Time read off the pointer, unconditional or postselected on `final_index`.
/// Mixed initial states are handled as an eigen-ensemble of pure runs.
double oracle_time(const SystemModel& model, const DetectorState& det, std::size_t chi_index,
                   std::optional<std::size_t> final_index, double t, const Tolerances& tol = {},
                   unsigned threads = 1);

struct ConvergenceRow {
  double gamma = 0;
  double tau_oracle = 0;
  double tau_formula = 0;
  double abs_error = 0;
};

struct RateCheck {
  double gamma_from = 0;
  double gamma_to = 0;
  double per_halving = 0;  // error ratio rescaled to a factor-2 step in gamma
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double detector_coeff = 0;

  /// Consecutive rows both inside the asymptotic window
  /// (error < 0.1 |tau_formula| + 1e-6) with non-negligible error.
  std::vector<RateCheck> rates() const;
  /// At least one in-window step, and every such step has per_halving in [lo, hi].
  bool first_order(double lo = 0.3, double hi = 0.7) const;
};

ConvergenceTable convergence_study(const SystemModel& model, std::size_t chi_index,
                                   std::optional<std::size_t> final_index, double t,
                                   const std::vector<double>& gammas, const DetectorSpec& detector,
                                   const Tolerances& tol = {}, unsigned threads = 1);

}  // namespace weaktime::oracle
