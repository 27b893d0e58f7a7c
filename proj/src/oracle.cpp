#include "weaktime/oracle.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>

#include "parallel.hpp"

namespace weaktime::oracle {

namespace {

constexpr double kBoundaryDecay = 1e-12;
// Errors below this are roundoff, not truncation; they carry no rate information.
constexpr double kErrorFloor = 1e-11;

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

// sum_k k |psi~_k|^2 and sum_k |psi~_k|^2 over every column.
std::pair<double, double> momentum_moments(const Eigen::MatrixXcd& columns, double dq) {
  const RealVector k = momentum_grid(columns.rows(), dq);
  Eigen::FFT<double> fft;
  double weighted = 0, total = 0;
  Ket spectrum;
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    const Ket column = columns.col(c);
    fft.fwd(spectrum, column);
    const RealVector power = spectrum.cwiseAbs2();
    weighted += k.dot(power);
    total += power.sum();
  }
  return {weighted, total};
}

}  // namespace

DetectorState make_detector(const DetectorSpec& spec) {
  if (!is_power_of_two(spec.N) || spec.N < 4) {
    throw ValidationError("detector.N must be a power of two >= 4, got " + std::to_string(spec.N));
  }
  if (!(spec.sigma > 0)) throw ValidationError("detector.sigma must be > 0");
  if (!(spec.gamma > 0)) throw ZeroCoupling("detector.gamma must be > 0");
  if (!(spec.Q >= 8 * spec.sigma)) {
    throw GridTooSmall("detector.Q = " + std::to_string(spec.Q) + " is below 8 sigma");
  }

  DetectorState det;
  det.spec = spec;
  det.dq = 2 * spec.Q / static_cast<double>(spec.N);
  det.grid = RealVector::LinSpaced(spec.N, -spec.Q, spec.Q - det.dq);

  const Complex width(1, spec.chirp);
  auto profile = [&](double q) {
    const double x = q - spec.q0;
    return std::exp(-width * x * x / (4 * spec.sigma * spec.sigma) + Complex(0, spec.p0 * q));
  };
  const Ket raw = det.grid.unaryExpr([&](double q) { return profile(q); });
  const double scale = 1 / std::sqrt(raw.squaredNorm() * det.dq);
  det.amplitudes = raw * scale;

  const double peak = det.amplitudes.cwiseAbs2().maxCoeff();
  const double edge = std::max({std::norm(det.amplitudes(0)), std::norm(det.amplitudes(spec.N - 1)),
                                std::norm(profile(spec.Q)) * scale * scale});
  if (edge > kBoundaryDecay * peak) {
    throw GridTooSmall("detector wavefunction does not decay at the grid edge (|Phi|^2 ratio " +
                       std::to_string(edge / peak) + ")");
  }
  return det;
}

RealVector momentum_grid(long n, double dq) {
  RealVector k(n);
  const double unit = 2 * std::numbers::pi / (static_cast<double>(n) * dq);
  for (long j = 0; j < n; ++j) k(j) = unit * static_cast<double>(j < n / 2 ? j : j - n);
  return k;
}

Ket apply_momentum(const Ket& amplitudes, double dq) {
  Eigen::FFT<double> fft;
  Ket spectrum;
  fft.fwd(spectrum, amplitudes);
  spectrum = spectrum.cwiseProduct(momentum_grid(amplitudes.size(), dq).cast<Complex>());
  Ket out;
  fft.inv(out, spectrum);
  return out;
}

DetectorMoments detector_moments(const DetectorState& det) {
  const RealVector density = det.amplitudes.cwiseAbs2();
  DetectorMoments m;
  m.mean_q = det.grid.dot(density) * det.dq;
  const auto [weighted, total] = momentum_moments(det.amplitudes, det.dq);
  m.mean_p = weighted / total;
  const Ket p_phi = apply_momentum(det.amplitudes, det.dq);
  // Re<q p> equals <(qp + pq)/2> since q and p are Hermitian.
  m.re_qp = det.amplitudes.dot(det.grid.cast<Complex>().cwiseProduct(p_phi)).real() * det.dq;
  m.coeff_c = 2 * (m.mean_q * m.mean_p - m.re_qp);
  return m;
}

CompositeState evolve_coupled(const Operator& h, const Operator& coupling, const DetectorState& det,
                              const Ket& psi0, double t, unsigned threads) {
  if (!std::isfinite(t) || t < 0) throw NegativeTime("evolve_composite: time must be >= 0");
  require_hermitian(h, "evolve_composite: hamiltonian");
  require_hermitian(coupling, "evolve_composite: coupling");
  require_same_dim(h, coupling, "evolve_composite");
  if (psi0.size() != h.rows()) throw DimMismatch("evolve_composite: initial vector has the wrong dimension");

  CompositeState c;
  c.grid = det.grid;
  c.dq = det.dq;
  c.spinors.resize(det.grid.size(), h.rows());
  const double gamma = det.spec.gamma;
  detail::parallel_for(static_cast<std::size_t>(det.grid.size()), threads, [&](std::size_t idx) {
    const auto j = static_cast<Eigen::Index>(idx);
    const Operator generator = h + (gamma * det.grid(j)) * coupling;
    const Ket psi = evolve_unitary(hermitian_eig(generator), t) * psi0;
    c.spinors.row(j) = (det.amplitudes(j) * psi).transpose();
  });
  return c;
}

CompositeState evolve_composite(const SystemModel& model, const DetectorState& det,
                                std::size_t chi_index, double t, unsigned threads) {
  if (!model.initial().is_pure()) {
    throw MixedStateUnsupported("evolve_composite needs a pure initial state; use oracle_time for ensembles");
  }
  if (chi_index >= model.observable().size()) throw UnknownIndex("observable index out of range");
  return evolve_coupled(model.hamiltonian(), model.observable().projectors[chi_index], det,
                        model.initial().ket(), t, threads);
}

double mean_momentum(const CompositeState& c) {
  const auto [weighted, total] = momentum_moments(c.spinors, c.dq);
  if (!(total > 0)) throw NumericalFailure("mean_momentum: composite state has zero norm");
  return weighted / total;
}

Postselected postselect(const CompositeState& c, const SystemModel& model, std::size_t final_index,
                        double p_min) {
  if (final_index >= model.finals().size()) throw UnknownIndex("final index out of range");
  const Operator& projector = model.finals().projectors[final_index];
  if (projector.rows() != c.spinors.cols()) throw DimMismatch("postselect: projector dimension");

  CompositeState kept;
  kept.grid = c.grid;
  kept.dq = c.dq;
  kept.spinors = c.spinors * projector.transpose();
  Postselected out;
  out.prob_f = kept.norm();
  if (!(out.prob_f >= p_min)) {
    throw VanishingPostselection("postselection probability " + std::to_string(out.prob_f) +
                                 " is below p_min = " + std::to_string(p_min));
  }
  out.mean_p_conditional = mean_momentum(kept);
  return out;
}

double extract_time(double delta_p, double gamma) {
  if (!(gamma > 0)) throw ZeroCoupling("extract_time: gamma must be > 0");
  return -delta_p / gamma;
}

double oracle_time(const SystemModel& model, const DetectorState& det, std::size_t chi_index,
                   std::optional<std::size_t> final_index, double t, const Tolerances& tol,
                   unsigned threads) {
  if (chi_index >= model.observable().size()) throw UnknownIndex("observable index out of range");
  const Operator& coupling = model.observable().projectors[chi_index];
  const double baseline = detector_moments(det).mean_p;
  if (final_index && *final_index >= model.finals().size()) throw UnknownIndex("final index out of range");
  const Operator projector =
      final_index ? model.finals().projectors[*final_index] : Operator::Identity(model.dim(), model.dim());

  double weight_total = 0;
  double momentum_total = 0;
  for (const auto& [weight, psi0] : model.initial().ensemble()) {
    const CompositeState c = evolve_coupled(model.hamiltonian(), coupling, det, psi0, t, threads);
    if (!final_index) {
      weight_total += weight;
      momentum_total += weight * mean_momentum(c);
      continue;
    }
    CompositeState kept{c.grid, c.dq, c.spinors * projector.transpose()};
    const double prob = weight * kept.norm();
    // Members that never reach the final subspace contribute nothing.
    if (prob > 0) momentum_total += prob * mean_momentum(kept);
    weight_total += prob;
  }
  if (final_index && !(weight_total >= tol.p_min)) {
    throw VanishingPostselection("postselection probability " + std::to_string(weight_total) +
                                 " is below p_min = " + std::to_string(tol.p_min));
  }
  return extract_time(momentum_total / weight_total - baseline, det.spec.gamma);
}

std::vector<RateCheck> ConvergenceTable::rates() const {
  std::vector<RateCheck> out;
  auto in_window = [](const ConvergenceRow& r) {
    return r.abs_error < 0.1 * std::abs(r.tau_formula) + 1e-6 && r.abs_error > kErrorFloor;
  };
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const auto& a = rows[i];
    const auto& b = rows[i + 1];
    if (!in_window(a) || !in_window(b)) continue;
    const double order = std::log(a.abs_error / b.abs_error) / std::log(a.gamma / b.gamma);
    out.push_back({a.gamma, b.gamma, std::pow(0.5, order)});
  }
  return out;
}

bool ConvergenceTable::first_order(double lo, double hi) const {
  const auto checks = rates();
  if (checks.empty()) return false;
  for (const auto& c : checks) {
    if (c.per_halving < lo || c.per_halving > hi) return false;
  }
  return true;
}

ConvergenceTable convergence_study(const SystemModel& model, std::size_t chi_index,
                                   std::optional<std::size_t> final_index, double t,
                                   const std::vector<double>& gammas, const DetectorSpec& detector,
                                   const Tolerances& tol, unsigned threads) {
  if (gammas.empty()) throw ValidationError("convergence_study: no gammas given");
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] > 0)) throw ZeroCoupling("convergence_study: gammas must be > 0");
    if (i > 0 && !(gammas[i] < gammas[i - 1])) {
      throw ValidationError("convergence_study: gammas must be strictly descending");
    }
  }

  ConvergenceTable table;
  DetectorSpec spec = detector;
  table.detector_coeff = detector_moments(make_detector(spec)).coeff_c;
  const double formula = final_index
                             ? conditional_time(model, chi_index, *final_index, t, table.detector_coeff, tol)
                             : dwell_time(model, chi_index, t);
  for (double gamma : gammas) {
    spec.gamma = gamma;
    const DetectorState det = make_detector(spec);
    ConvergenceRow row;
    row.gamma = gamma;
    row.tau_oracle = oracle_time(model, det, chi_index, final_index, t, tol, threads);
    row.tau_formula = formula;
    row.abs_error = std::abs(row.tau_oracle - formula);
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace weaktime::oracle
