#include "weaktime/commands.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace weaktime {

namespace {

constexpr double kFigureOmega = 2.0;
constexpr double kFigureTMax = 10.0;
constexpr long kFigureSamples = 1000;

std::vector<std::string> indexed_columns(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

void append(std::vector<std::string>& dst, const std::vector<std::string>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

double detector_coefficient(const Scenario& scenario) {
  if (!scenario.detector) return 0.0;
  return oracle::detector_moments(oracle::make_detector(*scenario.detector)).coeff_c;
}

}  // namespace

std::size_t TimeSeries::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw UnknownIndex("no column named '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

TimeSeries cmd_dwell(const Scenario& scenario, unsigned threads) {
  const auto& model = scenario.model;
  const std::size_t nchi = model.observable().size();
  TimeSeries ts;
  ts.header = {"t"};
  append(ts.header, indexed_columns("tau_", nchi));
  append(ts.header, indexed_columns("P_", nchi));

  const auto times = scenario.time.points();
  ts.rows.resize(times.size());
  detail::parallel_for(times.size(), threads, [&](std::size_t i) {
    const double t = times[i];
    std::vector<std::optional<double>> row{t};
    for (std::size_t k = 0; k < nchi; ++k) row.emplace_back(dwell_time(model, k, t));
    for (std::size_t k = 0; k < nchi; ++k) row.emplace_back(presence_probability(model, k, t));
    ts.rows[i] = std::move(row);
  });
  return ts;
}

TimeSeries cmd_conditional(const Scenario& scenario, std::string_view final_label, unsigned threads) {
  const auto& model = scenario.model;
  const std::size_t f = model.finals().index_of(final_label);
  const std::size_t nchi = model.observable().size();
  const double c = detector_coefficient(scenario);
  const auto& tol = scenario.tolerances;

  TimeSeries ts;
  ts.header = {"t", "prob_f"};
  append(ts.header, indexed_columns("tau1_", nchi));
  append(ts.header, indexed_columns("tau2_", nchi));
  append(ts.header, indexed_columns("tau_", nchi));
  append(ts.header, indexed_columns("norm_", nchi));

  const auto times = scenario.time.points();
  ts.rows.resize(times.size());
  detail::parallel_for(times.size(), threads, [&](std::size_t i) {
    const double t = times[i];
    const double prob = postselection_probability(model, f, t);
    std::vector<std::optional<double>> tau1(nchi), tau2(nchi), full(nchi), norm(nchi);
    for (std::size_t k = 0; k < nchi; ++k) {
      norm[k] = definiteness_check(model, k, f, t, tol.definiteness_threshold).norm;
      if (prob < tol.p_min) continue;
      const auto r = conditional_components(model, k, f, t, tol);
      tau1[k] = r.tau1;
      tau2[k] = r.tau2;
      full[k] = r.tau1 + c * r.tau2;
    }
    std::vector<std::optional<double>> row{t, prob};
    for (const auto* part : {&tau1, &tau2, &full, &norm}) row.insert(row.end(), part->begin(), part->end());
    ts.rows[i] = std::move(row);
  });
  return ts;
}

std::string CheckReport::line() const {
  return "chi=" + std::to_string(chi) + " final=" + final_label + " t=" + format_real(t) +
         " norm=" + format_real(norm) + " threshold=" + format_real(threshold) + " " +
         (definite ? "DEFINITE" : "INDEFINITE");
}

CheckReport cmd_check(const Scenario& scenario, std::size_t chi, std::string_view final_label, double t) {
  const std::size_t f = scenario.model.finals().index_of(final_label);
  const double threshold = scenario.tolerances.definiteness_threshold;
  const auto r = definiteness_check(scenario.model, chi, f, t, threshold);
  return {chi, std::string(final_label), t, r.norm, threshold, r.definite};
}

TimeSeries cmd_oracle(const Scenario& scenario, std::optional<std::string> final_label, std::size_t chi,
                      double t, const std::vector<double>& gammas, unsigned threads) {
  if (!scenario.detector) throw ValidationError("detector: the oracle needs a detector block");
  if (gammas.empty()) throw ValidationError("gammas: at least one coupling is required");
  std::optional<std::size_t> f;
  if (final_label) f = scenario.model.finals().index_of(*final_label);

  const auto table = oracle::convergence_study(scenario.model, chi, f, t, gammas, *scenario.detector,
                                               scenario.tolerances, threads);
  TimeSeries ts;
  ts.header = {"gamma", "tau_oracle", "tau_formula", "abs_error"};
  for (const auto& row : table.rows) {
    ts.rows.push_back({row.gamma, row.tau_oracle, row.tau_formula, row.abs_error});
  }
  return ts;
}

FigurePreset parse_figure_preset(std::string_view name) {
  if (name == "fig1") return FigurePreset::Fig1;
  if (name == "fig2") return FigurePreset::Fig2;
  throw ValidationError("preset: expected fig1 or fig2, got '" + std::string(name) + "'");
}

TimeSeries cmd_figures(FigurePreset preset) {
  // omega = 2, Omega = 4  =>  |v| = sqrt(3)
  const twolevel::Params params{kFigureOmega, {std::sqrt(3.0), 0.0}};
  const TimeGrid grid{kFigureTMax, kFigureSamples};

  TimeSeries ts;
  if (preset == FigurePreset::Fig1) {
    ts.header = {"t", "tau0", "tau1", "tau1_1_of_0", "tau0_1_of_0", "tau0_1_of_1"};
  } else {
    ts.header = {"t", "tau0_2_of_0", "tau0_2_of_0_uncorrected"};
  }
  for (double t : grid.points()) {
    std::vector<std::optional<double>> row{t};
    const auto on_zero = twolevel::conditional_closed(params, t, 0);
    if (preset == FigurePreset::Fig2) {
      row.emplace_back(on_zero.tau2_of_0);
      row.emplace_back(on_zero.tau2_of_0_uncorrected);
      ts.rows.push_back(std::move(row));
      continue;
    }
    const auto dwell = twolevel::dwell_closed(params, t);
    row.emplace_back(dwell.tau0);
    row.emplace_back(dwell.tau1);
    try {
      row.emplace_back(twolevel::conditional_closed(params, t, 1).tau1_of_0);
    } catch (const SingularPostselection&) {
      row.emplace_back(std::nullopt);
    }
    row.emplace_back(on_zero.tau1_of_0);
    row.emplace_back(on_zero.tau1_of_1);
    ts.rows.push_back(std::move(row));
  }
  return ts;
}

}  // namespace weaktime
