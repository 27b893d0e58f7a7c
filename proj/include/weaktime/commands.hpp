#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weaktime/scenario.hpp"

namespace weaktime {

/// Rows of sampled values; an empty optional is written as an empty CSV field.
struct TimeSeries {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;

  /// Column index by name; throws UnknownIndex.
  std::size_t column(std::string_view name) const;
};

/// Shortest-unambiguous 17 significant digit rendering, locale independent.
std::string format_real(double value);

void write_csv(std::ostream& out, const TimeSeries& series);

/// t, tau_<k>..., P_<k>...
TimeSeries cmd_dwell(const Scenario& scenario, unsigned threads = 1);

/// t, prob_f, tau1_<k>..., tau2_<k>..., tau_<k>..., norm_<k>...
/// Rows with prob_f < p_min leave the tau columns empty.
TimeSeries cmd_conditional(const Scenario& scenario, std::string_view final_label,
                           unsigned threads = 1);

struct CheckReport {
  std::size_t chi = 0;
  std::string final_label;
  double t = 0;
  double norm = 0;
  double threshold = 0;
  bool definite = false;

  std::string line() const;
  int exit_status() const { return definite ? 0 : 3; }
};

CheckReport cmd_check(const Scenario& scenario, std::size_t chi, std::string_view final_label, double t);

/// gamma, tau_oracle, tau_formula, abs_error
TimeSeries cmd_oracle(const Scenario& scenario, std::optional<std::string> final_label, std::size_t chi,
                      double t, const std::vector<double>& gammas, unsigned threads = 1);

enum class FigurePreset { Fig1, Fig2 };

FigurePreset parse_figure_preset(std::string_view name);

/// Closed-form two-level curves for omega = 2, Omega = 4 on t in [0, 10], 1000 samples.
///   Fig1: t, tau0, tau1, tau1_1_of_0, tau0_1_of_0, tau0_1_of_1
///   Fig2: t, tau0_2_of_0, tau0_2_of_0_uncorrected
TimeSeries cmd_figures(FigurePreset preset);

}  // namespace weaktime
