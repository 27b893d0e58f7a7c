// weaktime: dwell and postselected conditional times from the command line.
//
//   weaktime dwell       --config scenario.json [--out file.csv]
//   weaktime conditional --config scenario.json --final <label> [--out file.csv]
//   weaktime check       --config scenario.json --final <label> [--chi k] [--t time]
//   weaktime oracle      --config scenario.json --gammas g1,g2,... [--final <label>] [--chi k] [--t time]
//   weaktime figures     --preset fig1|fig2 [--out file.csv]
//
// Exit status: 0 success or DEFINITE, 1 usage/IO/runtime error,
// 2 validation error, 3 INDEFINITE.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "weaktime/commands.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitValidation = 2;

unsigned thread_cap() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("WEAKTIME_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) {
    throw CLI::ValidationError("WEAKTIME_THREADS", "must be a positive integer");
  }
  return static_cast<unsigned>(n);
}

void emit(const weaktime::TimeSeries& series, const std::string& out_path) {
  if (out_path.empty()) {
    weaktime::write_csv(std::cout, series);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw weaktime::IOError("cannot open output file " + out_path);
  weaktime::write_csv(out, series);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak-measurement dwell and conditional times"};
  app.require_subcommand(1);

  std::string config, final_label, out_path, preset;
  std::size_t chi = 0;
  double t = 0;
  std::vector<CLI::Option*> t_options;
  std::vector<double> gammas;

  auto* dwell = app.add_subcommand("dwell", "dwell times and presence probabilities over the time grid");
  auto* conditional = app.add_subcommand("conditional", "postselected time components over the time grid");
  auto* check = app.add_subcommand("check", "definiteness of the conditional time at one instant");
  auto* oracle = app.add_subcommand("oracle", "pointer simulation convergence study");
  auto* figures = app.add_subcommand("figures", "two-level figure data");

  for (auto* sub : {dwell, conditional, check, oracle}) {
    sub->add_option("--config", config, "scenario JSON document")->required();
  }
  for (auto* sub : {dwell, conditional, oracle, figures}) {
    sub->add_option("--out", out_path, "CSV output path (stdout when omitted)");
  }
  conditional->add_option("--final", final_label, "final-state label")->required();
  check->add_option("--final", final_label, "final-state label")->required();
  oracle->add_option("--final", final_label, "final-state label (unconditional when omitted)");
  for (auto* sub : {check, oracle}) {
    sub->add_option("--chi", chi, "observable index")->default_val(0);
    t_options.push_back(sub->add_option("--t", t, "time (defaults to time.t_max)"));
  }
  oracle->add_option("--gammas", gammas, "descending couplings")->delimiter(',');
  figures->add_option("--preset", preset, "fig1 or fig2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    const unsigned threads = thread_cap();
    if (figures->parsed()) {
      emit(weaktime::cmd_figures(weaktime::parse_figure_preset(preset)), out_path);
      return 0;
    }

    const weaktime::Scenario scenario = weaktime::load_scenario(config);
    const bool t_given = std::any_of(t_options.begin(), t_options.end(), [](auto* o) { return o->count() > 0; });
    const double at = t_given ? t : scenario.time.t_max;
    if (dwell->parsed()) {
      emit(weaktime::cmd_dwell(scenario, threads), out_path);
    } else if (conditional->parsed()) {
      emit(weaktime::cmd_conditional(scenario, final_label, threads), out_path);
    } else if (check->parsed()) {
      const auto report = weaktime::cmd_check(scenario, chi, final_label, at);
      std::cout << report.line() << '\n';
      return report.exit_status();
    } else if (oracle->parsed()) {
      std::optional<std::string> f;
      if (!final_label.empty()) f = final_label;
      emit(weaktime::cmd_oracle(scenario, f, chi, at, gammas, threads), out_path);
    }
    return 0;
  } catch (const weaktime::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
