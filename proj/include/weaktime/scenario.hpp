#pragma once

// Scenario documents are JSON objects:
//
//   {
//     "name": "rabi",
//     "system": { "preset": "two-level", "omega": 2, "v": [1.7320508075688772, 0] },
//     "detector": { "Q": 16, "N": 512, "sigma": 1, "chirp": 0, "q0": 0, "p0": 0, "gamma": 1e-3 },
//     "time": { "t_max": 10, "samples": 1000 },
//     "tolerances": { "p_min": 1e-10, "definiteness_threshold": 1e-9, "quadrature_N": 2000 }
//   }
//
// An explicit system replaces the preset with
//
//   "hamiltonian": M,
//   "initial": { "ket": V } | { "density": M },
//   "observable": { "values": [..], "projectors": [M, ..] | "subspaces": [[V, ..], ..] },
//   "finals": { "labels": [..], "projectors": [..] | "subspaces": [..], "complete": true }
//
// Complex entries are [re, im] (a bare number is read as real); matrices are
// row-major nested lists. "detector", "tolerances" and "finals" are optional.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weaktime/oracle.hpp"
#include "weaktime/twolevel.hpp"

namespace weaktime {

struct TimeGrid {
  double t_max = 0;
  long samples = 0;

  /// samples evenly spaced points from 0 to t_max inclusive.
  std::vector<double> points() const;
};

struct Scenario {
  std::string name;
  SystemModel model;
  std::optional<twolevel::Params> preset;
  std::optional<oracle::DetectorSpec> detector;
  TimeGrid time;
  Tolerances tolerances;
};

/// ParseError for malformed JSON or wrongly typed fields (message carries the
/// field path); model validation errors propagate unchanged.
Scenario parse_scenario(std::string_view document);

Scenario load_scenario(const std::filesystem::path& path);

}  // namespace weaktime
