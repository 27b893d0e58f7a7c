#include "weaktime/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace weaktime {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ParseError(path + ": " + msg);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path + "." + key + ": missing");
  return *it;
}

double read_real(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double read_real_or(const json& obj, const std::string& key, double fallback, const std::string& path) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : read_real(*it, path + "." + key);
}

long read_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

Complex read_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(path, "expected a complex number [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Ket read_ket(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty list of complex numbers");
  Ket v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = read_complex(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

Operator read_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Operator m(rows, rows);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    const Ket row = read_ket(j[r], row_path);
    if (row.size() != rows) fail(row_path, "matrix must be square");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

std::vector<Operator> read_projectors(const json& obj, const std::string& path) {
  std::vector<Operator> out;
  if (const auto it = obj.find("projectors"); it != obj.end()) {
    if (!it->is_array()) fail(path + ".projectors", "expected a list of matrices");
    for (std::size_t i = 0; i < it->size(); ++i) {
      out.push_back(read_matrix((*it)[i], path + ".projectors[" + std::to_string(i) + "]"));
    }
    return out;
  }
  if (const auto it = obj.find("subspaces"); it != obj.end()) {
    if (!it->is_array()) fail(path + ".subspaces", "expected a list of vector lists");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string sub = path + ".subspaces[" + std::to_string(i) + "]";
      const json& vectors = (*it)[i];
      if (!vectors.is_array()) fail(sub, "expected a list of vectors");
      std::vector<Ket> kets;
      for (std::size_t k = 0; k < vectors.size(); ++k) {
        kets.push_back(read_ket(vectors[k], sub + "[" + std::to_string(k) + "]"));
      }
      out.push_back(projector_from_subspace(kets));
    }
    return out;
  }
  throw ValidationError(path + ": needs 'projectors' or 'subspaces'");
}

State read_initial(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object with 'ket' or 'density'");
  if (const auto it = j.find("ket"); it != j.end()) return State::pure(read_ket(*it, path + ".ket"));
  if (const auto it = j.find("density"); it != j.end()) {
    return State::density(read_matrix(*it, path + ".density"));
  }
  throw ValidationError(path + ": needs 'ket' or 'density'");
}

SystemModel read_explicit_system(const json& sys) {
  const std::string path = "system";
  Operator h = read_matrix(require(sys, "hamiltonian", path), path + ".hamiltonian");
  State initial = read_initial(require(sys, "initial", path), path + ".initial");

  const json& obs_json = require(sys, "observable", path);
  if (!obs_json.is_object()) fail(path + ".observable", "expected an object");
  ObservableSpec obs;
  const json& values = require(obs_json, "values", path + ".observable");
  if (!values.is_array()) fail(path + ".observable.values", "expected a list of numbers");
  for (std::size_t i = 0; i < values.size(); ++i) {
    obs.values.push_back(read_real(values[i], path + ".observable.values[" + std::to_string(i) + "]"));
  }
  obs.projectors = read_projectors(obs_json, path + ".observable");

  FinalFamily finals;
  if (const auto it = sys.find("finals"); it != sys.end()) {
    const std::string fpath = path + ".finals";
    if (!it->is_object()) fail(fpath, "expected an object");
    finals.projectors = read_projectors(*it, fpath);
    if (const auto labels = it->find("labels"); labels != it->end()) {
      if (!labels->is_array()) fail(fpath + ".labels", "expected a list of strings");
      for (std::size_t i = 0; i < labels->size(); ++i) {
        const json& l = (*labels)[i];
        if (!l.is_string()) fail(fpath + ".labels[" + std::to_string(i) + "]", "expected a string");
        finals.labels.push_back(l.get<std::string>());
      }
    } else {
      for (std::size_t i = 0; i < finals.projectors.size(); ++i) finals.labels.push_back(std::to_string(i));
    }
    if (const auto complete = it->find("complete"); complete != it->end()) {
      if (!complete->is_boolean()) fail(fpath + ".complete", "expected a boolean");
      finals.complete = complete->get<bool>();
    }
  }

  return validate_system(SystemDraft{std::move(h), std::move(initial), std::move(obs), std::move(finals)});
}

oracle::DetectorSpec read_detector(const json& j) {
  const std::string path = "detector";
  if (!j.is_object()) fail(path, "expected an object");
  oracle::DetectorSpec d;
  d.Q = read_real_or(j, "Q", d.Q, path);
  if (const auto it = j.find("N"); it != j.end()) d.N = read_integer(*it, path + ".N");
  d.sigma = read_real_or(j, "sigma", d.sigma, path);
  d.chirp = read_real_or(j, "chirp", d.chirp, path);
  d.q0 = read_real_or(j, "q0", d.q0, path);
  d.p0 = read_real_or(j, "p0", d.p0, path);
  d.gamma = read_real_or(j, "gamma", d.gamma, path);
  oracle::make_detector(d);  // surfaces grid problems at load time
  return d;
}

Tolerances read_tolerances(const json& j) {
  const std::string path = "tolerances";
  if (!j.is_object()) fail(path, "expected an object");
  Tolerances tol;
  tol.p_min = read_real_or(j, "p_min", tol.p_min, path);
  tol.definiteness_threshold = read_real_or(j, "definiteness_threshold", tol.definiteness_threshold, path);
  if (const auto it = j.find("quadrature_N"); it != j.end()) {
    tol.quadrature_N = read_integer(*it, path + ".quadrature_N");
    if (*tol.quadrature_N < 2) throw ValidationError("tolerances.quadrature_N: must be >= 2");
  }
  if (!(tol.p_min > 0)) throw ValidationError("tolerances.p_min: must be > 0");
  if (!(tol.definiteness_threshold >= 0)) {
    throw ValidationError("tolerances.definiteness_threshold: must be >= 0");
  }
  return tol;
}

}  // namespace

std::vector<double> TimeGrid::points() const {
  std::vector<double> out(static_cast<std::size_t>(samples));
  for (long i = 0; i < samples; ++i) {
    out[static_cast<std::size_t>(i)] =
        i == samples - 1 ? t_max : t_max * static_cast<double>(i) / static_cast<double>(samples - 1);
  }
  return out;
}

Scenario parse_scenario(std::string_view document) {
  json root;
  try {
    root = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario document: ") + e.what());
  }
  if (!root.is_object()) fail("(root)", "expected an object");

  std::string name;
  if (const auto it = root.find("name"); it != root.end()) {
    if (!it->is_string()) fail("name", "expected a string");
    name = it->get<std::string>();
  }

  const json& sys = require(root, "system", "(root)");
  if (!sys.is_object()) fail("system", "expected an object");
  std::optional<twolevel::Params> preset;
  std::optional<SystemModel> model;
  if (const auto it = sys.find("preset"); it != sys.end()) {
    if (!it->is_string() || it->get<std::string>() != "two-level") {
      fail("system.preset", "only \"two-level\" is supported");
    }
    twolevel::Params p;
    p.omega = read_real(require(sys, "omega", "system"), "system.omega");
    p.v = read_complex(require(sys, "v", "system"), "system.v");
    preset = p;
    model.emplace(twolevel::build_two_level(p.omega, p.v));
  } else {
    model.emplace(read_explicit_system(sys));
  }

  const json& time = require(root, "time", "(root)");
  TimeGrid grid;
  grid.t_max = read_real(require(time, "t_max", "time"), "time.t_max");
  grid.samples = read_integer(require(time, "samples", "time"), "time.samples");
  if (!(grid.t_max > 0) || !std::isfinite(grid.t_max)) throw ValidationError("time.t_max: must be > 0");
  if (grid.samples < 2) throw ValidationError("time.samples: must be >= 2");

  std::optional<oracle::DetectorSpec> detector;
  if (const auto it = root.find("detector"); it != root.end()) detector = read_detector(*it);

  Tolerances tol;
  if (const auto it = root.find("tolerances"); it != root.end()) tol = read_tolerances(*it);

  return Scenario{std::move(name), std::move(*model), preset, detector, grid, tol};
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace weaktime
