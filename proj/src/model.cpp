#include "weaktime/model.hpp"

#include <algorithm>
#include <set>

namespace weaktime {

namespace {

constexpr double kProjectorTol = 1e-9;

std::string indexed(const std::string& name, std::size_t i) {
  return name + "[" + std::to_string(i) + "]";
}

void check_projector_list(const std::vector<Operator>& projectors, Eigen::Index dim,
                          const std::string& name) {
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    const Operator& p = projectors[i];
    if (p.rows() != dim || p.cols() != dim) {
      throw DimMismatch(indexed(name, i) + ": expected " + std::to_string(dim) + "x" +
                        std::to_string(dim) + ", got " + std::to_string(p.rows()) + "x" +
                        std::to_string(p.cols()));
    }
    if (!p.allFinite()) throw InvalidProjector(indexed(name, i) + ": non-finite entries");
    if (!is_projector(p, kProjectorTol)) {
      throw InvalidProjector(indexed(name, i) + ": not a Hermitian idempotent");
    }
  }
}

}  // namespace

Operator ObservableSpec::reconstruct() const {
  if (projectors.empty()) return {};
  Operator sum = Operator::Zero(projectors.front().rows(), projectors.front().cols());
  for (std::size_t k = 0; k < projectors.size(); ++k) sum += values[k] * projectors[k];
  return sum;
}

std::size_t FinalFamily::index_of(std::string_view label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw UnknownIndex("unknown final label '" + std::string(label) + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

bool is_projector(const Operator& p, double tol) {
  if (p.rows() != p.cols()) return false;
  if ((p - p.adjoint()).norm() > tol) return false;
  return (p * p - p).norm() <= tol;
}

SystemModel validate_system(SystemDraft draft) {
  require_hermitian(draft.hamiltonian, "hamiltonian");
  const Eigen::Index dim = draft.hamiltonian.rows();

  if (draft.initial.dim() != dim) {
    throw DimMismatch("initial: state has dim " + std::to_string(draft.initial.dim()) +
                      ", hamiltonian has dim " + std::to_string(dim));
  }

  auto& obs = draft.observable;
  if (obs.projectors.empty()) throw IncompleteObservable("observable: no projectors");
  if (obs.values.size() != obs.projectors.size()) {
    throw ValidationError("observable: " + std::to_string(obs.values.size()) + " values but " +
                          std::to_string(obs.projectors.size()) + " projectors");
  }
  if (std::set<double>(obs.values.begin(), obs.values.end()).size() != obs.values.size()) {
    throw ValidationError("observable.values: eigenvalues must be distinct");
  }
  check_projector_list(obs.projectors, dim, "observable.projectors");
  Operator total = Operator::Zero(dim, dim);
  for (const auto& p : obs.projectors) total += p;
  if ((total - Operator::Identity(dim, dim)).norm() > kProjectorTol) {
    throw IncompleteObservable("observable.projectors: sum is not the identity");
  }

  for (std::size_t j = 0; j < obs.projectors.size(); ++j) {
    for (std::size_t k = j + 1; k < obs.projectors.size(); ++k) {
      if ((obs.projectors[j] * obs.projectors[k]).norm() > kProjectorTol) {
        throw InvalidProjector("observable.projectors[" + std::to_string(j) + "] and [" +
                               std::to_string(k) + "] are not orthogonal");
      }
    }
  }

  auto& finals = draft.finals;
  if (finals.labels.size() != finals.projectors.size()) {
    throw ValidationError("finals: " + std::to_string(finals.labels.size()) + " labels but " +
                          std::to_string(finals.projectors.size()) + " projectors");
  }
  if (std::set<std::string>(finals.labels.begin(), finals.labels.end()).size() !=
      finals.labels.size()) {
    throw ValidationError("finals.labels: labels must be unique");
  }
  check_projector_list(finals.projectors, dim, "finals.projectors");
  if (finals.complete) {
    Operator sum = Operator::Zero(dim, dim);
    for (const auto& p : finals.projectors) sum += p;
    if ((sum - Operator::Identity(dim, dim)).norm() > kProjectorTol) {
      throw IncompleteFinals("finals.projectors: declared complete but sum is not the identity");
    }
  }

  Spectrum spectrum = hermitian_eig(draft.hamiltonian);
  return SystemModel(std::move(draft), std::move(spectrum));
}

Operator projector_from_subspace(std::span<const Ket> vectors) {
  if (vectors.empty()) throw DegenerateInput("projector_from_subspace: no vectors");
  const Eigen::Index dim = vectors.front().size();
  const auto rank = static_cast<Eigen::Index>(vectors.size());
  if (dim < 1) throw DegenerateInput("projector_from_subspace: empty vector");
  if (rank > dim) throw DegenerateInput("projector_from_subspace: more vectors than dimensions");

  Operator stacked(dim, rank);
  for (Eigen::Index j = 0; j < rank; ++j) {
    if (vectors[static_cast<std::size_t>(j)].size() != dim) {
      throw DimMismatch("projector_from_subspace: vectors have different lengths");
    }
    stacked.col(j) = vectors[static_cast<std::size_t>(j)];
  }
  if (!stacked.allFinite()) throw DegenerateInput("projector_from_subspace: non-finite entries");

  Eigen::JacobiSVD<Operator> svd(stacked, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0 || sv(rank - 1) < 1e-10 * sv(0)) {
    throw DegenerateInput("projector_from_subspace: vectors are linearly dependent");
  }
  const Operator u = svd.matrixU().leftCols(rank);
  return u * u.adjoint();
}

}  // namespace weaktime
