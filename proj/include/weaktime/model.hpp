#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weaktime/qcore.hpp"

namespace weaktime {

/// Observable chi: distinct eigenvalues with their eigenprojectors. A
/// projector may have rank > 1 for degenerate values.
struct ObservableSpec {
  std::vector<double> values;
  std::vector<Operator> projectors;

  std::size_t size() const { return values.size(); }
  /// sum_k chi_k Pi_k
  Operator reconstruct() const;
};

/// Postselection subspaces. `complete` declares that the projectors sum to
/// the identity, which the averaging sum rules rely on.
struct FinalFamily {
  std::vector<std::string> labels;
  std::vector<Operator> projectors;
  bool complete = false;

  std::size_t size() const { return labels.size(); }
  std::size_t index_of(std::string_view label) const;
};

/// Unvalidated scenario data as read from a document or built in code.
struct SystemDraft {
  Operator hamiltonian;
  State initial;
  ObservableSpec observable;
  FinalFamily finals;
};

class SystemModel {
 public:
  const Operator& hamiltonian() const { return draft_.hamiltonian; }
  const State& initial() const { return draft_.initial; }
  const ObservableSpec& observable() const { return draft_.observable; }
  const FinalFamily& finals() const { return draft_.finals; }
  const Spectrum& spectrum() const { return spectrum_; }
  Eigen::Index dim() const { return draft_.hamiltonian.rows(); }

  const SystemDraft& draft() const { return draft_; }

 private:
  friend SystemModel validate_system(SystemDraft draft);
  SystemModel(SystemDraft draft, Spectrum spectrum)
      : draft_(std::move(draft)), spectrum_(std::move(spectrum)) {}

  SystemDraft draft_;
  Spectrum spectrum_;
};

/// Checks every invariant of the scenario and caches the spectrum of H_S.
/// Errors name the offending object ("observable.projectors[1]" etc.).
SystemModel validate_system(SystemDraft draft);

/// Orthogonal projector onto span(vectors).
Operator projector_from_subspace(std::span<const Ket> vectors);

/// Hermitian and idempotent within `tol` (Frobenius).
bool is_projector(const Operator& p, double tol = 1e-9);

}  // namespace weaktime
