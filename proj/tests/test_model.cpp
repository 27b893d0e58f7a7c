#include "doctest.h"

#include <algorithm>

#include "support.hpp"
#include "weaktime/model.hpp"

using namespace weaktime;
using namespace weaktime::testing;

namespace {

Operator basis_projector(Eigen::Index dim, Eigen::Index i) {
  Operator p = Operator::Zero(dim, dim);
  p(i, i) = 1;
  return p;
}

SystemDraft two_level_draft() {
  Operator h(2, 2);
  h << -1.0, std::sqrt(3.0), std::sqrt(3.0), 1.0;
  Ket ground = Ket::Zero(2);
  ground(0) = 1;
  const Operator p0 = basis_projector(2, 0), p1 = basis_projector(2, 1);
  return SystemDraft{h, State::pure(ground), {{0.0, 1.0}, {p0, p1}}, {{"0", "1"}, {p0, p1}, true}};
}

}  // namespace

TEST_CASE("validate_system accepts the driven two-level scenario") {
  const SystemModel m = validate_system(two_level_draft());
  CHECK(m.dim() == 2);
  CHECK(std::abs(m.spectrum().eigenvalues(0) + 2.0) < 1e-12);
  CHECK(m.finals().index_of("1") == 1);
  CHECK_THROWS_AS(m.finals().index_of("2"), UnknownIndex);
}

TEST_CASE("validate_system rejects broken scenarios") {
  SUBCASE("duplicated projector leaves the observable incomplete") {
    auto d = two_level_draft();
    d.observable.projectors[1] = basis_projector(2, 0);
    CHECK_THROWS_AS(validate_system(d), IncompleteObservable);
  }
  SUBCASE("non-idempotent projector") {
    auto d = two_level_draft();
    d.observable.projectors[0] *= 2.0;
    CHECK_THROWS_WITH_AS(validate_system(d), doctest::Contains("observable.projectors[0]"), InvalidProjector);
  }
  SUBCASE("projector of the wrong size") {
    auto d = two_level_draft();
    d.finals.projectors[1] = basis_projector(3, 1);
    CHECK_THROWS_WITH_AS(validate_system(d), doctest::Contains("finals.projectors[1]"), DimMismatch);
  }
  SUBCASE("state of the wrong size") {
    auto d = two_level_draft();
    Ket v = Ket::Zero(3);
    v(0) = 1;
    d.initial = State::pure(v);
    CHECK_THROWS_AS(validate_system(d), DimMismatch);
  }
  SUBCASE("finals declared complete but not") {
    auto d = two_level_draft();
    d.finals.projectors.pop_back();
    d.finals.labels.pop_back();
    CHECK_THROWS_AS(validate_system(d), IncompleteFinals);
    d.finals.complete = false;
    CHECK_NOTHROW(validate_system(d));
  }
  SUBCASE("non-Hermitian Hamiltonian") {
    auto d = two_level_draft();
    d.hamiltonian(0, 1) = 5.0;
    CHECK_THROWS_AS(validate_system(d), NotHermitian);
  }
  SUBCASE("repeated eigenvalue") {
    auto d = two_level_draft();
    d.observable.values = {1.0, 1.0};
    CHECK_THROWS_AS(validate_system(d), ValidationError);
  }
}

TEST_CASE("density matrix with trace 2 is an invalid state") {
  Operator rho = Operator::Zero(2, 2);
  rho(0, 0) = 1;
  rho(1, 1) = 1;
  CHECK_THROWS_AS(State::density(rho), InvalidState);
}

TEST_CASE("validate_system is idempotent") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const SystemModel m = random_model(rng, {.mixed = trial % 2 == 1});
    const SystemModel again = validate_system(m.draft());
    CHECK(again.hamiltonian() == m.hamiltonian());
    CHECK(again.spectrum().eigenvalues == m.spectrum().eigenvalues);
    CHECK(again.spectrum().basis == m.spectrum().basis);
    CHECK(again.observable().values == m.observable().values);
    CHECK(again.finals().labels == m.finals().labels);
  }
}

TEST_CASE("observable reconstruction has the declared spectrum with multiplicities") {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const SystemModel m = random_model(rng, {.min_dim = 3, .max_dim = 7});
    const auto& obs = m.observable();
    std::vector<double> expected;
    for (std::size_t k = 0; k < obs.size(); ++k) {
      const auto rank = static_cast<long>(std::lround(obs.projectors[k].trace().real()));
      expected.insert(expected.end(), static_cast<std::size_t>(rank), obs.values[k]);
    }
    std::sort(expected.begin(), expected.end());
    const auto spec = hermitian_eig(obs.reconstruct());
    REQUIRE(static_cast<std::size_t>(spec.eigenvalues.size()) == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(std::abs(spec.eigenvalues(static_cast<Eigen::Index>(i)) - expected[i]) < 1e-9);
    }
  }
}

TEST_CASE("projector_from_subspace") {
  SUBCASE("single basis vector") {
    const std::vector<Ket> v{Ket::Unit(2, 0)};
    CHECK((projector_from_subspace(v) - basis_projector(2, 0)).norm() < 1e-14);
  }
  SUBCASE("full basis gives the identity") {
    const std::vector<Ket> v{Ket::Unit(2, 0), Ket::Unit(2, 1)};
    CHECK((projector_from_subspace(v) - Operator::Identity(2, 2)).norm() < 1e-14);
  }
  SUBCASE("diagonal vector") {
    Ket d(2);
    d << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    Operator expected(2, 2);
    expected << 0.5, 0.5, 0.5, 0.5;
    CHECK((projector_from_subspace(std::vector<Ket>{d}) - expected).norm() < 1e-14);
  }
  SUBCASE("non-orthogonal spanning vectors") {
    Rng rng(29);
    const std::vector<Ket> v{random_ket(rng, 5), random_ket(rng, 5), random_ket(rng, 5)};
    const Operator p = projector_from_subspace(v);
    CHECK(is_projector(p, 1e-10));
    CHECK(std::abs(p.trace().real() - 3.0) < 1e-10);
    for (const auto& x : v) CHECK((p * x - x).norm() < 1e-10);
  }
  SUBCASE("linearly dependent input") {
    Ket a = Ket::Unit(3, 0), b = Ket::Unit(3, 1);
    const std::vector<Ket> v{a, b, 2.0 * a - 3.0 * b};
    CHECK_THROWS_AS(projector_from_subspace(v), DegenerateInput);
    CHECK_THROWS_AS(projector_from_subspace(std::vector<Ket>{}), DegenerateInput);
    CHECK_THROWS_AS(projector_from_subspace(std::vector<Ket>{Ket::Zero(2)}), DegenerateInput);
  }
}
