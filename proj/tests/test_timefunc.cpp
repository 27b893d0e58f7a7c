#include "doctest.h"

#include <numbers>

#include "support.hpp"
#include "weaktime/timefunc.hpp"
#include "weaktime/twolevel.hpp"

using namespace weaktime;
using namespace weaktime::testing;

namespace {

const SystemModel& rabi() {
  static const SystemModel m = twolevel::build_two_level(2.0, {std::sqrt(3.0), 0.0});
  return m;
}

SystemModel with_identity_final(const SystemModel& m) {
  SystemDraft d = m.draft();
  d.finals = FinalFamily{{"all"}, {Operator::Identity(m.dim(), m.dim())}, true};
  return validate_system(std::move(d));
}

}  // namespace

TEST_CASE("phase_integral") {
  CHECK(phase_integral(0.0, 2.5) == Complex(2.5, 0));
  const Complex z = phase_integral(2.0, 1.0);
  const Complex expected = (std::exp(Complex(0, 2.0)) - 1.0) / Complex(0, 2.0);
  CHECK(std::abs(z - expected) < 1e-15);
  // accurate on both sides of the Taylor guard, where the direct quotient cancels
  const double t = 3.0;
  for (double x : {0.99e-8, 1.01e-8, 2e-8, 1e-6}) {
    const Complex series = t * Complex(1 - x * x / 6, x / 2 - x * x * x / 24);
    CHECK(std::abs(phase_integral(x / t, t) - series) < 1e-15 * t);
  }
}

TEST_CASE("interaction_picture") {
  SUBCASE("commuting operators are unchanged") {
    const auto m = twolevel::build_two_level(2.0, 0.0);
    const Operator p = m.observable().projectors[0];
    CHECK((interaction_picture(m, p, 1.7) - p).norm() < 1e-14);
  }
  SUBCASE("t = 0 is the identity map") {
    const Operator a = pauli::sigma1();
    CHECK((interaction_picture(rabi(), a, 0.0) - a).norm() < 1e-14);
  }
  SUBCASE("agrees with a direct matrix exponential") {
    Rng rng(31);
    const auto m = random_model(rng);
    const Operator a = random_hermitian(rng, m.dim());
    const double t = 0.83;
    const Operator u = (Complex(0, -t) * m.hamiltonian()).exp();
    CHECK((interaction_picture(m, a, t) - u.adjoint() * a * u).norm() < 1e-11);
  }
}

TEST_CASE("accumulated operator on closed cases") {
  SUBCASE("t = 0 gives zero") {
    const auto f = accumulate_F(rabi(), 0, 0.0);
    CHECK(f.matrix.norm() == 0.0);
  }
  SUBCASE("no coupling gives t times the projector") {
    const auto m = twolevel::build_two_level(2.0, 0.0);
    for (std::size_t k = 0; k < 2; ++k) {
      const auto f = accumulate_F(m, k, 3.0);
      CHECK((f.matrix - 3.0 * m.observable().projectors[k]).norm() < 1e-14);
    }
  }
  SUBCASE("chi index out of range") {
    CHECK_THROWS_AS(accumulate_F(rabi(), 2, 1.0), UnknownIndex);
  }
  SUBCASE("negative time") {
    CHECK_THROWS_AS(accumulate_F(rabi(), 0, -1.0), NegativeTime);
  }
}

TEST_CASE("accumulated operator matches an independent block exponential") {
  Rng rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = random_model(rng, {.min_dim = 2, .max_dim = 6});
    const double t = std::uniform_real_distribution<double>(0.05, 4.0)(rng);
    for (std::size_t k = 0; k < m.observable().size(); ++k) {
      const Operator expected = block_exponential_F(m.hamiltonian(), m.observable().projectors[k], t);
      CHECK((accumulate_F(m, k, t).matrix - expected).norm() <= 1e-10 * t);
    }
  }
}

TEST_CASE("accumulated operator invariants") {
  Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const auto m = random_model(rng);
    const double t = std::uniform_real_distribution<double>(0.0, 5.0)(rng);
    const Eigen::Index n = m.dim();
    Operator total = Operator::Zero(n, n);
    for (std::size_t k = 0; k < m.observable().size(); ++k) {
      const Operator f = accumulate_F(m, k, t).matrix;
      CHECK(hermiticity_defect(f) == 0.0);
      const auto s = hermitian_eig(f);
      CHECK(s.eigenvalues.minCoeff() >= -1e-10 * (1 + t));
      CHECK(s.eigenvalues.maxCoeff() <= t + 1e-10 * (1 + t));
      total += f;
    }
    CHECK((total - t * Operator::Identity(n, n)).norm() <= 1e-10 * (1 + t));
  }
}

TEST_CASE("dwell and presence on the driven two-level system") {
  for (double t : {0.0, 0.3, 1.0, 2.7, 10.0}) {
    CHECK(std::abs(dwell_time(rabi(), 0, t) - (0.625 * t + 0.09375 * std::sin(4 * t))) < 1e-12);
    CHECK(std::abs(presence_probability(rabi(), 1, t) - 0.75 * std::pow(std::sin(2 * t), 2)) < 1e-12);
  }
  CHECK(std::abs(dwell_time(rabi(), 0, 0.0)) < 1e-15);
}

TEST_CASE("dwell time is the integral of the presence probability") {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = random_model(rng, {.mixed = trial % 2 == 0});
    const double t = 2.0;
    for (std::size_t k = 0; k < m.observable().size(); ++k) {
      const double integral = simpson([&](double s) { return presence_probability(m, k, s); }, t, 400);
      CHECK(std::abs(dwell_time(m, k, t) - integral) < 1e-7);
    }
  }
}

TEST_CASE("dwell time is non-decreasing in t") {
  Rng rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = random_model(rng);
    for (std::size_t k = 0; k < m.observable().size(); ++k) {
      double prev = 0;
      for (int i = 1; i <= 50; ++i) {
        const double now = dwell_time(m, k, 0.1 * i);
        CHECK(now >= prev - 1e-12);
        prev = now;
      }
    }
  }
}

TEST_CASE("region_time") {
  for (double t : {0.5, 1.0, 4.0}) {
    CHECK(std::abs(region_time(rabi(), {0, 1}, t) - t) < 1e-12);
    CHECK(std::abs(region_time(rabi(), {1}, t) - dwell_time(rabi(), 1, t)) < 1e-15);
  }
  CHECK_THROWS_AS(region_time(rabi(), {}, 1.0), ValidationError);
  CHECK_THROWS_AS(region_time(rabi(), {0, 5}, 1.0), UnknownIndex);
}

TEST_CASE("conditional components on the driven two-level system") {
  const double t = 1.0;
  SUBCASE("final level 1") {
    const auto r0 = conditional_components(rabi(), 0, 1, t);
    const auto r1 = conditional_components(rabi(), 1, 1, t);
    CHECK(std::abs(r0.tau1 - 0.5) < 1e-12);
    CHECK(std::abs(r1.tau1 - 0.5) < 1e-12);
    CHECK(std::abs(r0.tau2 + r1.tau2) < 1e-12);
    CHECK(std::abs(r0.prob_f - 0.75 * std::pow(std::sin(2.0), 2)) < 1e-12);
    CHECK_FALSE(r0.definite);
  }
  SUBCASE("final level 0 against the closed forms") {
    const twolevel::Params p{2.0, {std::sqrt(3.0), 0.0}};
    const auto closed = twolevel::conditional_closed(p, t, 0);
    const auto r0 = conditional_components(rabi(), 0, 0, t);
    const auto r1 = conditional_components(rabi(), 1, 0, t);
    CHECK(std::abs(r0.tau1 - 0.6422797932421105) < 1e-12);
    CHECK(std::abs(r1.tau1 - 0.35772020675788947) < 1e-12);
    CHECK(std::abs(r0.tau2 - closed.tau2_of_0) < 1e-12);
    CHECK(std::abs(r0.tau2 - 2.0 * closed.tau2_of_0_uncorrected) < 1e-12);
  }
  SUBCASE("identity final reduces to the dwell time") {
    const auto m = with_identity_final(rabi());
    const auto r = conditional_components(m, 0, 0, 2.3);
    CHECK(std::abs(r.tau1 - dwell_time(m, 0, 2.3)) < 1e-12);
    CHECK(std::abs(r.tau2) < 1e-14);
    CHECK(r.definite);
  }
  SUBCASE("vanishing postselection") {
    CHECK_THROWS_AS(conditional_components(rabi(), 0, 1, 0.0), VanishingPostselection);
    CHECK_THROWS_AS(conditional_components(rabi(), 0, 1, std::numbers::pi / 2), VanishingPostselection);
  }
  SUBCASE("bad indices") {
    CHECK_THROWS_AS(conditional_components(rabi(), 0, 2, t), UnknownIndex);
    CHECK_THROWS_AS(conditional_components(rabi(), 3, 0, t), UnknownIndex);
  }
}

TEST_CASE("conditional_time combines the components with the detector coefficient") {
  const auto r = conditional_components(rabi(), 0, 0, 1.0);
  for (double c : {-2.0, 0.0, 0.7}) {
    CHECK(std::abs(conditional_time(rabi(), 0, 0, 1.0, c) - (r.tau1 + c * r.tau2)) < 1e-14);
  }
}

TEST_CASE("definiteness") {
  SUBCASE("uncoupled levels are definite") {
    const auto m = twolevel::build_two_level(2.0, 0.0);
    const auto r = definiteness_check(m, 0, 0, 1.0);
    CHECK(r.definite);
    CHECK(r.norm <= 1e-10);
  }
  SUBCASE("driven levels are indefinite for final 1") {
    const auto r = definiteness_check(rabi(), 0, 1, 1.0);
    CHECK_FALSE(r.definite);
    CHECK(r.norm > 1e-3);
  }
  SUBCASE("definite implies detector independence") {
    Rng rng(53);
    for (int trial = 0; trial < 10; ++trial) {
      const auto m = with_identity_final(random_model(rng));
      const double t = 1.5;
      const double base = conditional_time(m, 0, 0, t, 0.0);
      for (double c : {-10.0, 10.0}) CHECK(std::abs(conditional_time(m, 0, 0, t, c) - base) <= 1e-9 * t);
    }
  }
}

TEST_CASE("sum rules hold on the two-level system") {
  for (double t : {0.1, 1.0, 3.3, 7.0}) CHECK(sum_rule_report(rabi(), t).max_residual() <= 1e-10);
  SystemDraft d = twolevel::build_two_level(2.0, 0.0).draft();
  Operator rho = Operator::Zero(2, 2);
  rho.diagonal() << 0.7, 0.3;
  d.initial = State::density(rho);
  CHECK(sum_rule_report(validate_system(d), 2.0).max_residual() <= 1e-12);
  CHECK_THROWS_AS(sum_rule_report(twolevel::build_two_level(2.0, 0.0), 2.0), VanishingPostselection);
}

TEST_CASE("sum rules hold on random models") {
  Rng rng(59);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_model(rng, {.min_dim = 4, .max_dim = 4, .mixed = trial % 3 == 0});
    bool usable = true;
    for (std::size_t f = 0; f < m.finals().size(); ++f) usable &= postselection_probability(m, f, 2.0) >= 1e-6;
    if (!usable) continue;
    CHECK(sum_rule_report(m, 2.0).max_residual() <= 1e-8);
    ++checked;
  }
  CHECK(checked > 90);
}

TEST_CASE("exact and quadrature accumulated operators agree") {
  Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = random_model(rng);
    for (double t : {0.1, 1.0, 3.0}) {
      const Operator exact = accumulate_F(m, 0, t).matrix;
      const auto quad = accumulate_F(m, 0, t, FMethod::Quadrature);
      CHECK(quad.method == FMethod::Quadrature);
      CHECK((exact - quad.matrix).norm() <= 1e-8 * t);
    }
  }
}

TEST_CASE("quadrature sample count") {
  CHECK(quadrature_samples(rabi(), 0.1) == 200);
  CHECK(quadrature_samples(rabi(), 1.0) == 1000);
  CHECK(quadrature_samples(rabi(), 1.0, {.quadrature_N = 7}) % 2 == 0);
  Rng rng(67);
  const auto big = random_model(rng, {.h_scale = 100.0});
  CHECK(quadrature_samples(big, 1.0) >= static_cast<long>(20 * big.hamiltonian().norm()));
}
