#pragma once

// Test-only generators and reference computations. Nothing here calls into
// the timefunc evaluation path, so it can serve as an independent check.

#include <unsupported/Eigen/MatrixFunctions>

#include <random>
#include <vector>

#include "weaktime/model.hpp"

namespace weaktime::testing {

using Rng = std::mt19937_64;

inline Complex random_complex(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng), n(rng)};
}

inline Operator random_hermitian(Rng& rng, Eigen::Index dim, double scale = 1.0) {
  Operator a(dim, dim);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = random_complex(rng);
  return scale * (a + a.adjoint()) / 2.0;
}

inline Operator random_unitary(Rng& rng, Eigen::Index dim) {
  Operator a(dim, dim);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = random_complex(rng);
  Eigen::HouseholderQR<Operator> qr(a);
  return qr.householderQ() * Operator::Identity(dim, dim);
}

inline Ket random_ket(Rng& rng, Eigen::Index dim) {
  Ket v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = random_complex(rng);
  return v.normalized();
}

inline Operator random_density(Rng& rng, Eigen::Index dim) {
  Operator a(dim, dim);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = random_complex(rng);
  Operator rho = a * a.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / 2.0;
}

/// Splits the columns of a random unitary into `parts` non-empty blocks and
/// returns the block projectors; they are orthogonal and sum to the identity.
inline std::vector<Operator> random_partition(Rng& rng, Eigen::Index dim, std::size_t parts) {
  const Operator u = random_unitary(rng, dim);
  std::vector<Eigen::Index> sizes(parts, 1);
  std::uniform_int_distribution<std::size_t> pick(0, parts - 1);
  for (Eigen::Index extra = dim - static_cast<Eigen::Index>(parts); extra > 0; --extra) ++sizes[pick(rng)];
  std::vector<Operator> out;
  Eigen::Index col = 0;
  for (auto s : sizes) {
    const Operator block = u.middleCols(col, s);
    out.push_back(block * block.adjoint());
    col += s;
  }
  return out;
}

struct RandomModelOptions {
  Eigen::Index min_dim = 2;
  Eigen::Index max_dim = 6;
  bool mixed = false;
  double h_scale = 1.0;
};

/// Random Hamiltonian, random observable and a random complete final family.
inline SystemModel random_model(Rng& rng, const RandomModelOptions& opt = {}) {
  std::uniform_int_distribution<Eigen::Index> dim_dist(opt.min_dim, opt.max_dim);
  const Eigen::Index dim = dim_dist(rng);
  std::uniform_int_distribution<std::size_t> parts_dist(2, static_cast<std::size_t>(dim));

  ObservableSpec obs;
  obs.projectors = random_partition(rng, dim, parts_dist(rng));
  for (std::size_t k = 0; k < obs.projectors.size(); ++k) obs.values.push_back(static_cast<double>(k));

  FinalFamily finals;
  finals.projectors = random_partition(rng, dim, parts_dist(rng));
  for (std::size_t f = 0; f < finals.projectors.size(); ++f) finals.labels.push_back("f" + std::to_string(f));
  finals.complete = true;

  State initial = opt.mixed ? State::density(random_density(rng, dim)) : State::pure(random_ket(rng, dim));
  return validate_system(SystemDraft{random_hermitian(rng, dim, opt.h_scale), std::move(initial),
                                     std::move(obs), std::move(finals)});
}

/// int_0^t exp(iHs) P exp(-iHs) ds from a single block matrix exponential
/// (Pade scaling-and-squaring, no eigendecomposition):
///   exp(t [[-iH, P], [0, -iH]]) has upper-right block
///   int_0^t exp(-iH(t-s)) P exp(-iHs) ds = exp(-iHt) F.
inline Operator block_exponential_F(const Operator& h, const Operator& p, double t) {
  const Eigen::Index n = h.rows();
  Operator block = Operator::Zero(2 * n, 2 * n);
  const Operator gen = Complex(0, -1) * h;
  block.topLeftCorner(n, n) = gen;
  block.topRightCorner(n, n) = p;
  block.bottomRightCorner(n, n) = gen;
  const Operator e = (t * block).exp();
  const Operator forward = (Complex(0, t) * h).exp();
  return forward * e.topRightCorner(n, n);
}

/// Composite Simpson rule for a scalar function on [0, t] with n (even) panels.
template <typename Fn>
double simpson(Fn&& fn, double t, long n) {
  if (t == 0) return 0;
  const double h = t / static_cast<double>(n);
  double acc = fn(0.0) + fn(t);
  for (long i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * fn(h * static_cast<double>(i));
  return acc * h / 3;
}

}  // namespace weaktime::testing
