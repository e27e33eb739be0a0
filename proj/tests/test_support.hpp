// Shared test utilities: deterministic pseudo-random states and parameter
// tuples, plus independent oracles (Wootters concurrence, CKW residual
// 3-tangle, explicit partial traces) used to cross-check the library's
// tangle machinery through an entirely different route.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qbtangle/qbtangle.hpp"

namespace qbtest {

using namespace qbt;

// uint64 -> [0,1) mapping, identical on every platform
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Box-Muller without the trig-pair caching of std::normal_distribution
inline double gaussian(std::mt19937_64& rng) {
  const double u1 = std::max(uniform01(rng), 1e-300);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline PureState3 random_state(std::mt19937_64& rng) {
  PureState3 s;
  for (int i = 0; i < 8; ++i) s[i] = cplx(gaussian(rng), gaussian(rng));
  const double n = std::sqrt(s.norm_sq());
  for (auto& a : s.amps) a /= n;
  return s;
}

struct ParamTuple {
  ChainParams chain;
  FieldParams field;
};

// Valid (omega_k^2 >= 0.25) parameter tuples, deterministic under the seed.
inline std::vector<ParamTuple> random_tuples(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ParamTuple> out;
  while (static_cast<int>(out.size()) < count) {
    ChainParams p{uniform(rng, -2.0, 2.0), uniform(rng, 2.5, 16.0)};
    const FieldParams f{uniform(rng, 0.0, 2.0 * M_PI), uniform(rng, -6.0, 6.0),
                        uniform(rng, 0.0, 2.0 * M_PI)};
    if (p.omega_hat_sq - 1.0 - p.k_ratio * p.k_ratio < 0.25) continue;
    out.push_back({p, f});
  }
  return out;
}

// Explicit two-qubit reduced density matrix, tracing out the third qubit.
// keep_a/keep_b are qubit labels 1..3 (most significant bit first).
inline Eigen::Matrix4cd reduced_density_pair(int keep_a, int keep_b,
                                             const PureState3& psi) {
  const int bit_a = 3 - keep_a;
  const int bit_b = 3 - keep_b;
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const int mask = (1 << bit_a) | (1 << bit_b);
      if ((i & ~mask) != (j & ~mask)) continue;
      const int r = 2 * ((i >> bit_a) & 1) + ((i >> bit_b) & 1);
      const int c = 2 * ((j >> bit_a) & 1) + ((j >> bit_b) & 1);
      rho(r, c) += psi[i] * std::conj(psi[j]);
    }
  return rho;
}

// Wootters concurrence of a two-qubit density matrix.
inline double concurrence(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd m = rho * yy * rho.conjugate() * yy;
  const Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(m);
  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i)
    lam[static_cast<std::size_t>(i)] =
        std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  std::sort(lam.begin(), lam.end(), std::greater<double>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

// Independent 2-tangle between qubits 1 and 3: squared concurrence of the
// traced pair.
inline double tau13_wootters(const PureState3& psi) {
  const double c = concurrence(reduced_density_pair(1, 3, psi));
  return c * c;
}

// Independent 3-tangle via the CKW monogamy residual:
// tau_123 = 4 det(rho_1) - C_12^2 - C_13^2.
inline double tau123_ckw(const PureState3& psi) {
  const double c12 = concurrence(reduced_density_pair(1, 2, psi));
  const double c13 = concurrence(reduced_density_pair(1, 3, psi));
  const Eigen::Matrix2cd rho1 = reduced_density(1, psi);
  return 4.0 * rho1.determinant().real() - c12 * c12 - c13 * c13;
}

}  // namespace qbtest
