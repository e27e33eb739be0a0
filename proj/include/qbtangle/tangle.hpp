// Entanglement measures for three-qubit pure states: Cayley hyperdeterminant,
// single-qubit reduced-density determinants, the 2-tangle tau_13 between the
// outer qubits, and the 3-tangle tau_123 = 4*|HypDet| (CKW normalization, the
// unique choice under which tau_13 + tau_123 is conserved at the class value
// along the optimal trajectories). Closed-form trajectory evaluations for the
// six representative classes live here as well.

#pragma once

#include <cmath>
#include <complex>

#include "qbtangle/propagator.hpp"

namespace qbt {

/// 2-tangle / 3-tangle at one instant of a trajectory.
struct TanglePair {
  double tau13 = 0.0;
  double tau123 = 0.0;
};

/// Cayley hyperdeterminant of the amplitude tensor (norm not required).
inline cplx hyperdet(const PureState3& psi) {
  const auto& a = psi.amps;
  const cplx p07 = a[0] * a[7];
  const cplx p16 = a[1] * a[6];
  const cplx p25 = a[2] * a[5];
  const cplx p34 = a[3] * a[4];
  return p07 * p07 + p16 * p16 + p25 * p25 + p34 * p34 -
         2.0 * ((p07 + p16) * (p25 + p34) + a[0] * a[1] * a[6] * a[7] +
                a[2] * a[3] * a[4] * a[5]) +
         4.0 * (a[0] * a[3] * a[5] * a[6] + a[1] * a[2] * a[4] * a[7]);
}

/// Reduced density matrix of qubit `which` (1, 2 or 3) by explicit partial
/// trace over the other two.
inline Eigen::Matrix2cd reduced_density(int which, const PureState3& psi) {
  if (which < 1 || which > 3)
    throw Error("BadArgument", "reduced_density: which must be 1, 2 or 3");
  const int bit = 3 - which;  // qubit 1 is the most significant index bit
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      if ((i & ~(1 << bit)) != (j & ~(1 << bit))) continue;
      rho((i >> bit) & 1, (j >> bit) & 1) += psi[i] * std::conj(psi[j]);
    }
  return rho;
}

/// Determinant of the single-qubit reduced density matrix via the
/// quadratic-in-pairs expansion. Matches det(reduced_density(which, psi))
/// to 1e-12 on normalized states.
inline double det_rho(int which, const PureState3& psi) {
  const auto& a = psi.amps;
  std::array<double, 8> n{};
  for (int i = 0; i < 8; ++i) n[static_cast<std::size_t>(i)] = std::norm(a[i]);
  const auto re4 = [](cplx u, cplx v, cplx w, cplx x) {
    return (u * v * std::conj(w) * std::conj(x)).real();
  };
  switch (which) {
    case 1:
      return n[0] * (n[5] + n[6] + n[7]) + n[1] * (n[4] + n[6] + n[7]) +
             n[2] * (n[4] + n[5] + n[7]) + n[3] * (n[4] + n[5] + n[6]) -
             2.0 * (re4(a[0], a[5], a[1], a[4]) + re4(a[0], a[6], a[2], a[4]) +
                    re4(a[0], a[7], a[3], a[4]) + re4(a[1], a[6], a[2], a[5]) +
                    re4(a[1], a[7], a[3], a[5]) + re4(a[2], a[7], a[3], a[6]));
    case 2:
      return n[0] * (n[3] + n[6] + n[7]) + n[1] * (n[2] + n[6] + n[7]) +
             n[4] * (n[2] + n[3] + n[7]) + n[5] * (n[2] + n[3] + n[6]) -
             2.0 * (re4(a[0], a[3], a[1], a[2]) + re4(a[0], a[6], a[2], a[4]) +
                    re4(a[0], a[7], a[2], a[5]) + re4(a[1], a[6], a[3], a[4]) +
                    re4(a[1], a[7], a[3], a[5]) + re4(a[4], a[7], a[5], a[6]));
    case 3:
      return n[0] * (n[3] + n[5] + n[7]) + n[2] * (n[1] + n[5] + n[7]) +
             n[4] * (n[1] + n[3] + n[7]) + n[6] * (n[1] + n[3] + n[5]) -
             2.0 * (re4(a[0], a[3], a[1], a[2]) + re4(a[0], a[5], a[1], a[4]) +
                    re4(a[0], a[7], a[1], a[6]) + re4(a[2], a[5], a[3], a[4]) +
                    re4(a[2], a[7], a[3], a[6]) + re4(a[4], a[7], a[5], a[6]));
    default:
      throw Error("BadArgument", "det_rho: which must be 1, 2 or 3");
  }
}

/// The combined determinant expression Det(rho1) - Det(rho2) + Det(rho3) in
/// closed form; equals the sum of det_rho calls to 1e-12.
inline double combined_det_expression(const PureState3& psi) {
  const auto& a = psi.amps;
  std::array<double, 8> n{};
  for (int i = 0; i < 8; ++i) n[static_cast<std::size_t>(i)] = std::norm(a[i]);
  const cplx p07 = a[0] * a[7];
  const cplx p16 = a[1] * a[6];
  const cplx p25 = a[2] * a[5];
  const cplx p34 = a[3] * a[4];
  return 2.0 * (n[0] * n[5] + n[1] * n[4] + n[2] * n[7] + n[3] * n[6]) +
         (n[0] * n[7] + n[1] * n[6] + n[2] * n[5] + n[3] * n[4]) -
         2.0 * (p07 * std::conj(p16) + p25 * std::conj(p34) -
                (p07 - p16) * std::conj(p25 - p34))
                   .real() -
         4.0 * (a[0] * a[5] * std::conj(a[1] * a[4]) +
                a[2] * a[7] * std::conj(a[3] * a[6]))
                   .real();
}

namespace detail {

// The measures are squares/moduli; values in [-1e-9, 0) are float noise and
// clamp to zero, values within 1e-12 above one clip to one.
inline double clip_measure(double v) {
  if (v < 0.0 && v >= -1e-9) return 0.0;
  if (v > 1.0 && v <= 1.0 + 1e-12) return 1.0;
  return v;
}

}  // namespace detail

/// 2-tangle between qubits 1 and 3:
/// tau_13 = 2*[Det(rho1) - Det(rho2) + Det(rho3) - |HypDet|].
/// Throws NegativeTangle below -1e-9 (an implementation bug, not a data case).
inline double two_tangle_13(const PureState3& psi) {
  const double v = 2.0 * (det_rho(1, psi) - det_rho(2, psi) + det_rho(3, psi) -
                          std::abs(hyperdet(psi)));
  if (v < -1e-9)
    throw NegativeTangle("tau_13 = " + std::to_string(v) + " < -1e-9");
  return detail::clip_measure(v);
}

/// 3-tangle tau_123 = 4*|HypDet|.
inline double three_tangle(const PureState3& psi) {
  return detail::clip_measure(4.0 * std::abs(hyperdet(psi)));
}

/// Closed-form tau_13 along the optimal trajectory of class c. Identically
/// zero for S, B1 and B3; equals two_tangle_13(evolve_class(c, ...)) to 1e-10
/// for every class.
inline double tau13_closed(StateClass c, const ChainParams& p, const FieldParams& f,
                           double tau) {
  const ModeConstants m = mode_constants(p, f);
  const double g2 = m.b0 * m.b0;
  switch (c) {
    case StateClass::S:
    case StateClass::B1:
    case StateClass::B3:
      return 0.0;
    case StateClass::B2:
    case StateClass::W: {
      const ModeFunctions m2 = mode_functions(m, 1, tau);
      const ModeFunctions m3 = mode_functions(m, 2, tau);
      const double v = std::norm(std::conj(m2.a) * m3.a + g2 * m2.s * m3.s);
      return detail::clip_measure(c == StateClass::W ? (4.0 / 9.0) * v : v);
    }
    case StateClass::GHZ: {
      const ModeFunctions m1 = mode_functions(m, 0, tau);
      const ModeFunctions m4 = mode_functions(m, 3, tau);
      return detail::clip_measure(g2 * std::norm(m1.a * m4.s - m4.a * m1.s));
    }
  }
  return 0.0;
}

/// Closed-form tau_123: the class-normalized complement of tau13_closed,
/// conserved sums S/B1/B3 -> 0, B2/GHZ -> 1, W -> 4/9. Evaluated in direct
/// product form (exactly 1 - tau13 by the Lagrange identity on the unit mode
/// vectors), which stays accurate where the complement is tiny.
inline double tau123_closed(StateClass c, const ChainParams& p,
                            const FieldParams& f, double tau) {
  const ModeConstants m = mode_constants(p, f);
  const double g2 = m.b0 * m.b0;
  switch (c) {
    case StateClass::S:
    case StateClass::B1:
    case StateClass::B3:
      return 0.0;
    case StateClass::B2:
    case StateClass::W: {
      const ModeFunctions m2 = mode_functions(m, 1, tau);
      const ModeFunctions m3 = mode_functions(m, 2, tau);
      const double v = g2 * std::norm(m2.a * m3.s - m3.a * m2.s);
      return detail::clip_measure(c == StateClass::W ? (4.0 / 9.0) * v : v);
    }
    case StateClass::GHZ: {
      const ModeFunctions m1 = mode_functions(m, 0, tau);
      const ModeFunctions m4 = mode_functions(m, 3, tau);
      return detail::clip_measure(
          std::norm(std::conj(m1.a) * m4.a + g2 * m1.s * m4.s));
    }
  }
  return 0.0;
}

/// Conserved class total of tau13 + tau123 along optimal trajectories.
inline double class_tangle_total(StateClass c) {
  switch (c) {
    case StateClass::B2:
    case StateClass::GHZ:
      return 1.0;
    case StateClass::W:
      return 4.0 / 9.0;
    default:
      return 0.0;
  }
}

inline TanglePair tangles_closed(StateClass c, const ChainParams& p,
                                 const FieldParams& f, double tau) {
  return {tau13_closed(c, p, f, tau), tau123_closed(c, p, f, tau)};
}

/// Tangles of an explicit state via the full definition chain.
inline TanglePair tangles_of_state(const PureState3& psi) {
  return {two_tangle_13(psi), three_tangle(psi)};
}

}  // namespace qbt
