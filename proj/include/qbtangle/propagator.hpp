// Analytic time-optimal propagator for the controlled Ising chain, the six
// LOCC representative initial states, and their closed-form evolved
// amplitudes.
//
// The evolution operator is block diagonal over the outer-qubit sectors.
// Within mode m (sector indices lo = middle |0>, hi = middle |1>) the 2x2
// block is, up to the global phase exp(-i*Omega*tau/2):
//
//     [ a_m^*                    -i*B0*exp(-i*theta0)*s_m   ]
//     [ -i*B0*exp(i*theta)*s_m    exp(i*Omega*tau)*a_m      ]
//
// with theta(tau) = Omega*tau + theta0. Matrix elements connecting different
// sectors are exactly zero.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "qbtangle/model.hpp"

namespace qbt {

/// LOCC equivalence classes represented by one initial state each.
enum class StateClass { S, B1, B2, B3, W, GHZ };

inline const char* to_string(StateClass c) {
  switch (c) {
    case StateClass::S: return "s";
    case StateClass::B1: return "b1";
    case StateClass::B2: return "b2";
    case StateClass::B3: return "b3";
    case StateClass::W: return "w";
    case StateClass::GHZ: return "ghz";
  }
  return "?";
}

inline std::optional<StateClass> state_class_from_string(std::string_view s) {
  if (s == "s") return StateClass::S;
  if (s == "b1") return StateClass::B1;
  if (s == "b2") return StateClass::B2;
  if (s == "b3") return StateClass::B3;
  if (s == "w") return StateClass::W;
  if (s == "ghz") return StateClass::GHZ;
  return std::nullopt;
}

/// Three-qubit pure state: amplitudes a_0..a_7 in the 4*q1+2*q2+q3 basis.
struct PureState3 {
  std::array<cplx, 8> amps{};

  cplx& operator[](int i) { return amps[static_cast<std::size_t>(i)]; }
  const cplx& operator[](int i) const { return amps[static_cast<std::size_t>(i)]; }

  double norm_sq() const {
    double n = 0.0;
    for (const cplx& a : amps) n += std::norm(a);
    return n;
  }

  Vector8cd vec() const {
    Vector8cd v;
    for (int i = 0; i < 8; ++i) v(i) = amps[static_cast<std::size_t>(i)];
    return v;
  }

  static PureState3 from_vec(const Vector8cd& v) {
    PureState3 s;
    for (int i = 0; i < 8; ++i) s[i] = v(i);
    return s;
  }
};

// Basis indices (middle |0>, middle |1>) of each outer-qubit sector.
inline constexpr std::array<std::array<int, 2>, 4> kModeIndex = {
    {{0, 2}, {1, 3}, {4, 6}, {5, 7}}};

/// Control field (Bx, By, Bz) at rescaled time tau.
inline Eigen::Vector3d field_at(const ChainParams& p, const FieldParams& f,
                                double tau) {
  const auto [b0, bz] = derived_field(p, f);
  const double theta = f.omega_big * tau + f.theta0;
  return {b0 * std::cos(theta), b0 * std::sin(theta), bz};
}

/// Rescaled chain Hamiltonian H(tau) = sz1 sz2 + K sz2 sz3 + B(tau).sigma2.
/// Hermitian, traceless, Tr(H^2) = 8*omega_hat^2.
inline Matrix8cd hamiltonian_at(const ChainParams& p, const FieldParams& f,
                                double tau) {
  const Eigen::Vector3d b = field_at(p, f, tau);
  return kron3(pauli::z(), pauli::z(), pauli::id()) +
         p.k_ratio * kron3(pauli::id(), pauli::z(), pauli::z()) +
         b.x() * kron3(pauli::id(), pauli::x(), pauli::id()) +
         b.y() * kron3(pauli::id(), pauli::y(), pauli::id()) +
         b.z() * kron3(pauli::id(), pauli::z(), pauli::id());
}

/// Time-optimal evolution operator U(tau), U(0) = I.
inline Unitary8 u_opt(const ChainParams& p, const FieldParams& f, double tau) {
  const ModeConstants m = mode_constants(p, f);
  const double theta = f.omega_big * tau + f.theta0;
  const cplx gp = std::polar(1.0, -0.5 * f.omega_big * tau);
  const cplx up_phase = cplx(0, -1) * m.b0 * std::polar(1.0, -f.theta0);
  const cplx dn_phase = cplx(0, -1) * m.b0 * std::polar(1.0, theta);
  const cplx ei_omega_tau = std::polar(1.0, f.omega_big * tau);

  Unitary8 u = Unitary8::Zero();
  for (int mode = 0; mode < 4; ++mode) {
    const auto [lo, hi] = kModeIndex[static_cast<std::size_t>(mode)];
    const ModeFunctions mf = mode_functions(m, mode, tau);
    u(lo, lo) = gp * std::conj(mf.a);
    u(hi, hi) = gp * ei_omega_tau * mf.a;
    u(hi, lo) = gp * dn_phase * mf.s;
    u(lo, hi) = gp * up_phase * mf.s;
  }
  return u;
}

/// Normalized representative state of a class.
inline PureState3 representative_state(StateClass c) {
  PureState3 s;
  const double r2 = 1.0 / std::sqrt(2.0);
  const double r3 = 1.0 / std::sqrt(3.0);
  switch (c) {
    case StateClass::S: s[0] = 1.0; break;
    case StateClass::B1: s[1] = r2; s[2] = r2; break;
    case StateClass::B2: s[1] = r2; s[4] = r2; break;
    case StateClass::B3: s[2] = r2; s[4] = r2; break;
    case StateClass::W: s[1] = r3; s[2] = r3; s[4] = r3; break;
    case StateClass::GHZ: s[0] = r2; s[7] = r2; break;
  }
  return s;
}

namespace detail {

// Per-mode block entries of U(tau) without the global phase; the evolved
// amplitude tables are assembled from these four slots.
struct ModeSlots {
  cplx diag0;  // <mid 0|U|mid 0> : a_m^*
  cplx lower;  // <mid 1|U|mid 0> : -i B0 e^{i theta} s_m
  cplx upper;  // <mid 0|U|mid 1> : -i B0 e^{-i theta0} s_m
  cplx diag1;  // <mid 1|U|mid 1> : e^{i Omega tau} a_m
};

inline ModeSlots mode_slots(const ModeConstants& m, const FieldParams& f, int mode,
                            double tau) {
  const ModeFunctions mf = mode_functions(m, mode, tau);
  const double theta = f.omega_big * tau + f.theta0;
  return {std::conj(mf.a),
          cplx(0, -1) * m.b0 * std::polar(1.0, theta) * mf.s,
          cplx(0, -1) * m.b0 * std::polar(1.0, -f.theta0) * mf.s,
          std::polar(1.0, f.omega_big * tau) * mf.a};
}

}  // namespace detail

/// Closed-form evolved amplitudes of the representative state of class c,
/// global phase exp(-i*Omega*tau/2) included.
inline PureState3 evolve_class(StateClass c, const ChainParams& p,
                               const FieldParams& f, double tau) {
  const ModeConstants m = mode_constants(p, f);
  const double r2 = 1.0 / std::sqrt(2.0);
  const double r3 = 1.0 / std::sqrt(3.0);

  // Initial basis component idx with weight w feeds the two slots of its mode.
  PureState3 out;
  const auto add = [&](int idx, double w) {
    const int q1 = (idx >> 2) & 1;
    const int q2 = (idx >> 1) & 1;
    const int q3 = idx & 1;
    const int mode = 2 * q1 + q3;
    const auto [lo, hi] = kModeIndex[static_cast<std::size_t>(mode)];
    const detail::ModeSlots slots = detail::mode_slots(m, f, mode, tau);
    if (q2 == 0) {
      out[lo] += w * slots.diag0;
      out[hi] += w * slots.lower;
    } else {
      out[lo] += w * slots.upper;
      out[hi] += w * slots.diag1;
    }
  };

  switch (c) {
    case StateClass::S: add(0, 1.0); break;
    case StateClass::B1: add(1, r2); add(2, r2); break;
    case StateClass::B2: add(1, r2); add(4, r2); break;
    case StateClass::B3: add(2, r2); add(4, r2); break;
    case StateClass::W: add(1, r3); add(2, r3); add(4, r3); break;
    case StateClass::GHZ: add(0, r2); add(7, r2); break;
  }

  const cplx gp = std::polar(1.0, -0.5 * f.omega_big * tau);
  for (cplx& a : out.amps) a *= gp;
  return out;
}

/// U_opt(tau) applied to an arbitrary initial state.
inline PureState3 evolve_general(const PureState3& psi0, const ChainParams& p,
                                 const FieldParams& f, double tau) {
  return PureState3::from_vec(u_opt(p, f, tau) * psi0.vec());
}

}  // namespace qbt
