// Dimensionless parameterization of the controlled three-qubit Ising chain.
//
// Everything downstream is built from the quantities defined here: the
// energy constraint omega_k^2 = omega_hat^2 - 1 - K^2, the control-field
// chart (phi, Omega, theta0), and the per-mode constants (beta_i, omega_i)
// that drive the closed-form dynamics. A "mode" is a joint sigma_z sector
// of the outer qubits (q1,q3); within each mode the middle qubit evolves in
// a decoupled 2x2 block.
//
// Convention: beta_i = Bz + sector_i - Omega/2 and omega_i^2 = B0^2 + beta_i^2,
// which gives exact mode-level unitarity |a_i|^2 + B0^2 s_i^2 = 1.

#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "qbtangle/dense.hpp"
#include "qbtangle/errors.hpp"

namespace qbt {

/// Coupling ratio K = J23/J12 and squared rescaled energy (omega/J12)^2.
struct ChainParams {
  double k_ratio = 1.0;
  double omega_hat_sq = 6.0;
};

/// Control-field integration constants in the (phi, Omega, theta0) chart.
/// B0 = omega_k*cos(phi) and Bz = omega_k*sin(phi) are always derived, never
/// set directly, so B0^2 + Bz^2 = omega_k^2 holds by construction.
struct FieldParams {
  double phi = 0.0;        // field tilt, radians
  double omega_big = 0.0;  // precession frequency Omega (dimensionless)
  double theta0 = 0.0;     // initial azimuth, radians
};

/// Squared control-field magnitude fixed by the energy constraint.
/// Throws InsufficientEnergy when omega_hat^2 < 1 + K^2.
inline double omega_k_sq(const ChainParams& p) {
  const double v = p.omega_hat_sq - 1.0 - p.k_ratio * p.k_ratio;
  if (v < 0.0)
    throw InsufficientEnergy("omega_hat^2 - 1 - K^2 = " + std::to_string(v) +
                             " < 0: no valid control field");
  return v;
}

inline double omega_k(const ChainParams& p) { return std::sqrt(omega_k_sq(p)); }

/// Transverse and longitudinal field amplitudes derived from the chart.
struct DerivedField {
  double b0 = 0.0;
  double bz = 0.0;
};

inline DerivedField derived_field(const ChainParams& p, const FieldParams& f) {
  const double wk = omega_k(p);
  return {wk * std::cos(f.phi), wk * std::sin(f.phi)};
}

/// Per-mode effective detuning and frequency. Mode index m in [0,4) labels
/// the outer-qubit sector (q1,q3) = (0,0),(0,1),(1,0),(1,1); the sector
/// constants are +(1+K), +(1-K), -(1-K), -(1+K).
struct ModeConstants {
  std::array<double, 4> beta{};
  std::array<double, 4> omega{};
  double b0 = 0.0;  // carried along; every mode block needs it
};

inline ModeConstants mode_constants(const ChainParams& p, const FieldParams& f) {
  const auto [b0, bz] = derived_field(p, f);
  const double k = p.k_ratio;
  const std::array<double, 4> sector = {1.0 + k, 1.0 - k, -(1.0 - k), -(1.0 + k)};
  ModeConstants m;
  m.b0 = b0;
  for (int i = 0; i < 4; ++i) {
    m.beta[i] = bz + sector[i] - 0.5 * f.omega_big;
    m.omega[i] = std::hypot(b0, m.beta[i]);
  }
  return m;
}

/// sin(w*tau)/w with the removable singularity handled by series when
/// |w*tau| < 1e-6 (reachable at B0 = 0, beta_i = 0).
inline double sin_over_omega(double w, double tau) {
  const double x = w * tau;
  if (std::abs(x) < 1e-6) {
    const double x2 = x * x;
    return tau * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
  }
  return std::sin(x) / w;
}

/// Time-domain mode functions s_i, c_i and a_i = c_i + i*beta_i*s_i.
struct ModeFunctions {
  double s = 0.0;
  double c = 1.0;
  cplx a = 1.0;
};

inline ModeFunctions mode_functions(const ModeConstants& m, int mode, double tau) {
  const double w = m.omega[static_cast<std::size_t>(mode)];
  const double s = sin_over_omega(w, tau);
  const double c = std::cos(w * tau);
  return {s, c, cplx(c, m.beta[static_cast<std::size_t>(mode)] * s)};
}

/// Energy-constraint residual Tr(H^2)/8 - omega_hat^2, computed from an
/// explicitly assembled Hamiltonian matrix. Zero to 1e-12 by construction.
inline double energy_check(const ChainParams& p, const FieldParams& f,
                           double tau = 0.0) {
  const auto [b0, bz] = derived_field(p, f);
  const double theta = f.omega_big * tau + f.theta0;
  const Matrix8cd h = kron3(pauli::z(), pauli::z(), pauli::id()) +
                      p.k_ratio * kron3(pauli::id(), pauli::z(), pauli::z()) +
                      b0 * std::cos(theta) * kron3(pauli::id(), pauli::x(), pauli::id()) +
                      b0 * std::sin(theta) * kron3(pauli::id(), pauli::y(), pauli::id()) +
                      bz * kron3(pauli::id(), pauli::z(), pauli::id());
  // H is Hermitian, so Tr(H^2) equals the squared Frobenius norm.
  return h.squaredNorm() / 8.0 - p.omega_hat_sq;
}

}  // namespace qbt
