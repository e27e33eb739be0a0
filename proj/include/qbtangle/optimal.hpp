// Optimal-time and optimal-field formulas: coupling-ratio thresholds, B2
// branch classification, tau_star and field constants for the B2 and GHZ
// classes, with validity diagnostics where the printed formulas leave the
// energy-feasible region.

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qbtangle/model.hpp"
#include "qbtangle/propagator.hpp"

namespace qbt {

/// Coupling-ratio thresholds at fixed energy. K2 and K_ghz entries are
/// absent when their defining radicand is negative.
struct Thresholds {
  double k1_plus = 0.0;   // +sqrt(omega_hat^2 - 1)
  double k1_minus = 0.0;  // -k1_plus
  std::optional<double> k2_plus;     // (1/4)[13/4 + sqrt(3(omega_hat^2 - 29/16))]
  std::optional<double> k2_minus;    // (1/4)[13/4 - sqrt(...)]
  std::optional<double> k_ghz_plus;  // (1/2)[-1 + sqrt(2 omega_hat^2 - 3)]
  std::optional<double> k_ghz_minus; // (1/2)[-1 - sqrt(...)]
};

inline Thresholds thresholds(double omega_hat_sq) {
  if (omega_hat_sq <= 1.0)
    throw InvalidEnergy("thresholds require omega_hat^2 > 1, got " +
                        std::to_string(omega_hat_sq));
  Thresholds t;
  t.k1_plus = std::sqrt(omega_hat_sq - 1.0);
  t.k1_minus = -t.k1_plus;
  const double r2 = 3.0 * (omega_hat_sq - 29.0 / 16.0);
  if (r2 >= 0.0) {
    const double s = std::sqrt(r2);
    t.k2_plus = 0.25 * (13.0 / 4.0 + s);
    t.k2_minus = 0.25 * (13.0 / 4.0 - s);
  }
  const double rg = 2.0 * omega_hat_sq - 3.0;
  if (rg >= 0.0) {
    const double s = std::sqrt(rg);
    t.k_ghz_plus = 0.5 * (-1.0 + s);
    t.k_ghz_minus = 0.5 * (-1.0 - s);
  }
  return t;
}

enum class B2Branch { Branch1, Branch2, OutOfRange };

inline const char* to_string(B2Branch b) {
  switch (b) {
    case B2Branch::Branch1: return "branch1";
    case B2Branch::Branch2: return "branch2";
    case B2Branch::OutOfRange: return "out_of_range";
  }
  return "?";
}

/// Branch of the B2 optimal-time formula at (omega_hat^2, K).
inline B2Branch classify_b2(double omega_hat_sq, double k) {
  const Thresholds t = thresholds(omega_hat_sq);
  const double split = 29.0 / 16.0;
  if (omega_hat_sq > split) {
    if (*t.k2_minus < k && k < *t.k2_plus) return B2Branch::Branch2;
    if ((t.k1_minus < k && k < *t.k2_minus) || (*t.k2_plus < k && k < t.k1_plus))
      return B2Branch::Branch1;
    return B2Branch::OutOfRange;
  }
  if (omega_hat_sq < split && std::abs(k) < t.k1_plus) return B2Branch::Branch1;
  return B2Branch::OutOfRange;
}

/// Optimal time for the B2 class under its branch formula.
inline double tau_star_b2(double omega_hat_sq, double k) {
  switch (classify_b2(omega_hat_sq, k)) {
    case B2Branch::Branch2:
      return std::numbers::pi / std::sqrt(omega_hat_sq - 2.0 * k);
    case B2Branch::Branch1: {
      const double d = std::abs(1.0 - k);
      if (d < 1e-12)
        throw DivergentTime("tau_star_b2 branch 1 diverges as K -> 1");
      return 0.25 * std::sqrt(3.0) * std::numbers::pi / d;
    }
    case B2Branch::OutOfRange:
      break;
  }
  throw OutOfRange("tau_star_b2: K = " + std::to_string(k) +
                   " outside every branch window at omega_hat^2 = " +
                   std::to_string(omega_hat_sq));
}

/// Optimal time for the GHZ class, tau* = sqrt(2) pi / (4 |1+K|).
inline double tau_star_ghz(double omega_hat_sq, double k) {
  if (omega_hat_sq <= 1.5)
    throw OutOfRange("tau_star_ghz requires omega_hat^2 > 3/2");
  if (std::abs(1.0 + k) < 1e-12)
    throw DivergentTime("tau_star_ghz diverges as K -> -1");
  const Thresholds t = thresholds(omega_hat_sq);
  if (!(*t.k_ghz_minus < k && k < *t.k_ghz_plus))
    throw OutOfRange("tau_star_ghz: K = " + std::to_string(k) +
                     " outside (K-, K+) at omega_hat^2 = " +
                     std::to_string(omega_hat_sq));
  return std::numbers::pi * std::sqrt(2.0) / (4.0 * std::abs(1.0 + k));
}

enum class PlanBranch { B2Branch1, B2Branch2, GHZ };

inline const char* to_string(PlanBranch b) {
  switch (b) {
    case PlanBranch::B2Branch1: return "branch1";
    case PlanBranch::B2Branch2: return "branch2";
    case PlanBranch::GHZ: return "ghz";
  }
  return "?";
}

enum class Diagnostic { NegativeBzSquared, OutOfRangeK, DivergentTauStar };

inline const char* to_string(Diagnostic d) {
  switch (d) {
    case Diagnostic::NegativeBzSquared: return "NegativeBzSquared";
    case Diagnostic::OutOfRangeK: return "OutOfRange";
    case Diagnostic::DivergentTauStar: return "DivergentTime";
  }
  return "?";
}

/// An optimal-control plan: branch, optimal time, candidate field constants
/// (two Omega sign choices for B2 branch 1) and validity diagnostics. When
/// diagnostics is empty the emitted fields satisfy B0^2 + Bz^2 = omega_k^2.
struct OptimalPlan {
  PlanBranch branch = PlanBranch::B2Branch2;
  double tau_star = std::numeric_limits<double>::quiet_NaN();
  std::vector<FieldParams> fields;
  double b0 = std::numeric_limits<double>::quiet_NaN();
  double bz = std::numeric_limits<double>::quiet_NaN();
  std::vector<Diagnostic> diagnostics;

  bool valid() const { return diagnostics.empty(); }
};

/// Optimal field constants for the B2 class on the given branch.
/// Branch 2: B0 = omega_k, Bz = Omega = 0. Branch 1: the printed formulas,
/// both Omega sign choices emitted; a negative Bz^2 radicand is flagged as
/// NegativeBzSquared rather than clipped.
inline OptimalPlan optimal_fields_b2(double omega_hat_sq, double k, B2Branch branch) {
  OptimalPlan plan;
  if (branch == B2Branch::OutOfRange)
    throw OutOfRange("optimal_fields_b2 requires a valid branch");
  plan.tau_star = tau_star_b2(omega_hat_sq, k);
  if (branch == B2Branch::Branch2) {
    plan.branch = PlanBranch::B2Branch2;
    plan.b0 = std::sqrt(omega_k_sq({k, omega_hat_sq}));
    plan.bz = 0.0;
    plan.fields.push_back(FieldParams{0.0, 0.0, 0.0});
    return plan;
  }
  plan.branch = PlanBranch::B2Branch1;
  plan.b0 = 2.0 / std::sqrt(3.0) * std::abs(k - 1.0);
  const double rad =
      omega_hat_sq - 7.0 / 3.0 * k * k + 8.0 / 3.0 * k - 7.0 / 3.0;
  if (rad < 0.0) {
    plan.diagnostics.push_back(Diagnostic::NegativeBzSquared);
    return plan;
  }
  plan.bz = std::sqrt(rad);
  const double phi = std::atan2(plan.bz, plan.b0);
  plan.fields.push_back(FieldParams{phi, 2.0 * (k - 1.0 + plan.bz), 0.0});
  plan.fields.push_back(FieldParams{phi, 2.0 * (k - 1.0 - plan.bz), 0.0});
  return plan;
}

/// Optimal field constants for the GHZ class: B0 = |1+K|, Bz = sqrt(...),
/// Omega = 2 Bz (the pairing that makes beta_1 = -beta_4 = 1+K).
inline OptimalPlan optimal_fields_ghz(double omega_hat_sq, double k) {
  OptimalPlan plan;
  plan.branch = PlanBranch::GHZ;
  plan.b0 = std::abs(1.0 + k);
  if (std::abs(1.0 + k) < 1e-12) {
    plan.diagnostics.push_back(Diagnostic::DivergentTauStar);
    return plan;
  }
  plan.tau_star = std::numbers::pi * std::sqrt(2.0) / (4.0 * std::abs(1.0 + k));
  const double rad = omega_hat_sq - 2.0 * (k * k + k + 1.0);
  if (rad < 0.0) {
    plan.diagnostics.push_back(Diagnostic::NegativeBzSquared);
    return plan;
  }
  plan.bz = std::sqrt(rad);
  const double phi = std::atan2(plan.bz, plan.b0);
  plan.fields.push_back(FieldParams{phi, 2.0 * plan.bz, 0.0});
  return plan;
}

/// Plan for a class at (omega_hat^2, K); non-throwing, diagnostics instead
/// of errors. W shares the B2 plan (its tangles are the 4/9-scaled B2
/// tangles); S, B1 and B3 have identically zero tangles and no plan.
inline OptimalPlan optimal_plan(StateClass c, double omega_hat_sq, double k) {
  if (c == StateClass::GHZ) return optimal_fields_ghz(omega_hat_sq, k);
  if (c != StateClass::B2 && c != StateClass::W)
    throw OutOfRange(std::string("no optimal plan for zero-tangle class ") +
                     to_string(c));
  B2Branch branch = B2Branch::OutOfRange;
  try {
    branch = classify_b2(omega_hat_sq, k);
  } catch (const InvalidEnergy&) {
  }
  OptimalPlan plan;
  plan.branch = PlanBranch::B2Branch1;
  if (branch == B2Branch::OutOfRange) {
    plan.diagnostics.push_back(Diagnostic::OutOfRangeK);
    return plan;
  }
  try {
    return optimal_fields_b2(omega_hat_sq, k, branch);
  } catch (const DivergentTime&) {
    plan.diagnostics.push_back(Diagnostic::DivergentTauStar);
    return plan;
  }
}

}  // namespace qbt
