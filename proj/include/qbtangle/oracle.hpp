// Independent numerical ground truth for the analytic formulas:
//   - time-ordered integration of the Schroedinger equation (exact 8x8
//     exponential of the midpoint Hamiltonian, Richardson extrapolated),
//   - deterministic global search for the maximum of tau_13 over the control
//     constants and the earliest time at which it is attained,
//   - finite-difference stationarity diagnostics,
//   - a structured verification report comparing every analytic result
//     against its numerical counterpart.
//
// The integrator never touches the mode functions of the propagator module;
// it assembles H(tau) element-wise from the Pauli tensor structure and
// exponentiates it independently.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "qbtangle/optimal.hpp"
#include "qbtangle/tangle.hpp"

namespace qbt {

// ---------------------------------------------------------------------------
// Schroedinger integration
// ---------------------------------------------------------------------------

struct IntegratorConfig {
  double step = 1e-4;  // rescaled-time step; must satisfy step <= 0.01/omega_hat
};

namespace detail {

// Element-wise assembly of H(tau): diagonal Ising + middle-qubit field.
// Independent of hamiltonian_at on purpose.
inline Matrix8cd oracle_hamiltonian(const ChainParams& p, const FieldParams& f,
                                    double tau) {
  const double wk = std::sqrt(omega_k_sq(p));
  const double b0 = wk * std::cos(f.phi);
  const double bz = wk * std::sin(f.phi);
  const double theta = f.omega_big * tau + f.theta0;
  const double bx = b0 * std::cos(theta);
  const double by = b0 * std::sin(theta);

  Matrix8cd h = Matrix8cd::Zero();
  for (int idx = 0; idx < 8; ++idx) {
    const double z1 = ((idx >> 2) & 1) ? -1.0 : 1.0;
    const double z2 = ((idx >> 1) & 1) ? -1.0 : 1.0;
    const double z3 = (idx & 1) ? -1.0 : 1.0;
    h(idx, idx) = z1 * z2 + p.k_ratio * z2 * z3 + bz * z2;
    // sigma_x and sigma_y on the middle qubit flip index bit 1
    const int flipped = idx ^ 2;
    h(flipped, idx) = cplx(bx, ((idx >> 1) & 1) ? -by : by);
  }
  return h;
}

// exp(-i * h * dt) for Hermitian h via spectral decomposition.
inline Matrix8cd hermitian_propagator(const Matrix8cd& h, double dt) {
  const Eigen::SelfAdjointEigenSolver<Matrix8cd> es(h);
  Vector8cd phases;
  for (int i = 0; i < 8; ++i) phases(i) = std::polar(1.0, -es.eigenvalues()(i) * dt);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Midpoint-rule time-ordered product with n uniform steps; global error O(h^2).
inline Matrix8cd integrate_midpoint(const ChainParams& p, const FieldParams& f,
                                    double tau, long n) {
  const double h = tau / static_cast<double>(n);
  Matrix8cd u = Matrix8cd::Identity();
  for (long j = 0; j < n; ++j) {
    const double t_mid = (static_cast<double>(j) + 0.5) * h;
    u = hermitian_propagator(oracle_hamiltonian(p, f, t_mid), h) * u;
  }
  return u;
}

}  // namespace detail

struct IntegrationResult {
  Unitary8 u;
  double error_estimate = 0.0;  // from step halving
};

/// U(tau) by time-ordered integration; midpoint steps at cfg.step and
/// cfg.step/2 combined by Richardson extrapolation to O(step^4). The error
/// estimate is the max-norm step-halving residual.
inline IntegrationResult integrate_u_with_error(const ChainParams& p,
                                                const FieldParams& f, double tau,
                                                IntegratorConfig cfg = {}) {
  if (!(cfg.step > 0.0))
    throw StepTooLarge("integrator step must be positive");
  const double bound = 0.01 / std::sqrt(p.omega_hat_sq);
  if (cfg.step > bound)
    throw StepTooLarge("step " + std::to_string(cfg.step) +
                       " exceeds stability bound 0.01/omega_hat = " +
                       std::to_string(bound));
  if (tau == 0.0) return {Matrix8cd::Identity(), 0.0};
  const long n = std::max<long>(1, static_cast<long>(std::ceil(tau / cfg.step)));
  const Matrix8cd coarse = detail::integrate_midpoint(p, f, tau, n);
  const Matrix8cd fine = detail::integrate_midpoint(p, f, tau, 2 * n);
  const Matrix8cd diff = fine - coarse;
  return {fine + diff / 3.0, max_abs(diff) / 3.0};
}

inline Unitary8 integrate_u(const ChainParams& p, const FieldParams& f, double tau,
                            IntegratorConfig cfg = {}) {
  return integrate_u_with_error(p, f, tau, cfg).u;
}

// ---------------------------------------------------------------------------
// Deterministic search for the tangle maximum and its first attainment
// ---------------------------------------------------------------------------

struct SearchBounds {
  double tau_max = 0.0;
  double omega_max = 0.0;  // Omega in [-omega_max, omega_max]
  int n_tau = 64;
  int n_phi = 32;
  int n_omega = 64;
};

enum class TanglePath { Closed, DefinitionChain };

struct SearchResult {
  double tau_best = 0.0;
  double phi_best = 0.0;
  double omega_big_best = 0.0;
  double value_best = 0.0;
  long evaluations = 0;
  bool flat = false;  // tau profile constant at the optimum fields
};

namespace detail {

struct Tau13Objective {
  StateClass cls;
  ChainParams params;
  TanglePath path;
  double total;  // conserved tau13 + tau123 of the class
  mutable long evals = 0;

  double operator()(double tau, double phi, double obig) const {
    ++evals;
    const FieldParams f{phi, obig, 0.0};
    if (path == TanglePath::Closed) return tau13_closed(cls, params, f, tau);
    return two_tangle_13(evolve_class(cls, params, f, tau));
  }

  // Complementary 3-tangle, total - tau13 by the conservation law. Computed
  // in product form, so it resolves distances from the maximum far below the
  // 1e-16 granularity of (1 - tau13); all fine refinement runs on it.
  double comp(double tau, double phi, double obig) const {
    ++evals;
    const FieldParams f{phi, obig, 0.0};
    if (path == TanglePath::Closed) return tau123_closed(cls, params, f, tau);
    return three_tangle(evolve_class(cls, params, f, tau));
  }
};

// Golden-section maximization on [lo, hi]; returns argmax, value via out.
template <class F>
double golden_max(const F& f, double lo, double hi, double tol, double& fbest) {
  constexpr double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  if (f1 >= f2) {
    fbest = f1;
    return x1;
  }
  fbest = f2;
  return x2;
}

struct SearchPoint {
  double tau = 0.0;
  double phi = 0.0;
  double obig = 0.0;
};

// Cyclic coordinate ascent with per-coordinate golden sections. move_mask
// selects which of (tau, phi, obig) may move. Deterministic.
inline SearchPoint coordinate_ascent(const Tau13Objective& obj, SearchPoint x,
                                     std::array<double, 3> span,
                                     const SearchBounds& b,
                                     std::array<bool, 3> move_mask,
                                     double& value) {
  const double tau_floor = 1e-9;
  value = obj(x.tau, x.phi, x.obig);
  for (int sweep = 0; sweep < 200; ++sweep) {
    double largest_span = 0.0;
    for (int c = 0; c < 3; ++c) {
      const std::size_t ci = static_cast<std::size_t>(c);
      if (!move_mask[ci]) continue;
      largest_span = std::max(largest_span, span[ci]);
      double lo = 0.0, hi = 0.0;
      if (c == 0) {
        lo = std::max(tau_floor, x.tau - span[0]);
        hi = std::min(b.tau_max, x.tau + span[0]);
      } else if (c == 1) {
        lo = x.phi - span[1];
        hi = x.phi + span[1];
      } else {
        lo = std::max(-b.omega_max, x.obig - span[2]);
        hi = std::min(b.omega_max, x.obig + span[2]);
      }
      if (hi <= lo) continue;
      const auto line = [&](double v) {
        if (c == 0) return obj(v, x.phi, x.obig);
        if (c == 1) return obj(x.tau, v, x.obig);
        return obj(x.tau, x.phi, v);
      };
      double fb = 0.0;
      const double xb = golden_max(line, lo, hi, 1e-11, fb);
      double moved = 0.0;
      if (fb >= value) {
        if (c == 0) moved = std::abs(xb - x.tau), x.tau = xb;
        else if (c == 1) moved = std::abs(xb - x.phi), x.phi = xb;
        else moved = std::abs(xb - x.obig), x.obig = xb;
        value = fb;
      }
      // shrink when converged inside the bracket, hold otherwise
      if (moved < 0.25 * span[ci]) span[ci] *= 0.5;
    }
    if (largest_span < 1e-9) break;
  }
  return x;
}

// Golden-section minimization of the complement along tau on [lo, hi].
inline double golden_min_comp(const Tau13Objective& obj, double phi, double obig,
                              double lo, double hi, double tol, double& qbest) {
  const double t = golden_max(
      [&](double tau) { return -obj.comp(tau, phi, obig); }, lo, hi, tol, qbest);
  qbest = -qbest;
  return t;
}

struct AttainResult {
  enum class Kind { NoDeparture, Flat, NotAttained, Attained } kind = Kind::NotAttained;
  double tau = std::numeric_limits<double>::infinity();
  double value = 0.0;
  double phi = 0.0;
  double obig = 0.0;
};

// One slice of the attainment search. The coordinate named by `axis` stays
// fixed (0: phi, 1: Omega); the other is tuned onto the attainment set by
// minimizing the complement's valley depth; the earliest qualifying valley
// along tau is returned. Classes whose initial tangle already sits at the
// class maximum must genuinely depart from it (complement >= 1e-3) before a
// return counts; configurations that never depart are trivial and report
// NoDeparture.
inline AttainResult eval_slice(const Tau13Objective& obj, int axis, double phi0,
                               double obig0, double tau_guess,
                               const SearchBounds& bounds, bool starts_at_max) {
  AttainResult out;
  out.phi = phi0;
  out.obig = obig0;
  const double attain_tol = 1e-18;

  double free = (axis == 0) ? obig0 : phi0;
  const auto clamp_free = [&](double v) {
    return (axis == 0) ? std::clamp(v, -bounds.omega_max, bounds.omega_max) : v;
  };
  const auto comp_at = [&](double tau, double f) {
    return (axis == 0) ? obj.comp(tau, phi0, f) : obj.comp(tau, f, obig0);
  };
  const auto valley = [&](double f, double lo, double hi, double& q) {
    const double t = golden_max(
        [&](double tau) { return -comp_at(tau, f); }, lo, hi, 1e-12, q);
    q = -q;
    return t;
  };

  // triage on the incoming complement line
  constexpr int kPre = 128;
  std::array<double, kPre + 1> line{};
  double qmin = std::numeric_limits<double>::infinity(), qmax = -qmin;
  int m_min = 1;
  for (int m = 0; m <= kPre; ++m) {
    const double tau = std::max(1e-12, bounds.tau_max * m / kPre);
    line[static_cast<std::size_t>(m)] = comp_at(tau, free);
    if (m >= 1 && line[static_cast<std::size_t>(m)] < qmin) {
      qmin = line[static_cast<std::size_t>(m)];
      m_min = m;
    }
    qmax = std::max(qmax, line[static_cast<std::size_t>(m)]);
  }
  if (qmax - qmin < 1e-13 && qmin < attain_tol) {
    out.kind = AttainResult::Kind::Flat;
    out.tau = bounds.tau_max / kPre;
    out.value = obj.total - qmin;
    return out;
  }
  double tau_c = bounds.tau_max * m_min / kPre;
  if (starts_at_max) {
    if (qmax < 1e-5) {
      out.kind = AttainResult::Kind::NoDeparture;
      out.value = obj.total - qmin;
      return out;
    }
    // first complement valley after the departure
    int m_dep = -1;
    for (int m = 1; m <= kPre; ++m)
      if (line[static_cast<std::size_t>(m)] >= 1e-3) {
        m_dep = m;
        break;
      }
    if (m_dep < 0) {
      out.kind = AttainResult::Kind::NoDeparture;
      out.value = obj.total - qmin;
      return out;
    }
    tau_c = bounds.tau_max;  // valley may sit at the right edge
    for (int m = m_dep + 1; m < kPre; ++m) {
      const std::size_t mi = static_cast<std::size_t>(m);
      if (line[mi] <= line[mi - 1] && line[mi] <= line[mi + 1]) {
        tau_c = bounds.tau_max * m / kPre;
        break;
      }
    }
  }

  // Pin the free coordinate by minimizing the valley depth: parabola-vertex
  // steps with adaptive shrink. Depth continues until the gate is reached or
  // the depth stalls above it (a genuine near-miss); shrinking adapts to the
  // local curvature, which ranges over many orders between slicing axes.
  // Vertex extrapolations are committed only when they measurably improve,
  // so an already-attained point is never abandoned.
  const double pre_spacing = bounds.tau_max / kPre;
  double q_seen = std::numeric_limits<double>::infinity();
  for (double span = 0.3; span >= 1e-10; span *= 0.2) {
    if (span < 2.5e-3 && q_seen > 1e-2) break;  // cannot reach zero from here
    if (q_seen <= attain_tol) break;
    const double q_level_start = q_seen;
    const int max_iter = span >= 0.01 ? 6 : 3;
    for (int iter = 0; iter < max_iter; ++iter) {
      std::array<double, 5> qs{};
      std::array<double, 5> fs{};
      std::array<double, 5> taus{};
      double qb = std::numeric_limits<double>::infinity();
      int jb = 2;
      const double window = 2.0 * pre_spacing + 1.2 * span;
      for (int j = 0; j < 5; ++j) {
        const double f = clamp_free(free + span * (j - 2));
        double q = 0.0;
        const double t = valley(f, std::max(1e-9, tau_c - window),
                                std::min(bounds.tau_max, tau_c + window), q);
        fs[static_cast<std::size_t>(j)] = f;
        qs[static_cast<std::size_t>(j)] = q;
        taus[static_cast<std::size_t>(j)] = t;
        if (q < qb) {
          qb = q;
          jb = j;
        }
      }
      double best_f = fs[static_cast<std::size_t>(jb)];
      double best_tau = taus[static_cast<std::size_t>(jb)];
      if (qb > attain_tol && jb > 0 && jb < 4) {
        const double d1 = qs[static_cast<std::size_t>(jb + 1)] -
                          qs[static_cast<std::size_t>(jb - 1)];
        const double d2 = qs[static_cast<std::size_t>(jb + 1)] -
                          2.0 * qs[static_cast<std::size_t>(jb)] +
                          qs[static_cast<std::size_t>(jb - 1)];
        if (d2 > 1e-300) {
          const double shift = -0.5 * d1 / d2;
          if (std::abs(shift) <= 2.0 && shift != 0.0) {
            const double f_vertex = clamp_free(free + span * (jb - 2 + shift));
            double qv = 0.0;
            const double tv = valley(f_vertex, std::max(1e-9, tau_c - window),
                                     std::min(bounds.tau_max, tau_c + window), qv);
            if (qv < qb) {
              qb = qv;
              best_f = f_vertex;
              best_tau = tv;
            }
          }
        }
      }
      tau_c = best_tau;
      q_seen = std::min(q_seen, qb);
      const double moved = std::abs(best_f - free);
      free = best_f;
      if (qb <= attain_tol) break;
      if (moved < 0.2 * span) break;
    }
    if (q_seen <= attain_tol) break;
    // stalled above the gate once the travel is local: a genuine near-miss
    if (span <= 1e-4 && q_seen > 0.25 * q_level_start) break;
  }
  if (axis == 0)
    out.obig = free;
  else
    out.phi = free;

  double q_pin = 0.0;
  valley(free, std::max(1e-9, tau_c - 2.0 * pre_spacing),
         std::min(bounds.tau_max, tau_c + 2.0 * pre_spacing), q_pin);
  if (q_pin > attain_tol) {
    out.kind = AttainResult::Kind::NotAttained;
    out.value = obj.total - q_pin;
    return out;
  }

  // earliest qualifying valley along tau at the pinned fields
  constexpr int kScan = 2048;
  std::vector<double> q(kScan + 1);
  for (int m = 0; m <= kScan; ++m)
    q[static_cast<std::size_t>(m)] =
        comp_at(std::max(1e-12, bounds.tau_max * m / kScan), free);
  int start = 1;
  if (starts_at_max) {
    start = -1;
    for (int m = 1; m <= kScan; ++m)
      if (q[static_cast<std::size_t>(m)] >= 1e-3) {
        start = m + 1;
        break;
      }
    if (start < 0) {
      out.kind = AttainResult::Kind::NoDeparture;
      out.value = obj.total - q_pin;
      return out;
    }
  }
  const double spacing = bounds.tau_max / kScan;
  for (int m = start; m <= kScan; ++m) {
    const std::size_t mi = static_cast<std::size_t>(m);
    const bool local_min =
        q[mi] <= q[mi - 1] && (m == kScan || q[mi] <= q[mi + 1]);
    if (!local_min || q[mi] > 1e-3) continue;
    double qv = 0.0;
    const double lo = std::max(1e-9, bounds.tau_max * m / kScan - spacing);
    const double hi = std::min(bounds.tau_max, bounds.tau_max * m / kScan + spacing);
    double tv = valley(free, lo, hi, qv);
    if (qv <= attain_tol) {
      // The valley can sit on a flat numerical floor whose width hides the
      // true minimum; report the midpoint of the floor-level region instead
      // of whatever point the section search stopped on.
      const double level = qv * 16.0 + 1e-300;
      const auto edge = [&](double dir) {
        double in = tv, outp = tv + dir * spacing;
        if (comp_at(std::clamp(outp, 1e-12, bounds.tau_max), free) <= level)
          return outp;  // floor wider than the bracket; keep the bracket edge
        for (int it = 0; it < 60 && std::abs(outp - in) > 1e-14; ++it) {
          const double mid = 0.5 * (in + outp);
          if (comp_at(std::clamp(mid, 1e-12, bounds.tau_max), free) <= level)
            in = mid;
          else
            outp = mid;
        }
        return in;
      };
      const double left = edge(-1.0), right = edge(1.0);
      const double mid = 0.5 * (left + right);
      const double qm = comp_at(std::clamp(mid, 1e-12, bounds.tau_max), free);
      if (qm <= attain_tol) {
        tv = mid;
        qv = qm;
      }
      out.kind = AttainResult::Kind::Attained;
      out.tau = tv;
      out.value = obj.total - qv;
      return out;
    }
  }
  out.kind = AttainResult::Kind::NotAttained;
  out.value = obj.total - q_pin;
  return out;
}

// Minimize the first-attainment time along the attainment curve, stepping the
// axis coordinate and re-pinning the other in each slice: ladder walk, then
// parabola refinement for interior minima, then boundary bisection for
// attainability endpoints (the optimum may sit exactly where the curve ends).
struct WalkOutcome {
  double tau = std::numeric_limits<double>::infinity();
  double phi = 0.0;
  double obig = 0.0;
  double value = 0.0;
};

inline WalkOutcome walk_slices(const Tau13Objective& obj, int axis,
                               const AttainResult& start,
                               const SearchBounds& bounds, bool starts_at_max,
                               double axis_step) {
  double phi_cur = start.phi, obig_cur = start.obig;
  double t_cur = start.tau, v_cur = start.value;

  const auto probe = [&](double coord) {
    const double phi_t = (axis == 0) ? coord : phi_cur;
    const double obig_t = (axis == 1) ? coord : obig_cur;
    if (axis == 1 && std::abs(obig_t) > bounds.omega_max) {
      AttainResult r;
      r.kind = AttainResult::Kind::NotAttained;
      return r;
    }
    return eval_slice(obj, axis, phi_t, obig_t, t_cur, bounds, starts_at_max);
  };
  const auto accept = [&](const AttainResult& r) {
    phi_cur = r.phi;
    obig_cur = r.obig;
    t_cur = r.tau;
    v_cur = r.value;
  };
  const auto coord = [&]() { return (axis == 0) ? phi_cur : obig_cur; };

  double delta_last = axis_step;
  for (double delta = axis_step; delta >= 1e-3; delta *= 0.5) {
    delta_last = delta;
    bool improved = true;
    for (int moves = 0; improved && moves < 48; ++moves) {
      improved = false;
      for (int dir : {1, -1}) {
        const AttainResult aq = probe(coord() + dir * delta);
        if (aq.kind == AttainResult::Kind::Attained && aq.tau < t_cur - 1e-12) {
          accept(aq);
          improved = true;
          break;
        }
      }
    }
  }

  // parabola refinement for interior minima of the attainment time
  for (const double span : {delta_last, 0.1 * delta_last}) {
    std::array<double, 5> ts{};
    std::array<AttainResult, 5> rs{};
    double tb = std::numeric_limits<double>::infinity();
    int jb = 2;
    const double center = coord();
    for (int j = 0; j < 5; ++j) {
      rs[static_cast<std::size_t>(j)] = probe(center + span * (j - 2));
      ts[static_cast<std::size_t>(j)] =
          (rs[static_cast<std::size_t>(j)].kind == AttainResult::Kind::Attained)
              ? rs[static_cast<std::size_t>(j)].tau
              : std::numeric_limits<double>::infinity();
      if (ts[static_cast<std::size_t>(j)] < tb) {
        tb = ts[static_cast<std::size_t>(j)];
        jb = j;
      }
    }
    if (!std::isfinite(tb)) break;
    if (tb < t_cur) accept(rs[static_cast<std::size_t>(jb)]);
    if (jb > 0 && jb < 4 && std::isfinite(ts[static_cast<std::size_t>(jb - 1)]) &&
        std::isfinite(ts[static_cast<std::size_t>(jb + 1)])) {
      const double d1 = ts[static_cast<std::size_t>(jb + 1)] -
                        ts[static_cast<std::size_t>(jb - 1)];
      const double d2 = ts[static_cast<std::size_t>(jb + 1)] -
                        2.0 * ts[static_cast<std::size_t>(jb)] +
                        ts[static_cast<std::size_t>(jb - 1)];
      if (d2 > 1e-300) {
        const double shift = -0.5 * d1 / d2;
        if (std::abs(shift) <= 1.5 && shift != 0.0) {
          const AttainResult af = probe(center + span * (jb - 2 + shift));
          if (af.kind == AttainResult::Kind::Attained && af.tau < t_cur) accept(af);
        }
      }
    }
  }

  // golden refinement handles kink minima (two curve branches meeting with
  // different slopes), where the parabola step cannot converge
  {
    double a = coord() - 2.0 * delta_last, b2 = coord() + 2.0 * delta_last;
    constexpr double gr = 0.6180339887498949;
    AttainResult best_r;
    const auto t_of = [&](const AttainResult& r) {
      return r.kind == AttainResult::Kind::Attained
                 ? r.tau
                 : std::numeric_limits<double>::infinity();
    };
    double x1 = b2 - gr * (b2 - a), x2 = a + gr * (b2 - a);
    AttainResult r1 = probe(x1), r2 = probe(x2);
    for (int it = 0; it < 48 && b2 - a > 1e-10; ++it) {
      if (t_of(r1) <= t_of(r2) && t_of(r1) < t_of(best_r)) best_r = r1;
      if (t_of(r2) < t_of(r1) && t_of(r2) < t_of(best_r)) best_r = r2;
      if (t_of(r1) > t_of(r2)) {
        a = x1;
        x1 = x2;
        r1 = r2;
        x2 = a + gr * (b2 - a);
        r2 = probe(x2);
      } else {
        b2 = x2;
        x2 = x1;
        r2 = r1;
        x1 = b2 - gr * (b2 - a);
        r1 = probe(x1);
      }
    }
    if (t_of(best_r) < t_cur) accept(best_r);
  }

  // boundary bisection toward a one-sided attainability edge
  for (const int dir : {1, -1}) {
    const double step = 2e-3;
    const AttainResult first = probe(coord() + dir * step);
    if (first.kind == AttainResult::Kind::Attained) continue;
    double lo = 0.0, hi = step;
    const double base = coord();
    for (int it = 0; it < 40 && hi - lo > 1e-11; ++it) {
      const double mid = 0.5 * (lo + hi);
      const AttainResult am = probe(base + dir * mid);
      if (am.kind == AttainResult::Kind::Attained) {
        lo = mid;
        if (am.tau < t_cur) accept(am);
      } else {
        hi = mid;
      }
    }
  }

  // final re-evaluation at the settled coordinate
  const AttainResult fin = probe(coord());
  if (fin.kind == AttainResult::Kind::Attained && fin.tau <= t_cur + 1e-9)
    accept(fin);

  WalkOutcome out;
  out.tau = t_cur;
  out.phi = phi_cur;
  out.obig = obig_cur;
  out.value = v_cur;
  return out;
}

}  // namespace detail

/// Deterministic global search: coarse grid over (tau, phi, Omega), coordinate
/// ascent to the maximum value, then minimization of the earliest time at
/// which that value is attained over the field constants. No randomness, so
/// identical inputs give identical results.
inline SearchResult maximize_tau13(StateClass c, double omega_hat_sq, double k,
                                   const SearchBounds& bounds,
                                   TanglePath path = TanglePath::Closed) {
  if (!(bounds.tau_max > 0.0) || bounds.omega_max < 0.0 || bounds.n_tau < 2 ||
      bounds.n_phi < 2 || bounds.n_omega < 2)
    throw EmptyBounds("maximize_tau13: degenerate search bounds");
  const ChainParams params{k, omega_hat_sq};
  omega_k_sq(params);  // validate energy up front

  const detail::Tau13Objective obj{c, params, path, class_tangle_total(c)};
  const double two_pi = 2.0 * std::numbers::pi;

  struct Cell {
    double value = -1.0;
    double tau = 0.0;
    double phi = 0.0;
    double obig = 0.0;
  };
  std::vector<Cell> cells(
      static_cast<std::size_t>(bounds.n_phi) * static_cast<std::size_t>(bounds.n_omega));

  Cell global;
  for (int j = 0; j < bounds.n_phi; ++j) {
    const double phi = two_pi * j / bounds.n_phi;
    for (int l = 0; l < bounds.n_omega; ++l) {
      const double obig =
          -bounds.omega_max + 2.0 * bounds.omega_max * l / bounds.n_omega;
      Cell& cell = cells[static_cast<std::size_t>(j * bounds.n_omega + l)];
      cell.phi = phi;
      cell.obig = obig;
      for (int m = 1; m <= bounds.n_tau; ++m) {
        const double tau = bounds.tau_max * m / bounds.n_tau;
        const double v = obj(tau, phi, obig);
        if (v > cell.value) {
          cell.value = v;
          cell.tau = tau;
        }
      }
      if (cell.value > global.value) global = cell;
    }
  }

  const std::array<double, 3> grid_span = {
      bounds.tau_max / bounds.n_tau, two_pi / bounds.n_phi,
      bounds.omega_max > 0.0 ? 2.0 * bounds.omega_max / bounds.n_omega : 0.1};

  // Refine the best grid point in all three coordinates to get the value.
  double vstar = 0.0;
  detail::SearchPoint top = detail::coordinate_ascent(
      obj, {global.tau, global.phi, global.obig}, grid_span, bounds,
      {true, true, true}, vstar);

  // Classes that start at the class maximum need the departure rule.
  const bool starts_at_max =
      obj(1e-12, top.phi, top.obig) >= vstar - 1e-6;

  // Candidate basins: cells near the maximum value, best first.
  std::vector<std::size_t> order(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b2) {
    if (cells[a].value != cells[b2].value) return cells[a].value > cells[b2].value;
    return a < b2;
  });

  SearchResult best;
  best.flat = false;
  best.tau_best = top.tau;
  best.phi_best = top.phi;
  best.omega_big_best = top.obig;
  best.value_best = vstar;
  double best_t = std::numeric_limits<double>::infinity();
  double flat_t = std::numeric_limits<double>::infinity();

  const auto consider = [&](double t, double phi, double obig, double value) {
    if (t < best_t - 1e-12) {
      best_t = t;
      best.tau_best = t;
      best.phi_best = std::remainder(phi, two_pi);
      if (best.phi_best < 0.0) best.phi_best += two_pi;
      best.omega_big_best = obig;
      best.value_best = value;
      best.flat = false;
    }
  };

  // Slice every near-maximal cell along both axes: where the attainment curve
  // runs nearly parallel to one field coordinate, the other parametrization
  // sees an ordinary interior minimum. Every attained slice time is a valid
  // answer and a lower bound does not exist below the true optimum, so the
  // walks are seeded in ascending slice-time order.
  struct Seed {
    double t = 0.0;
    int axis = 0;
    detail::AttainResult ar;
  };
  std::vector<Seed> seeds;
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const Cell& cell = cells[order[oi]];
    if (cell.value < vstar - 0.15) break;
    for (int axis = 0; axis < 2; ++axis) {
      const detail::AttainResult ar = detail::eval_slice(
          obj, axis, cell.phi, cell.obig, cell.tau, bounds, starts_at_max);
      if (ar.kind == detail::AttainResult::Kind::Flat) {
        flat_t = std::min(flat_t, ar.tau);
        continue;
      }
      if (ar.kind != detail::AttainResult::Kind::Attained) continue;
      consider(ar.tau, ar.phi, ar.obig, ar.value);
      seeds.push_back({ar.tau, axis, ar});
    }
  }
  std::stable_sort(seeds.begin(), seeds.end(),
                   [](const Seed& a, const Seed& b2) { return a.t < b2.t; });
  int walks = 0;
  for (const Seed& seed : seeds) {
    if (walks >= 24) break;
    if (walks >= 4 && seed.t >= best_t + 0.1) break;  // sorted: nothing better left
    ++walks;
    const detail::WalkOutcome w = detail::walk_slices(
        obj, seed.axis, seed.ar, bounds, starts_at_max,
        grid_span[static_cast<std::size_t>(1 + seed.axis)]);
    consider(w.tau, w.phi, w.obig, w.value);
  }

  if (!std::isfinite(best_t) && std::isfinite(flat_t)) {
    // constant-at-maximum trajectory: no localized first attainment
    best.flat = true;
    best.tau_best = flat_t;
    best.value_best = vstar;
  }

  best.evaluations = obj.evals;
  return best;
}

// ---------------------------------------------------------------------------
// Stationarity diagnostics
// ---------------------------------------------------------------------------

/// Central-difference gradient of tau13 w.r.t. (tau, phi, Omega), step 1e-4.
inline Eigen::Vector3d gradient_at(StateClass c, const ChainParams& p,
                                   const FieldParams& f, double tau) {
  const double h = 1e-4;
  const auto g = [&](double dt, double dphi, double dob) {
    const FieldParams ff{f.phi + dphi, f.omega_big + dob, f.theta0};
    return tau13_closed(c, p, ff, tau + dt);
  };
  Eigen::Vector3d grad;
  grad(0) = (g(h, 0, 0) - g(-h, 0, 0)) / (2 * h);
  grad(1) = (g(0, h, 0) - g(0, -h, 0)) / (2 * h);
  grad(2) = (g(0, 0, h) - g(0, 0, -h)) / (2 * h);
  return grad;
}

/// Central-difference Hessian of tau13 w.r.t. (tau, phi, Omega), steps 1e-4.
inline Eigen::Matrix3d hessian_at(StateClass c, const ChainParams& p,
                                  const FieldParams& f, double tau) {
  const double h = 1e-4;
  const auto g = [&](double dt, double dphi, double dob) {
    const FieldParams ff{f.phi + dphi, f.omega_big + dob, f.theta0};
    return tau13_closed(c, p, ff, tau + dt);
  };
  const double g0 = g(0, 0, 0);
  Eigen::Matrix3d hess;
  const auto displaced = [&](int c1, double s1, int c2, double s2) {
    double d[3] = {0, 0, 0};
    d[c1] += s1;
    d[c2] += s2;
    return g(d[0], d[1], d[2]);
  };
  for (int i = 0; i < 3; ++i) {
    hess(i, i) =
        (displaced(i, h, i, 0) - 2 * g0 + displaced(i, -h, i, 0)) / (h * h);
    for (int j = i + 1; j < 3; ++j) {
      const double v = (displaced(i, h, j, h) - displaced(i, h, j, -h) -
                        displaced(i, -h, j, h) + displaced(i, -h, j, -h)) /
                       (4 * h * h);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

// ---------------------------------------------------------------------------
// Verification report
// ---------------------------------------------------------------------------

struct VerifyTolerances {
  double propagator = 1e-8;
  double tangle = 1e-10;
};

struct Scenario {
  std::string name;
  StateClass cls = StateClass::B2;
  double omega_hat_sq = 6.0;
  double k_ratio = 1.0;
  // Set for configurations where the printed optimal-field formulas are
  // known to conflict with the energy constraint; failing comparisons are
  // then reported as known discrepancies instead of errors.
  bool known_formula_conflict = false;
};

enum class CheckStatus { Pass, Fail, KnownDiscrepancy, Skipped };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::KnownDiscrepancy: return "KNOWN_DISCREPANCY";
    case CheckStatus::Skipped: return "SKIPPED";
  }
  return "?";
}

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ScenarioReport {
  Scenario scenario;
  std::vector<CheckResult> checks;
};

struct VerificationReport {
  std::vector<ScenarioReport> scenarios;
  std::vector<CheckResult> notes;

  bool all_pass() const {
    for (const auto& sr : scenarios)
      for (const auto& c : sr.checks)
        if (c.status == CheckStatus::Fail) return false;
    for (const auto& c : notes)
      if (c.status == CheckStatus::Fail) return false;
    return true;
  }
};

/// The four figure configurations plus the branch-1 conflict case.
inline std::vector<Scenario> default_scenarios() {
  return {
      {"b2_w6_k1", StateClass::B2, 6.0, 1.0, false},
      {"b2_w6_k159", StateClass::B2, 6.0, 1.59, false},
      {"ghz_w14_k1", StateClass::GHZ, 14.0, 1.0, false},
      {"ghz_w14_k159", StateClass::GHZ, 14.0, 1.59, false},
      {"b2_w6_k2_branch1", StateClass::B2, 6.0, 2.0, true},
  };
}

namespace detail {

inline std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline CheckResult bounded_check(const std::string& name, double measured,
                                 double tol, bool known_discrepancy = false,
                                 std::string detail = {}) {
  CheckResult c{name, CheckStatus::Pass, measured, tol, std::move(detail)};
  if (!(measured <= tol))
    c.status = known_discrepancy ? CheckStatus::KnownDiscrepancy : CheckStatus::Fail;
  return c;
}

}  // namespace detail

/// Run every analytic-vs-numeric comparison for the given scenarios.
inline VerificationReport verify_report(const std::vector<Scenario>& scenarios,
                                        VerifyTolerances tol = {}) {
  VerificationReport report;
  for (const Scenario& sc : scenarios) {
    ScenarioReport sr;
    sr.scenario = sc;
    const ChainParams params{sc.k_ratio, sc.omega_hat_sq};
    const double wk2 = omega_k_sq(params);

    OptimalPlan plan = optimal_plan(sc.cls, sc.omega_hat_sq, sc.k_ratio);
    const bool plan_ok = plan.valid();
    {
      CheckResult c{"plan_valid",
                    plan_ok ? CheckStatus::Pass
                            : (sc.known_formula_conflict ? CheckStatus::KnownDiscrepancy
                                                          : CheckStatus::Fail),
                    plan_ok ? 0.0 : 1.0, 0.0, ""};
      if (!plan_ok) {
        c.detail = "diagnostics:";
        for (Diagnostic d : plan.diagnostics) c.detail += std::string(" ") + to_string(d);
        if (plan.branch == PlanBranch::B2Branch1) {
          const double rad = sc.omega_hat_sq - 7.0 / 3.0 * sc.k_ratio * sc.k_ratio +
                             8.0 / 3.0 * sc.k_ratio - 7.0 / 3.0;
          c.detail += " bz_sq_radicand=" + detail::format_g(rad);
        }
      } else {
        c.detail = std::string("branch=") + to_string(plan.branch) +
                   " tau_star=" + detail::format_g(plan.tau_star);
      }
      sr.checks.push_back(c);
    }

    const FieldParams field = plan_ok ? plan.fields.front() : FieldParams{0.0, 0.0, 0.0};
    const double tau_ref = plan_ok ? plan.tau_star : 1.5;

    if (plan_ok) {
      sr.checks.push_back(detail::bounded_check(
          "plan_energy_identity",
          std::abs(plan.b0 * plan.b0 + plan.bz * plan.bz - wk2), 1e-12));
    }

    // unitarity of the analytic operator and the hamiltonian energy contract
    double worst_unitarity = 0.0, worst_energy = 0.0;
    for (int i = 0; i <= 32; ++i) {
      const double tau = 2.0 * tau_ref * i / 32.0;
      const Unitary8 u = u_opt(params, field, tau);
      worst_unitarity = std::max(
          worst_unitarity, max_abs(u.adjoint() * u - Matrix8cd::Identity()));
      const Matrix8cd h = hamiltonian_at(params, field, tau);
      worst_energy = std::max(
          worst_energy, std::abs(h.squaredNorm() - 8.0 * sc.omega_hat_sq));
    }
    sr.checks.push_back(detail::bounded_check("unitarity", worst_unitarity, 1e-12));
    sr.checks.push_back(detail::bounded_check("hamiltonian_energy", worst_energy, 1e-12));

    // analytic propagator against time-ordered integration
    double worst_prop = 0.0;
    for (const double frac : {0.5, 1.0}) {
      const double tau = tau_ref * frac;
      const Unitary8 numeric = integrate_u(params, field, tau);
      worst_prop = std::max(worst_prop, max_abs(numeric - u_opt(params, field, tau)));
    }
    sr.checks.push_back(
        detail::bounded_check("propagator_agreement", worst_prop, tol.propagator));

    // closed-form tangles against the full definition chain
    double worst13 = 0.0, worst123 = 0.0, worst_sum = 0.0;
    const double class_sum = (sc.cls == StateClass::W)
                                 ? 4.0 / 9.0
                                 : ((sc.cls == StateClass::B2 || sc.cls == StateClass::GHZ)
                                        ? 1.0
                                        : 0.0);
    for (int i = 0; i <= 256; ++i) {
      const double tau = 2.0 * tau_ref * i / 256.0;
      const TanglePair closed = tangles_closed(sc.cls, params, field, tau);
      const TanglePair chain = tangles_of_state(evolve_class(sc.cls, params, field, tau));
      worst13 = std::max(worst13, std::abs(closed.tau13 - chain.tau13));
      worst123 = std::max(worst123, std::abs(closed.tau123 - chain.tau123));
      worst_sum = std::max(worst_sum,
                           std::abs(chain.tau13 + chain.tau123 - class_sum));
    }
    sr.checks.push_back(
        detail::bounded_check("closed_vs_chain_tau13", worst13, tol.tangle));
    sr.checks.push_back(
        detail::bounded_check("closed_vs_chain_tau123", worst123, tol.tangle));
    sr.checks.push_back(detail::bounded_check("conserved_sum", worst_sum, tol.tangle));

    // formula tau_star and fields against the deterministic search
    const SearchBounds bounds{2.5 * tau_ref, 2.0 * std::sqrt(sc.omega_hat_sq) + 1.0,
                              64, 32, 64};
    const SearchResult found = maximize_tau13(sc.cls, sc.omega_hat_sq, sc.k_ratio,
                                              bounds, TanglePath::Closed);
    const double expected_max = (sc.cls == StateClass::W) ? 4.0 / 9.0 : 1.0;
    if (found.flat) {
      CheckResult c{"search_tau_star", CheckStatus::Skipped, 0.0, 1e-6,
                    "tau13 constant at the maximum; no localized first attainment"};
      sr.checks.push_back(detail::bounded_check(
          "search_value", std::abs(found.value_best - expected_max), 1e-7));
      sr.checks.push_back(c);
    } else {
      sr.checks.push_back(detail::bounded_check(
          "search_value", std::abs(found.value_best - expected_max), 1e-7,
          sc.known_formula_conflict,
          "value_best=" + detail::format_g(found.value_best)));
      double tau_formula = plan.tau_star;
      if (!plan_ok && sc.cls == StateClass::B2) {
        try {
          tau_formula = tau_star_b2(sc.omega_hat_sq, sc.k_ratio);
        } catch (const Error&) {
          tau_formula = std::numeric_limits<double>::quiet_NaN();
        }
      }
      sr.checks.push_back(detail::bounded_check(
          "search_tau_star", std::abs(found.tau_best - tau_formula), 1e-6,
          sc.known_formula_conflict,
          "tau_best=" + detail::format_g(found.tau_best) +
              " tau_formula=" + detail::format_g(tau_formula)));
    }
    // definition-chain spot check at the located optimum
    {
      const FieldParams fb{found.phi_best, found.omega_big_best, 0.0};
      const double chain_v =
          two_tangle_13(evolve_class(sc.cls, params, fb, found.tau_best));
      sr.checks.push_back(detail::bounded_check(
          "search_chain_crosscheck", std::abs(chain_v - found.value_best),
          tol.tangle));
    }

    // stationarity of the plan point
    if (plan_ok && !found.flat) {
      const Eigen::Vector3d grad =
          gradient_at(sc.cls, params, field, plan.tau_star);
      const Eigen::Matrix3d hess = hessian_at(sc.cls, params, field, plan.tau_star);
      sr.checks.push_back(detail::bounded_check(
          "plan_stationary", grad.norm(), 1e-6,
          false,
          "hessian_tau_tau=" + detail::format_g(hess(0, 0)) +
              " hessian_det=" + detail::format_g(hess.determinant())));
    }

    report.scenarios.push_back(std::move(sr));
  }

  // Global notes documenting the known discrepancies of the printed formulas.
  {
    const Thresholds t6 = thresholds(6.0);
    CheckResult c{"k2_minus_printed_vs_formula", CheckStatus::KnownDiscrepancy,
                  std::abs(*t6.k2_minus - (-0.007)), 0.0,
                  "formula_value=" + detail::format_g(*t6.k2_minus) +
                      " printed_value=-0.007 (the printed defining formula gives"
                      " the left value, the printed number the right; both reported)"};
    report.notes.push_back(c);
  }
  {
    // Denominator of the B2 branch-2 closed form at (6, 1.59): the adopted
    // (omega^2-2K)^2 law against the printed (omega^2-2)^2 one, judged by the
    // definition-chain minimum at tau*/2.
    const ChainParams params{1.59, 6.0};
    const FieldParams field{0.0, 0.0, 0.0};
    const double tau_star = tau_star_b2(6.0, 1.59);
    const double chain_min =
        two_tangle_13(evolve_class(StateClass::B2, params, field, 0.5 * tau_star));
    const double wk2 = omega_k_sq(params);
    const double num = 4.0 * (1.0 - 1.59) * (1.0 - 1.59) * wk2;
    const double adopted_min = 1.0 - num / ((6.0 - 2.0 * 1.59) * (6.0 - 2.0 * 1.59));
    const double printed_min = 1.0 - num / ((6.0 - 2.0) * (6.0 - 2.0));
    CheckResult c{"b2_branch2_denominator_resolution", CheckStatus::KnownDiscrepancy,
                  std::abs(printed_min - chain_min), 0.0,
                  "chain_min=" + detail::format_g(chain_min) +
                      " adopted_law_min=" + detail::format_g(adopted_min) +
                      " printed_law_min=" + detail::format_g(printed_min) +
                      " reported_min=0.57 (adopted (omega^2-2K)^2 matches"
                      " the chain and the reported dip of 0.57)"};
    if (std::abs(adopted_min - chain_min) > tol.tangle) c.status = CheckStatus::Fail;
    report.notes.push_back(c);
  }
  {
    const double rad = 6.0 - 7.0 / 3.0 * 4.0 + 8.0 / 3.0 * 2.0 - 7.0 / 3.0;
    CheckResult c{"b2_branch1_bz_radicand_w6_k2", CheckStatus::KnownDiscrepancy,
                  rad, 0.0,
                  "radicand=" + detail::format_g(rad) +
                      " < 0 inside the printed branch-1 window; printed"
                      " tau_star=" + detail::format_g(tau_star_b2(6.0, 2.0)) +
                      " (oracle comparison in scenario b2_w6_k2_branch1)"};
    report.notes.push_back(c);
  }
  {
    // The printed Det(rho2) expansion and combined determinant expression
    // carry |a4|^2-for-|a2|^2 slips; the implementation uses the corrected
    // forms, which match the explicit partial trace.
    PureState3 probe = representative_state(StateClass::GHZ);
    const double d2 = det_rho(2, probe);
    const double traced = reduced_density(2, probe).determinant().real();
    CheckResult c{"detrho2_expansion_corrected", CheckStatus::KnownDiscrepancy,
                  std::abs(d2 - traced), 1e-12,
                  "printed quadratic terms |a4|^2(|a4|^2+..) corrected to"
                  " |a4|^2(|a2|^2+..); combined expression gains the"
                  " +(n0 n7+n1 n6+n2 n5+n3 n4) group"};
    if (std::abs(d2 - traced) > 1e-12) c.status = CheckStatus::Fail;
    report.notes.push_back(c);
  }

  return report;
}

}  // namespace qbt
