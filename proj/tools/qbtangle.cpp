// qbtangle: time-optimal entanglement trajectories of the controlled
// three-qubit Ising chain.
//
// Subcommands:
//   trajectory  tau13/tau123 along an evolution as CSV
//   optimal     optimal time and field constants for a class
//   sweep       optimal plans across a coupling-ratio grid as CSV
//   verify      analytic-vs-numeric verification report
//
// Exit status: 0 success, 1 usage/config error, 2 domain error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qbtangle/qbtangle.hpp"

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Flat key=value config: '#' comments, blank lines ignored, keys match the
// long option names without the leading dashes. Command-line flags override
// file values.
std::vector<std::pair<std::string, std::string>> read_config(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qbt::ConfigError("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  const auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw qbt::ConfigError(path + ":" + std::to_string(lineno) +
                             ": expected key=value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw qbt::ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    entries.emplace_back(key, value);
  }
  return entries;
}

// Inject config entries as long options unless given on the command line.
std::vector<std::string> merge_config_args(const std::vector<std::string>& args,
                                           const std::vector<std::string>& flags) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  std::vector<std::string> merged = args;
  if (config_path.empty()) return merged;
  for (const auto& [key, value] : read_config(config_path)) {
    const std::string opt = "--" + key;
    bool present = false;
    for (const std::string& a : merged)
      if (a == opt || a.rfind(opt + "=", 0) == 0) {
        present = true;
        break;
      }
    if (present) continue;
    const bool is_flag =
        std::find(flags.begin(), flags.end(), key) != flags.end();
    if (is_flag) {
      if (value == "1" || value == "true" || value == "yes" || value == "on")
        merged.push_back(opt);
      else if (value != "0" && value != "false" && value != "no" && value != "off")
        throw qbt::ConfigError("config key '" + key + "': boolean expected, got '" +
                               value + "'");
    } else {
      merged.push_back(opt);
      merged.push_back(value);
    }
  }
  return merged;
}

struct OutputTarget {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw qbt::ConfigError("cannot open output file: " + path);
    stream = &file;
  }
};

qbt::StateClass parse_class(const std::string& name) {
  const auto c = qbt::state_class_from_string(name);
  if (!c)
    throw CLI::ValidationError("--class", "unknown state class '" + name + "'");
  return *c;
}

void throw_plan_diagnostics(const qbt::OptimalPlan& plan) {
  for (const qbt::Diagnostic d : plan.diagnostics) {
    switch (d) {
      case qbt::Diagnostic::NegativeBzSquared:
        throw qbt::NegativeBzSquared("optimal-field formula requires Bz^2 < 0");
      case qbt::Diagnostic::OutOfRangeK:
        throw qbt::OutOfRange("coupling ratio outside every validity window");
      case qbt::Diagnostic::DivergentTauStar:
        throw qbt::DivergentTime("optimal time diverges at this coupling ratio");
    }
  }
}

// ---------------------------------------------------------------------------
// trajectory
// ---------------------------------------------------------------------------

struct TrajectoryConfig {
  std::string cls;
  double omega_sq = 0.0;
  double k = 0.0;
  double phi = 0.0;
  double omega_big = 0.0;
  double theta0 = 0.0;
  bool optimal = false;
  double tau_max = -1.0;
  int steps = 1000;
  std::string mode = "closed";
  double j12_hz = 0.0;
  std::string out;
  std::string config;
};

int run_trajectory(const TrajectoryConfig& cfg) {
  const qbt::StateClass cls = parse_class(cfg.cls);
  const qbt::ChainParams params{cfg.k, cfg.omega_sq};
  qbt::FieldParams field{cfg.phi, cfg.omega_big, cfg.theta0};
  double tau_max = cfg.tau_max;
  if (cfg.optimal) {
    const qbt::OptimalPlan plan = qbt::optimal_plan(cls, cfg.omega_sq, cfg.k);
    throw_plan_diagnostics(plan);
    field = plan.fields.front();
    if (tau_max <= 0.0) tau_max = 2.0 * plan.tau_star;
  }
  if (tau_max <= 0.0)
    throw CLI::ValidationError("--tau-max", "required unless --optimal is given");
  if (cfg.steps < 2) throw CLI::ValidationError("--steps", "need at least 2");
  qbt::omega_k_sq(params);  // surface InsufficientEnergy before emitting

  OutputTarget out;
  out.open(cfg.out);
  std::ostream& os = *out.stream;
  const bool with_seconds = cfg.j12_hz > 0.0;
  os << "tau,tau13,tau123" << (with_seconds ? ",t_seconds" : "") << "\n";

  const auto emit = [&](double tau, const qbt::TanglePair& tp) {
    os << fmt(tau) << ',' << fmt(tp.tau13) << ',' << fmt(tp.tau123);
    if (with_seconds) os << ',' << fmt(tau / cfg.j12_hz);
    os << "\n";
  };

  if (cfg.mode == "closed") {
    for (int j = 0; j < cfg.steps; ++j) {
      const double tau = tau_max * j / (cfg.steps - 1);
      emit(tau, qbt::tangles_closed(cls, params, field, tau));
    }
  } else if (cfg.mode == "chain") {
    for (int j = 0; j < cfg.steps; ++j) {
      const double tau = tau_max * j / (cfg.steps - 1);
      emit(tau, qbt::tangles_of_state(qbt::evolve_class(cls, params, field, tau)));
    }
  } else if (cfg.mode == "oracle") {
    // single pass of time-ordered integration, emitting at the grid times
    const double h0 = std::min(5e-4, 0.005 / std::sqrt(cfg.omega_sq));
    qbt::Matrix8cd u = qbt::Matrix8cd::Identity();
    const qbt::PureState3 rep = qbt::representative_state(cls);
    double tau_prev = 0.0;
    for (int j = 0; j < cfg.steps; ++j) {
      const double tau = tau_max * j / (cfg.steps - 1);
      const double span = tau - tau_prev;
      if (span > 0.0) {
        const long n = std::max<long>(1, static_cast<long>(std::ceil(span / h0)));
        const double h = span / static_cast<double>(n);
        for (long s = 0; s < n; ++s) {
          const double mid = tau_prev + (static_cast<double>(s) + 0.5) * h;
          u = qbt::detail::hermitian_propagator(
                  qbt::detail::oracle_hamiltonian(params, field, mid), h) *
              u;
        }
      }
      tau_prev = tau;
      emit(tau, qbt::tangles_of_state(qbt::PureState3::from_vec(u * rep.vec())));
    }
  } else {
    throw CLI::ValidationError("--mode", "expected closed, chain or oracle");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// optimal
// ---------------------------------------------------------------------------

struct OptimalConfig {
  std::string cls;
  double omega_sq = 0.0;
  double k = 0.0;
  std::string out;
  std::string config;
};

int run_optimal(const OptimalConfig& cfg) {
  const qbt::StateClass cls = parse_class(cfg.cls);
  if (cls != qbt::StateClass::B2 && cls != qbt::StateClass::GHZ)
    throw CLI::ValidationError("--class", "optimal plans exist for b2 and ghz");
  const qbt::OptimalPlan plan = qbt::optimal_plan(cls, cfg.omega_sq, cfg.k);

  OutputTarget out;
  out.open(cfg.out);
  std::ostream& os = *out.stream;
  os << "class=" << qbt::to_string(cls) << "\n";
  os << "omega_sq=" << fmt(cfg.omega_sq) << "\n";
  os << "k=" << fmt(cfg.k) << "\n";
  os << "branch=" << qbt::to_string(plan.branch) << "\n";
  os << "tau_star=" << fmt(plan.tau_star) << "\n";
  os << "B0=" << fmt(plan.b0) << "\n";
  os << "Bz=" << fmt(plan.bz) << "\n";
  if (plan.fields.size() == 2) {
    os << "Omega_plus=" << fmt(plan.fields[0].omega_big) << "\n";
    os << "Omega_minus=" << fmt(plan.fields[1].omega_big) << "\n";
  } else if (!plan.fields.empty()) {
    os << "Omega=" << fmt(plan.fields[0].omega_big) << "\n";
  }
  if (!plan.fields.empty()) {
    os << "phi=" << fmt(plan.fields[0].phi) << "\n";
    os << "theta0=" << fmt(plan.fields[0].theta0) << "\n";
  }
  os << "diagnostics=";
  if (plan.valid()) {
    os << "none\n";
  } else {
    for (std::size_t i = 0; i < plan.diagnostics.size(); ++i)
      os << (i ? "," : "") << qbt::to_string(plan.diagnostics[i]);
    os << "\n";
  }
  os << "valid=" << (plan.valid() ? 1 : 0) << "\n";
  return plan.valid() ? 0 : 2;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepConfig {
  std::string cls;
  double omega_sq = 0.0;
  double k_min = 0.0;
  double k_max = 0.0;
  int k_steps = 0;
  std::string out;
  std::string config;
};

int run_sweep(const SweepConfig& cfg) {
  const qbt::StateClass cls = parse_class(cfg.cls);
  if (cls != qbt::StateClass::B2 && cls != qbt::StateClass::W &&
      cls != qbt::StateClass::GHZ)
    throw CLI::ValidationError("--class", "sweep applies to b2, w or ghz");
  if (cfg.k_steps < 2) throw CLI::ValidationError("--k-steps", "need at least 2");

  OutputTarget out;
  out.open(cfg.out);
  std::ostream& os = *out.stream;
  os << "K,branch,tau_star,B0,Bz,Omega,valid\n";
  for (int i = 0; i < cfg.k_steps; ++i) {
    const double k = (i == cfg.k_steps - 1)
                         ? cfg.k_max
                         : cfg.k_min + (cfg.k_max - cfg.k_min) * i / (cfg.k_steps - 1);
    const qbt::OptimalPlan plan = qbt::optimal_plan(cls, cfg.omega_sq, k);
    const bool out_of_range =
        std::find(plan.diagnostics.begin(), plan.diagnostics.end(),
                  qbt::Diagnostic::OutOfRangeK) != plan.diagnostics.end();
    const double omega = plan.fields.empty()
                             ? std::numeric_limits<double>::quiet_NaN()
                             : plan.fields.front().omega_big;
    os << fmt(k) << ','
       << (out_of_range ? "out_of_range" : qbt::to_string(plan.branch)) << ','
       << fmt(plan.tau_star) << ',' << fmt(plan.b0) << ',' << fmt(plan.bz) << ','
       << fmt(omega) << ',' << (plan.valid() ? 1 : 0) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyConfig {
  std::string scenarios;
  std::string out;
  std::string config;
};

std::vector<qbt::Scenario> parse_scenarios(const std::string& path,
                                           qbt::VerifyTolerances& tol) {
  std::vector<qbt::Scenario> list;
  int n = 0;
  for (const auto& [key, value] : read_config(path)) {
    if (key == "tol_propagator") {
      tol.propagator = std::stod(value);
    } else if (key == "tol_tangle") {
      tol.tangle = std::stod(value);
    } else if (key == "scenario") {
      // class,omega_sq,k[,known_discrepancy]
      std::stringstream ss(value);
      std::string cls_s, w2_s, k_s, known_s;
      if (!std::getline(ss, cls_s, ',') || !std::getline(ss, w2_s, ',') ||
          !std::getline(ss, k_s, ','))
        throw qbt::ConfigError(path + ": scenario entry '" + value +
                               "' needs class,omega_sq,k");
      std::getline(ss, known_s, ',');
      const auto cls = qbt::state_class_from_string(cls_s);
      if (!cls)
        throw qbt::ConfigError(path + ": unknown class '" + cls_s + "'");
      qbt::Scenario sc;
      sc.cls = *cls;
      try {
        sc.omega_hat_sq = std::stod(w2_s);
        sc.k_ratio = std::stod(k_s);
      } catch (const std::exception&) {
        throw qbt::ConfigError(path + ": bad number in scenario '" + value + "'");
      }
      sc.known_formula_conflict = (known_s == "1" || known_s == "known");
      sc.name = "scenario_" + std::to_string(++n);
      list.push_back(sc);
    } else {
      throw qbt::ConfigError(path + ": unknown key '" + key + "'");
    }
  }
  if (list.empty())
    throw qbt::ConfigError(path + ": no scenario entries");
  return list;
}

void write_report(std::ostream& os, const qbt::VerificationReport& report,
                  const qbt::VerifyTolerances& tol) {
  int pass = 0, fail = 0, known = 0, skipped = 0;
  const auto count = [&](const qbt::CheckResult& c) {
    switch (c.status) {
      case qbt::CheckStatus::Pass: ++pass; break;
      case qbt::CheckStatus::Fail: ++fail; break;
      case qbt::CheckStatus::KnownDiscrepancy: ++known; break;
      case qbt::CheckStatus::Skipped: ++skipped; break;
    }
  };
  for (const auto& sr : report.scenarios)
    for (const auto& c : sr.checks) count(c);
  for (const auto& c : report.notes) count(c);

  os << "# qbtangle verification report\n";
  os << "# scenarios: " << report.scenarios.size() << ", checks passed: " << pass
     << ", failed: " << fail << ", known discrepancies: " << known
     << ", skipped: " << skipped << "\n";
  os << "[meta]\n";
  os << "tol_propagator=" << fmt(tol.propagator) << "\n";
  os << "tol_tangle=" << fmt(tol.tangle) << "\n";
  for (const auto& sr : report.scenarios) {
    os << "[scenario " << sr.scenario.name << "]\n";
    os << "class=" << qbt::to_string(sr.scenario.cls) << "\n";
    os << "omega_sq=" << fmt(sr.scenario.omega_hat_sq) << "\n";
    os << "k=" << fmt(sr.scenario.k_ratio) << "\n";
    for (const auto& c : sr.checks) {
      os << "check." << c.name << "=" << qbt::to_string(c.status) << "\n";
      os << "measured." << c.name << "=" << fmt(c.measured) << "\n";
      if (c.tolerance > 0.0)
        os << "tolerance." << c.name << "=" << fmt(c.tolerance) << "\n";
      if (!c.detail.empty()) os << "detail." << c.name << "=" << c.detail << "\n";
    }
  }
  os << "[notes]\n";
  for (const auto& c : report.notes) {
    os << "check." << c.name << "=" << qbt::to_string(c.status) << "\n";
    os << "measured." << c.name << "=" << fmt(c.measured) << "\n";
    if (!c.detail.empty()) os << "detail." << c.name << "=" << c.detail << "\n";
  }
  os << "[summary]\n";
  os << "pass=" << pass << "\n";
  os << "fail=" << fail << "\n";
  os << "known_discrepancy=" << known << "\n";
  os << "skipped=" << skipped << "\n";
  os << "exit=" << (report.all_pass() ? 0 : 1) << "\n";
}

int run_verify(const VerifyConfig& cfg) {
  qbt::VerifyTolerances tol;
  std::vector<qbt::Scenario> scenarios;
  if (cfg.scenarios.empty()) {
    scenarios = qbt::default_scenarios();
  } else {
    scenarios = parse_scenarios(cfg.scenarios, tol);
  }
  const qbt::VerificationReport report = qbt::verify_report(scenarios, tol);
  OutputTarget out;
  out.open(cfg.out);
  write_report(*out.stream, report, tol);
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-optimal entanglement evolution of a controlled three-qubit"
               " Ising chain",
               "qbtangle"};
  app.require_subcommand(1);

  TrajectoryConfig tcfg;
  CLI::App* traj = app.add_subcommand(
      "trajectory", "emit tau13/tau123 along an evolution as CSV");
  traj->add_option("--class", tcfg.cls, "state class: s,b1,b2,b3,w,ghz")->required();
  traj->add_option("--omega-sq", tcfg.omega_sq, "squared rescaled energy")->required();
  traj->add_option("--k", tcfg.k, "coupling ratio J23/J12")->required();
  traj->add_option("--phi", tcfg.phi, "field tilt (radians)");
  traj->add_option("--omega-big", tcfg.omega_big, "field precession frequency");
  traj->add_option("--theta0", tcfg.theta0, "initial field azimuth");
  traj->add_flag("--optimal", tcfg.optimal, "use the optimal-field plan");
  traj->add_option("--tau-max", tcfg.tau_max, "largest rescaled time");
  traj->add_option("--steps", tcfg.steps, "number of grid points (default 1000)");
  traj->add_option("--mode", tcfg.mode, "closed | chain | oracle");
  traj->add_option("--j12-hz", tcfg.j12_hz, "physical J12 in Hz; adds t_seconds");
  traj->add_option("--out", tcfg.out, "output file (default stdout)");
  traj->add_option("--config", tcfg.config, "key=value config file");

  OptimalConfig ocfg;
  CLI::App* opt = app.add_subcommand("optimal", "optimal time and fields");
  opt->add_option("--class", ocfg.cls, "state class: b2 or ghz")->required();
  opt->add_option("--omega-sq", ocfg.omega_sq, "squared rescaled energy")->required();
  opt->add_option("--k", ocfg.k, "coupling ratio J23/J12")->required();
  opt->add_option("--out", ocfg.out, "output file (default stdout)");
  opt->add_option("--config", ocfg.config, "key=value config file");

  SweepConfig scfg;
  CLI::App* sweep = app.add_subcommand("sweep", "plans across a coupling grid");
  sweep->add_option("--class", scfg.cls, "state class: b2, w or ghz")->required();
  sweep->add_option("--omega-sq", scfg.omega_sq, "squared rescaled energy")->required();
  sweep->add_option("--k-min", scfg.k_min, "first coupling ratio")->required();
  sweep->add_option("--k-max", scfg.k_max, "last coupling ratio")->required();
  sweep->add_option("--k-steps", scfg.k_steps, "grid size (>= 2)")->required();
  sweep->add_option("--out", scfg.out, "output file (default stdout)");
  sweep->add_option("--config", scfg.config, "key=value config file");

  VerifyConfig vcfg;
  CLI::App* verify = app.add_subcommand("verify", "verification report");
  verify->add_option("--scenarios", vcfg.scenarios, "scenario file (key=value)");
  verify->add_option("--out", vcfg.out, "output file (default stdout)");
  verify->add_option("--config", vcfg.config, "key=value config file");

  const std::vector<std::string> flag_names = {"optimal"};
  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config_args(args, flag_names);
    // CLI11 parses reversed vectors
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const qbt::ConfigError& e) {
    std::cerr << "error=ConfigError: " << e.what() << "\n";
    return 1;
  }

  try {
    if (traj->parsed()) return run_trajectory(tcfg);
    if (opt->parsed()) return run_optimal(ocfg);
    if (sweep->parsed()) return run_sweep(scfg);
    if (verify->parsed()) return run_verify(vcfg);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error=Usage: " << e.what() << "\n";
    return 1;
  } catch (const qbt::ConfigError& e) {
    std::cerr << "error=ConfigError: " << e.what() << "\n";
    return 1;
  } catch (const qbt::Error& e) {
    std::cerr << "error=" << e.kind() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error=Internal: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
