// Command-line front end: simulate, collinear, equilateral, sweep, verify.
//
// Exit codes: 0 success, 1 assertion or verification failure, 2 invalid
// input, 3 collision singularity during a run.

#include "pairspace/io.hpp"
#include "pairspace/pairspace.hpp"
#include "pairspace/sweep.hpp"
#include "pairspace/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace pairspace;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kAssertion = 1;
constexpr int kValidation = 2;
constexpr int kSingularity = 3;

constexpr double kCrossCheckTolerance = 1e-6;

struct Common {
  double n = 1.0;
  std::string output;
  std::string format = "csv";
};

std::ofstream open_output(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  const fs::path path = fs::path(dir) / name;
  std::ofstream out(path);
  if (!out) throw io::InputError(path.string() + ": cannot open for writing");
  return out;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

json vec_json(const Vec3d& v) { return json::array({v.x(), v.y(), v.z()}); }

// --- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string input;
  double t_end = 1.0;
  double dt = 0.0;
  int monitor_every = 1;
  bool cross_check = false;
};

int cmd_simulate(const Common& common, const SimulateArgs& args) {
  const auto ic = io::load_initial_conditions(args.input);
  const PotentialLaw<double> law(common.n);
  IntegratorConfig cfg;
  cfg.dt = args.dt;
  cfg.t_end = args.t_end;
  cfg.monitor_every = args.monitor_every;

  const auto traj = integrate(ic.state, ic.masses, law, cfg);
  const auto& first = traj.samples.front().diagnostics;
  const auto& last = traj.samples.back().diagnostics;
  const double e0 = first.energy;
  double energy_drift = 0.0;
  double tri_max = 0.0;
  for (const auto& s : traj.samples) {
    energy_drift = std::max(energy_drift, std::abs(s.diagnostics.energy - e0) / std::max(std::abs(e0), 1e-300));
    tri_max = std::max(tri_max, s.diagnostics.triangle_max_residual / length_scale(s.state));
  }

  json report{{"input", args.input},
              {"n_bodies", ic.state.n_bodies},
              {"n", common.n},
              {"t_end", args.t_end},
              {"dt", traj.dt},
              {"samples", traj.samples.size()},
              {"status", traj.status == RunStatus::kCompleted ? "completed" : "collision"},
              {"message", traj.message},
              {"energy_initial", e0},
              {"energy_final", last.energy},
              {"energy_drift_relative", energy_drift},
              {"triangle_residual_max_relative", tri_max},
              {"triangle_drift_warning", traj.triangle_drift_warning}};
  json L = json::object();
  for (int slot = 0; slot < pair_count(ic.state.n_bodies); ++slot) {
    const auto [i, j] = pair_of_slot(slot, ic.state.n_bodies);
    L[std::to_string(i + 1) + (ic.state.n_bodies < 10 ? "" : "_") + std::to_string(j + 1)] =
        vec_json(last.pair_angular_momenta[static_cast<std::size_t>(slot)]);
  }
  report["final_pair_angular_momenta"] = L;

  std::cout << "bodies " << ic.state.n_bodies << ", n = " << common.n << ", dt = " << sci(traj.dt) << ", "
            << traj.samples.size() << " samples\n"
            << "energy drift " << sci(energy_drift) << ", max triangle residual " << sci(tri_max) << " (relative)\n";
  if (traj.triangle_drift_warning) std::cout << "warning: triangle residual exceeded 1e3 x tolerance\n";

  int status = kOk;
  if (args.cross_check) {
    const auto bodies = pairs_to_bodies(ic.state, ic.masses);
    const auto oracle_traj = oracle::integrate_bodies(bodies, ic.masses, law, cfg);
    double discrepancy = 0.0;
    const std::size_t count = std::min(oracle_traj.samples.size(), traj.samples.size());
    for (std::size_t k = 0; k < count; ++k) {
      const auto mapped = pairs_to_bodies(traj.samples[k].state, ic.masses, 1e-6);
      const auto& ref = oracle_traj.samples[k].state;
      const double L_ref = length_scale(ref);
      for (int i = 0; i < ref.size(); ++i) discrepancy = std::max(discrepancy, (mapped.r[i] - ref.r[i]).norm() / L_ref);
    }
    report["cross_check"] = {{"max_position_discrepancy_relative", discrepancy},
                             {"tolerance", kCrossCheckTolerance},
                             {"oracle_status", oracle_traj.status == RunStatus::kCompleted ? "completed" : "collision"}};
    std::cout << "max position discrepancy vs body-space oracle " << sci(discrepancy) << '\n';
    if (!(discrepancy <= kCrossCheckTolerance) || oracle_traj.samples.size() != traj.samples.size()) {
      std::cout << "cross-check FAILED (tolerance " << sci(kCrossCheckTolerance) << ")\n";
      status = kAssertion;
    }
    if (!common.output.empty()) {
      auto out = open_output(common.output, "oracle.csv");
      io::write_body_trajectory_csv(out, oracle_traj);
    }
  }

  if (!common.output.empty()) {
    if (common.format == "json") {
      auto out = open_output(common.output, "trajectory.json");
      io::write_trajectory_json(out, traj);
    } else {
      auto out = open_output(common.output, "trajectory.csv");
      io::write_trajectory_csv(out, traj);
    }
    auto rep = open_output(common.output, "report.json");
    rep << report.dump(1) << '\n';
  }

  if (traj.status == RunStatus::kCollision) {
    std::cerr << "error: " << traj.message << '\n';
    return kSingularity;
  }
  return status;
}

// --- collinear ------------------------------------------------------------

json collinear_json(const sweep::SweepRow& row) {
  const auto& r = row.report;
  return {{"masses", row.masses},
          {"n", row.n},
          {"alpha", r.alpha},
          {"E_alpha", r.residual},
          {"E_scale", r.residual_scale},
          {"bracket", {r.bracket_lo, r.bracket_hi}},
          {"x_L", r.x_L},
          {"case", r.bound.case_id},
          {"interval", {r.bound.lo, r.bound.hi}},
          {"sigma", r.roots.sigma},
          {"tau", r.roots.tau},
          {"violations", row.violations}};
}

int cmd_collinear(const Common& common, const std::vector<double>& masses) {
  if (masses.size() != 3) throw io::InputError("collinear needs exactly three masses");
  const auto row = sweep::analyze({masses[0], masses[1], masses[2]}, common.n);
  const auto& r = row.report;
  const json j = collinear_json(row);
  if (common.format == "json") {
    std::cout << j.dump(1) << '\n';
  } else {
    std::printf("masses      %g %g %g   n = %g\n", masses[0], masses[1], masses[2], common.n);
    std::printf("alpha       %.15g\n", r.alpha);
    std::printf("E(alpha)    %.3e  (scale %.3e)\n", r.residual, r.residual_scale);
    std::printf("x_L         %.15g\n", r.x_L);
    std::printf("case        %d   interval [%.15g, %.15g]\n", r.bound.case_id, r.bound.lo, r.bound.hi);
    std::printf("%-4s %-20s %-20s\n", "k", "sigma_k", "tau_k");
    for (int k = 0; k < 3; ++k) std::printf("%-4d %-20.15g %-20.15g\n", k + 1, r.roots.sigma[k], r.roots.tau[k]);
    if (row.violations.empty()) std::printf("all bound checks hold\n");
    for (const auto& v : row.violations) std::printf("VIOLATION %s\n", v.c_str());
  }
  if (!common.output.empty()) {
    auto out = open_output(common.output, "collinear.json");
    out << j.dump(1) << '\n';
  }
  return row.violations.empty() ? kOk : kAssertion;
}

// --- equilateral ----------------------------------------------------------

struct EquilateralArgs {
  std::vector<double> masses{1.0, 1.0, 1.0};
  double side = 1.0;
  double periods = 5.0;
  double dt = 0.0;
  bool rest = false;
};

int cmd_equilateral(const Common& common, const EquilateralArgs& args) {
  if (args.masses.size() != 3) throw io::InputError("equilateral needs exactly three masses");
  if (!(args.side > 0) || !(args.periods > 0)) throw io::InputError("--side and --periods must be positive");
  const MassSystem<double> ms(args.masses);
  const PotentialLaw<double> law(common.n);
  const double omega = lagrange_circular_omega(ms, law, args.side);
  const double period = 2 * pi<double>() / omega;

  IntegratorConfig cfg;
  cfg.dt = args.dt;
  cfg.t_end = args.periods * period;
  cfg.monitor_every = 10;
  json report{{"masses", args.masses}, {"n", common.n}, {"side", args.side}, {"rest", args.rest}};

  int status = kOk;
  Trajectory<double> traj;
  if (args.rest) {
    cfg.collapse_cutoff = 1e-3;
    if (cfg.dt <= 0) cfg.dt = 1e-5 * period;
    traj = integrate(lagrange_rest_initial(args.side), ms, law, cfg);
    const auto h = homothety_check(traj.samples, 1e-5);
    report["homothetic"] = h.is_homothetic;
    report["homothety_residual"] = h.max_residual;
    report["stopped_at"] = traj.samples.back().time;
    std::cout << "release from rest: " << (h.is_homothetic ? "homothetic" : "NOT homothetic") << ", residual "
              << sci(h.max_residual) << ", stopped at t = " << traj.samples.back().time << '\n';
    if (!h.is_homothetic) status = kAssertion;
  } else {
    traj = integrate(lagrange_circular_initial(ms, law, args.side), ms, law, cfg);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double phi_max = 0.0;
    for (const auto& s : traj.samples) {
      for (const auto& q : s.state.q) {
        lo = std::min(lo, q.norm());
        hi = std::max(hi, q.norm());
      }
      phi_max = std::max(phi_max, phi(s.state, ms, law).norm());
    }
    const double force_scale = law.n() * ms.mass(0) * ms.mass(1) * ms.mass(2) / ms.total() *
                               law.inverse_power_n(args.side) / args.side;
    const auto verdict = conservation_classifier(traj.samples, ms);
    const double spread = (hi - lo) / hi;
    report["omega"] = omega;
    report["period"] = period;
    report["distance_spread_relative"] = spread;
    report["phi_max_relative"] = phi_max / force_scale;
    report["L_drift"] = verdict.drift;
    report["conservation"] = to_string(verdict.verdict);
    std::cout << "omega " << sci(omega) << ", period " << sci(period) << ", dt " << sci(traj.dt) << '\n'
              << "distance spread " << sci(spread) << ", |phi| / force scale " << sci(phi_max / force_scale) << '\n'
              << "L_ij drift " << sci(verdict.drift[0]) << ' ' << sci(verdict.drift[1]) << ' ' << sci(verdict.drift[2])
              << " -> " << to_string(verdict.verdict) << '\n';
    if (!(spread <= 1e-6) || verdict.verdict != ConservationClass::kAllConserved) status = kAssertion;
  }
  if (!common.output.empty()) {
    auto out = open_output(common.output, common.format == "json" ? "trajectory.json" : "trajectory.csv");
    if (common.format == "json") io::write_trajectory_json(out, traj);
    else io::write_trajectory_csv(out, traj);
    auto rep = open_output(common.output, "report.json");
    rep << report.dump(1) << '\n';
  }
  if (traj.status == RunStatus::kCollision) {
    std::cerr << "error: " << traj.message << '\n';
    return kSingularity;
  }
  return status;
}

// --- sweep ----------------------------------------------------------------

int cmd_sweep(const Common& common, int grid, std::vector<double> exponents) {
  if (exponents.empty()) exponents = {common.n};
  for (double n : exponents)
    if (!(n > 0)) throw io::InputError("exponents must be positive");
  const auto rows = sweep::run(sweep::simplex_grid(grid), exponents);
  std::ostringstream body;
  if (common.format == "json") sweep::write_json(body, rows);
  else sweep::write_csv(body, rows);
  if (common.output.empty()) {
    std::cout << body.str();
  } else {
    auto out = open_output(common.output, common.format == "json" ? "sweep.json" : "sweep.csv");
    out << body.str();
    std::cout << rows.size() << " rows, " << sweep::violation_count(rows) << " violations\n";
  }
  return sweep::violation_count(rows) == 0 ? kOk : kAssertion;
}

// --- verify ---------------------------------------------------------------

int cmd_verify(const Common& common, const verify::Options& opts) {
  const auto summary = verify::run(opts);
  std::ostringstream body;
  if (common.format == "json") verify::write_json(body, summary);
  else verify::write_text(body, summary);
  std::cout << body.str();
  if (!common.output.empty()) {
    auto out = open_output(common.output, common.format == "json" ? "verify.json" : "verify.txt");
    out << body.str();
  }
  return summary.failures() == 0 ? kOk : kAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pair-space N-body mechanics: integration, central configurations and invariant checks"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", common.n, "Exponent of the r^-n potential")->check(CLI::PositiveNumber);
    sub->add_option("--output", common.output, "Directory for output files");
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Integrate the pair-space equations of motion");
  add_common(simulate);
  simulate->add_option("--input", sim.input, "Initial conditions (JSON)")->required();
  simulate->add_option("--t-end", sim.t_end, "End time");
  simulate->add_option("--dt", sim.dt, "Step size (default: 1e-3 of the shortest pair period)");
  simulate->add_option("--monitor-every", sim.monitor_every, "Record every k-th step")->check(CLI::PositiveNumber);
  simulate->add_flag("--cross-check", sim.cross_check, "Also run the body-space oracle and compare");

  std::vector<double> masses;
  auto* collinear = app.add_subcommand("collinear", "Collinear (Euler) configuration analysis");
  add_common(collinear);
  collinear->add_option("masses", masses, "m1 m2 m3")->required()->expected(3)->check(CLI::PositiveNumber);

  EquilateralArgs eq;
  auto* equilateral = app.add_subcommand("equilateral", "Equilateral (Lagrange) orbit construction and check");
  add_common(equilateral);
  equilateral->add_option("masses", eq.masses, "m1 m2 m3 (default 1 1 1)")->expected(3)->check(CLI::PositiveNumber);
  equilateral->add_option("--side", eq.side, "Side length");
  equilateral->add_option("--periods", eq.periods, "Run length in orbital periods");
  equilateral->add_option("--dt", eq.dt, "Step size");
  equilateral->add_flag("--rest", eq.rest, "Release from rest and test for homothetic collapse");

  int grid = 20;
  std::vector<double> exponents;
  auto* sweep_cmd = app.add_subcommand("sweep", "Collinear bounds over a mass-simplex grid");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--grid", grid, "Points per simplex axis (grid x grid rows)")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--exponents", exponents, "List of n values (default: --n)")->delimiter(',');

  verify::Options vopts;
  auto* verify_cmd = app.add_subcommand("verify", "Run the randomized invariant suites");
  add_common(verify_cmd);
  verify_cmd->add_option("--seed", vopts.seed, "Random seed");
  verify_cmd->add_option("--cases", vopts.cases, "Random instances per check")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--only", vopts.only, "Comma-separated suites: core, kinetic, multipliers, dynamics, "
                                               "threebody, central, bounds")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (*simulate) return cmd_simulate(common, sim);
    if (*collinear) return cmd_collinear(common, masses);
    if (*equilateral) return cmd_equilateral(common, eq);
    if (*sweep_cmd) return cmd_sweep(common, grid, exponents);
    if (*verify_cmd) return cmd_verify(common, vopts);
  } catch (const ConstraintViolation& e) {
    const auto t = e.triplet();
    std::cerr << "constraint violation: " << e.what() << " (bodies " << t[0] + 1 << "," << t[1] + 1 << ","
              << t[2] + 1 << ", residual " << e.residual() << ")\n";
    return kValidation;
  } catch (const CollisionError& e) {
    std::cerr << "collision: " << e.what() << '\n';
    return kSingularity;
  } catch (const io::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kValidation;
  } catch (const DimensionError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kValidation;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAssertion;
  }
  return kOk;
}
