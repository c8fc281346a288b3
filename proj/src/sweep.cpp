#include "pairspace/sweep.hpp"

#include "pairspace/io.hpp"

#include <json.hpp>

#include <cmath>
#include <ostream>

namespace pairspace::sweep {

std::vector<std::array<double, 3>> simplex_grid(int k) {
  if (k < 1) throw DomainError("grid size must be at least 1");
  std::vector<std::array<double, 3>> out;
  out.reserve(static_cast<std::size_t>(k) * static_cast<std::size_t>(k));
  for (int a = 0; a < k; ++a) {
    const double u = (a + 0.5) / k;
    for (int b = 0; b < k; ++b) {
      const double v = (b + 0.5) / k;
      out.push_back({u, (1 - u) * v, (1 - u) * (1 - v)});
    }
  }
  return out;
}

namespace {

// Orderings are only asserted when the masses differ by more than this.
constexpr double kTie = 1e-9;

bool distinct(double a, double b) { return std::abs(a - b) > kTie * std::max(a, b); }

}  // namespace

SweepRow analyze(const std::array<double, 3>& masses, double n) {
  const MassSystem<double> ms({masses[0], masses[1], masses[2]});
  const PotentialLaw<double> law(n);
  SweepRow row{masses, n, euler_alpha(ms, law), {}};
  const auto& rep = row.report;
  const auto& sig = rep.roots.sigma;
  const auto& tau = rep.roots.tau;
  auto check = [&](bool ok, const std::string& name) {
    if (!ok) row.violations.push_back(name);
  };

  check(rep.converged, "root_residual");
  check(rep.bound.inside_envelope, "envelope");
  check(rep.bound.inside, "case_interval");
  check(rep.roots.converged, "sigma_tau_residual");
  check(E_of_x(sig[2], ms, law) < 0, "E(sigma3)<0");
  check(E_of_x(tau[0], ms, law) > 0, "E(tau1)>0");

  const double c = case_threshold(law);
  const double p = n + 1;
  for (int k = 0; k < 3; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const std::string K = std::to_string(k + 1);
    check(std::abs(sig[uk] * tau[uk] - 1) <= 1e-12, "property1_k" + K);
    const double mk = masses[uk];
    const double rest = ms.total() - mk;
    if (distinct(mk, c * rest)) {
      const bool heavy = mk > c * rest;
      check((sig[uk] >= 1) == heavy && (tau[uk] <= 1) == heavy, "property4_k" + K);
    }
    for (int j = 0; j < 3; ++j) {
      if (j == k) continue;
      const auto uj = static_cast<std::size_t>(j);
      const std::string J = std::to_string(j + 1);
      check(tau[uj] > sig[uk], "property2_j" + J + "k" + K);
      if (distinct(masses[uj], mk)) {
        const bool heavier = masses[uj] > mk;  // m_j > m_k
        check((sig[uj] > sig[uk]) == heavier && (tau[uk] > tau[uj]) == heavier, "property3_j" + J + "k" + K);
      }
      check(sig[uk] < std::pow(mk / masses[uj], 1 / p), "property5_sigma_j" + J + "k" + K);
      check(tau[uk] > std::pow(masses[uj] / mk, 1 / p), "property5_tau_j" + J + "k" + K);
    }
  }
  return row;
}

std::vector<SweepRow> run(const std::vector<std::array<double, 3>>& grid, const std::vector<double>& exponents) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.size() * exponents.size());
  for (const auto& m : grid)
    for (double n : exponents) rows.push_back(analyze(m, n));
  return rows;
}

std::size_t violation_count(const std::vector<SweepRow>& rows) {
  std::size_t total = 0;
  for (const auto& r : rows) total += r.violations.size();
  return total;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  using io::format_number;
  os << "m1,m2,m3,n,alpha,case,lo,hi,sigma1,sigma2,sigma3,tau1,tau2,tau3\n";
  for (const auto& r : rows) {
    const auto& rep = r.report;
    os << format_number(r.masses[0]) << ',' << format_number(r.masses[1]) << ',' << format_number(r.masses[2]) << ','
       << format_number(r.n) << ',' << format_number(rep.alpha) << ',' << rep.bound.case_id << ','
       << format_number(rep.bound.lo) << ',' << format_number(rep.bound.hi);
    for (double s : rep.roots.sigma) os << ',' << format_number(s);
    for (double t : rep.roots.tau) os << ',' << format_number(t);
    os << '\n';
  }
  os << "# violations: " << violation_count(rows) << '\n';
  for (const auto& r : rows)
    for (const auto& v : r.violations)
      os << "# " << format_number(r.masses[0]) << ',' << format_number(r.masses[1]) << ','
         << format_number(r.masses[2]) << ',' << format_number(r.n) << ',' << v << '\n';
}

void write_json(std::ostream& os, const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    const auto& rep = r.report;
    out.push_back({{"masses", r.masses},
                   {"n", r.n},
                   {"alpha", rep.alpha},
                   {"case", rep.bound.case_id},
                   {"lo", rep.bound.lo},
                   {"hi", rep.bound.hi},
                   {"sigma", rep.roots.sigma},
                   {"tau", rep.roots.tau},
                   {"violations", r.violations}});
  }
  os << nlohmann::json{{"rows", out}, {"violation_count", violation_count(rows)}}.dump(1) << '\n';
}

}  // namespace pairspace::sweep
