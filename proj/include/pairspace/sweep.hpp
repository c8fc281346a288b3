#pragma once

#include "pairspace/central.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace pairspace::sweep {

/// One collinear analysis with every bound and root property re-checked.
struct SweepRow {
  std::array<double, 3> masses{};
  double n = 1.0;
  CollinearReport<double> report;
  std::vector<std::string> violations;  // names of failed checks, empty when all hold
};

/// k*k interior points of the mass simplex m1 + m2 + m3 = 1, in a fixed order:
/// m1 = u, m2 = (1 - u) v, m3 = (1 - u)(1 - v) with u, v on a midpoint grid.
std::vector<std::array<double, 3>> simplex_grid(int k);

/// Runs euler_alpha and checks the envelope between x_L and 1, the case
/// interval, the signs of E at sigma_3 and tau_1, and the sigma/tau
/// properties (reciprocity, cross ordering, mass ordering, the unit
/// threshold, and the mass-ratio bounds).
SweepRow analyze(const std::array<double, 3>& masses, double n);

/// Rows for every grid point and exponent, grid-major then exponent order.
std::vector<SweepRow> run(const std::vector<std::array<double, 3>>& grid, const std::vector<double>& exponents);

std::size_t violation_count(const std::vector<SweepRow>& rows);

/// CSV columns m1,m2,m3,n,alpha,case,lo,hi,sigma1..3,tau1..3, followed by a
/// "# violations" section listing failed checks (one per line).
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_json(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace pairspace::sweep
