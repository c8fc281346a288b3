#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pairspace::verify {

/// One invariant checked over a batch of random instances.
struct Check {
  std::string suite;
  std::string name;
  int instances = 0;
  double worst = 0.0;  // largest measured error (or violation count)
  double limit = 0.0;
  bool passed = false;
};

struct Options {
  std::uint64_t seed = 20240611;
  int cases = 100;
  std::vector<std::string> only;  // suite names; empty runs all
};

struct Summary {
  std::uint64_t seed = 0;
  int cases = 0;
  std::vector<Check> checks;

  int failures() const;
};

/// Suite names accepted by Options::only.
const std::vector<std::string>& suite_names();

/// Runs the invariant suites. Throws DomainError for an unknown suite name or
/// a non-positive case count; failed checks are reported, never thrown.
Summary run(const Options& opts);

void write_text(std::ostream& os, const Summary& s);
void write_json(std::ostream& os, const Summary& s);

}  // namespace pairspace::verify
