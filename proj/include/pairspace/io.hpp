#pragma once

#include "pairspace/dynamics.hpp"
#include "pairspace/oracle.hpp"

#include <iosfwd>
#include <string>

namespace pairspace::io {

/// Malformed or inconsistent user input. The message carries the source
/// name and, where it can be located, the line number.
class InputError : public Error {
 public:
  using Error::Error;
};

struct InitialConditions {
  MassSystem<double> masses;
  PairState<double> state;
  bool from_bodies = false;
};

/// Parses initial conditions in either of two layouts:
///
///   {"masses": [...], "bodies": [{"r": [x,y,z], "v": [x,y,z]}, ...]}
///   {"masses": [...], "pairs": {"R": [...], "Rdot": [...],
///                               "q": {"12": [...], ...}, "qdot": {...}}}
///
/// Pair keys are 1-based "ij" with i < j. Unknown keys are rejected. The
/// optional "time" key sets the initial time. Triangle conditions are not
/// checked here.
InitialConditions parse_initial_conditions(const std::string& text, const std::string& source = "<input>");
InitialConditions load_initial_conditions(const std::string& path);

/// Fixed-format number used in every CSV and JSON file (shortest form that
/// round-trips, so identical runs give identical bytes).
std::string format_number(double x);

/// Header t,R.x,R.y,R.z,q12.x,...,qdot12.x,...,E_pair,tri_residual and one
/// row per sample.
void write_trajectory_csv(std::ostream& os, const Trajectory<double>& traj);
void write_trajectory_json(std::ostream& os, const Trajectory<double>& traj);

/// Body-space rows t,r1.x,...,v1.x,...,E for the oracle run.
void write_body_trajectory_csv(std::ostream& os, const oracle::BodyTrajectory<double>& traj);

}  // namespace pairspace::io
