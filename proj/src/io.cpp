#include "pairspace/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace pairspace::io {

namespace {

using nlohmann::json;

// Line of the first occurrence of "key" in the raw text, or 0.
int line_of(const std::string& text, const std::string& key, std::size_t from = 0) {
  const std::size_t pos = text.find("\"" + key + "\"", from);
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

class Reader {
 public:
  Reader(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    std::string where = source_;
    if (const int line = line_of(text_, key); line > 0) where += ":" + std::to_string(line);
    throw InputError(where + ": " + what);
  }

  void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& context) const {
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.count(key)) fail(key, "unknown key \"" + key + "\" in " + context);
    }
  }

  double number(const json& v, const std::string& key) const {
    if (!v.is_number()) fail(key, "\"" + key + "\" must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "\"" + key + "\" must be finite");
    return x;
  }

  Vec3d vec3(const json& v, const std::string& key) const {
    if (!v.is_array() || v.size() != 3) fail(key, "\"" + key + "\" must be an array of three numbers");
    Vec3d out;
    for (int c = 0; c < 3; ++c) out[c] = number(v[static_cast<std::size_t>(c)], key);
    return out;
  }

 private:
  const std::string& text_;
  std::string source_;
};

// "ij" with 1-based i < j, both within [1, n].
std::pair<int, int> parse_pair_key(const Reader& rd, const std::string& key, int n) {
  const auto bad = [&] { rd.fail(key, "pair key \"" + key + "\" must be \"ij\" with 1 <= i < j <= " + std::to_string(n)); };
  if (key.size() < 2) bad();
  // "i_j" is accepted too, for N >= 10.
  int i = 0;
  int j = 0;
  if (const auto sep = key.find('_'); sep != std::string::npos) {
    try {
      i = std::stoi(key.substr(0, sep));
      j = std::stoi(key.substr(sep + 1));
    } catch (const std::exception&) {
      bad();
    }
  } else {
    if (key.size() != 2 || !std::isdigit(key[0]) || !std::isdigit(key[1])) bad();
    i = key[0] - '0';
    j = key[1] - '0';
  }
  if (i < 1 || j <= i || j > n) bad();
  return {i - 1, j - 1};
}

}  // namespace

InitialConditions parse_initial_conditions(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(source + ": " + e.what());
  }
  const Reader rd(text, source);
  if (!doc.is_object()) throw InputError(source + ":1: top level must be a JSON object");
  rd.reject_unknown(doc, {"masses", "bodies", "pairs", "time", "comment"}, "initial conditions");

  if (!doc.contains("masses")) throw InputError(source + ": missing \"masses\"");
  const json& jm = doc["masses"];
  if (!jm.is_array() || jm.size() < 2) rd.fail("masses", "\"masses\" must be an array of at least two numbers");
  std::vector<double> masses;
  for (const auto& v : jm) {
    const double m = rd.number(v, "masses");
    if (!(m > 0)) rd.fail("masses", "masses must be positive");
    masses.push_back(m);
  }
  const int n = static_cast<int>(masses.size());

  InitialConditions ic{MassSystem<double>(masses), PairState<double>(n), false};
  const bool has_bodies = doc.contains("bodies");
  const bool has_pairs = doc.contains("pairs");
  if (has_bodies == has_pairs) throw InputError(source + ": exactly one of \"bodies\" or \"pairs\" is required");

  if (has_bodies) {
    const json& jb = doc["bodies"];
    if (!jb.is_array() || static_cast<int>(jb.size()) != n) {
      rd.fail("bodies", "\"bodies\" must list one entry per mass (" + std::to_string(n) + ")");
    }
    BodyState<double> b(n);
    for (int i = 0; i < n; ++i) {
      const json& e = jb[static_cast<std::size_t>(i)];
      if (!e.is_object()) rd.fail("bodies", "body " + std::to_string(i + 1) + " must be an object");
      rd.reject_unknown(e, {"r", "v"}, "body " + std::to_string(i + 1));
      if (!e.contains("r") || !e.contains("v")) rd.fail("bodies", "body " + std::to_string(i + 1) + " needs \"r\" and \"v\"");
      b.r[static_cast<std::size_t>(i)] = rd.vec3(e["r"], "r");
      b.rdot[static_cast<std::size_t>(i)] = rd.vec3(e["v"], "v");
    }
    ic.state = bodies_to_pairs(b, ic.masses);
    ic.from_bodies = true;
  } else {
    const json& jp = doc["pairs"];
    if (!jp.is_object()) rd.fail("pairs", "\"pairs\" must be an object");
    rd.reject_unknown(jp, {"R", "Rdot", "q", "qdot"}, "\"pairs\"");
    if (jp.contains("R")) ic.state.R = rd.vec3(jp["R"], "R");
    if (jp.contains("Rdot")) ic.state.Rdot = rd.vec3(jp["Rdot"], "Rdot");
    for (const char* field : {"q", "qdot"}) {
      if (!jp.contains(field)) rd.fail("pairs", std::string("\"pairs\" needs \"") + field + "\"");
      const json& jq = jp[field];
      if (!jq.is_object()) rd.fail(field, std::string("\"") + field + "\" must be an object keyed by pair");
      std::vector<bool> seen(static_cast<std::size_t>(pair_count(n)), false);
      for (const auto& [key, value] : jq.items()) {
        const auto [i, j] = parse_pair_key(rd, key, n);
        const Vec3d v = rd.vec3(value, key);
        const auto idx = PairIndex::of(i, j, n);
        seen[static_cast<std::size_t>(idx.slot)] = true;
        if (std::string(field) == "q") ic.state.set_pos(i, j, v);
        else ic.state.set_vel(i, j, v);
      }
      for (int slot = 0; slot < pair_count(n); ++slot) {
        if (!seen[static_cast<std::size_t>(slot)]) {
          const auto [i, j] = pair_of_slot(slot, n);
          rd.fail(field, std::string("\"") + field + "\" is missing pair \"" + std::to_string(i + 1) +
                             std::to_string(j + 1) + "\"");
        }
      }
    }
  }
  if (doc.contains("time")) ic.state.time = rd.number(doc["time"], "time");
  return ic;
}

InitialConditions load_initial_conditions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_initial_conditions(buf.str(), path);
}

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string pair_name(int slot, int n) {
  const auto [i, j] = pair_of_slot(slot, n);
  if (n < 10) return std::to_string(i + 1) + std::to_string(j + 1);
  return std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory<double>& traj) {
  if (traj.samples.empty()) return;
  const int n = traj.samples.front().state.n_bodies;
  const int p = pair_count(n);
  os << "t,R.x,R.y,R.z";
  for (int s = 0; s < p; ++s) os << ",q" << pair_name(s, n) << ".x,q" << pair_name(s, n) << ".y,q" << pair_name(s, n) << ".z";
  for (int s = 0; s < p; ++s) {
    os << ",qdot" << pair_name(s, n) << ".x,qdot" << pair_name(s, n) << ".y,qdot" << pair_name(s, n) << ".z";
  }
  os << ",E_pair,tri_residual\n";
  for (const auto& sample : traj.samples) {
    const auto& st = sample.state;
    os << format_number(sample.time);
    for (int c = 0; c < 3; ++c) os << ',' << format_number(st.R[c]);
    for (const auto& v : st.q)
      for (int c = 0; c < 3; ++c) os << ',' << format_number(v[c]);
    for (const auto& v : st.qdot)
      for (int c = 0; c < 3; ++c) os << ',' << format_number(v[c]);
    os << ',' << format_number(sample.diagnostics.energy) << ',' << format_number(sample.diagnostics.triangle_max_residual)
       << '\n';
  }
}

void write_trajectory_json(std::ostream& os, const Trajectory<double>& traj) {
  const auto vec = [](const Vec3d& v) { return json::array({v.x(), v.y(), v.z()}); };
  json samples = json::array();
  for (const auto& sample : traj.samples) {
    const int n = sample.state.n_bodies;
    json q = json::object();
    json qdot = json::object();
    json L = json::object();
    for (int s = 0; s < pair_count(n); ++s) {
      const auto key = pair_name(s, n);
      q[key] = vec(sample.state.q[static_cast<std::size_t>(s)]);
      qdot[key] = vec(sample.state.qdot[static_cast<std::size_t>(s)]);
      L[key] = vec(sample.diagnostics.pair_angular_momenta[static_cast<std::size_t>(s)]);
    }
    samples.push_back({{"t", sample.time},
                       {"R", vec(sample.state.R)},
                       {"Rdot", vec(sample.state.Rdot)},
                       {"q", q},
                       {"qdot", qdot},
                       {"T", sample.diagnostics.kinetic},
                       {"V", sample.diagnostics.potential},
                       {"E_pair", sample.diagnostics.energy},
                       {"tri_residual", sample.diagnostics.triangle_max_residual},
                       {"L", L}});
  }
  os << json{{"dt", traj.dt}, {"samples", samples}}.dump(1) << '\n';
}

void write_body_trajectory_csv(std::ostream& os, const oracle::BodyTrajectory<double>& traj) {
  if (traj.samples.empty()) return;
  const int n = traj.samples.front().state.size();
  os << 't';
  for (int i = 1; i <= n; ++i) os << ",r" << i << ".x,r" << i << ".y,r" << i << ".z";
  for (int i = 1; i <= n; ++i) os << ",v" << i << ".x,v" << i << ".y,v" << i << ".z";
  os << ",E\n";
  for (const auto& sample : traj.samples) {
    os << format_number(sample.time);
    for (const auto& v : sample.state.r)
      for (int c = 0; c < 3; ++c) os << ',' << format_number(v[c]);
    for (const auto& v : sample.state.rdot)
      for (int c = 0; c < 3; ++c) os << ',' << format_number(v[c]);
    os << ',' << format_number(sample.energy) << '\n';
  }
}

}  // namespace pairspace::io
