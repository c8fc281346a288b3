#include "pairspace/verify.hpp"

#include "pairspace/pairspace.hpp"
#include "pairspace/sampling.hpp"
#include "pairspace/sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>

namespace pairspace::verify {

namespace {

using sampling::Rng;

// Accumulates the worst error of one check across instances.
struct Tally {
  double worst = 0.0;
  int instances = 0;
  bool bad = false;  // NaN or a failed boolean condition

  void add(double err) {
    ++instances;
    if (!(err == err)) bad = true;
    else worst = std::max(worst, err);
  }
  void require(bool ok) {
    ++instances;
    if (!ok) {
      bad = true;
      worst += 1.0;
    }
  }
};

class Runner {
 public:
  Runner(const Options& opts, Summary& out) : opts_(opts), out_(out) {}

  void record(const std::string& suite, const std::string& name, const Tally& t, double limit) {
    out_.checks.push_back({suite, name, t.instances, t.worst, limit, !t.bad && t.worst <= limit});
  }

  // Each suite draws from its own stream so --only does not change the others.
  Rng rng_for(const std::string& suite) const {
    std::uint64_t h = opts_.seed;
    for (char c : suite) h = h * 1099511628211ULL + static_cast<unsigned char>(c);
    return Rng(h);
  }

  int cases() const { return opts_.cases; }

 private:
  const Options& opts_;
  Summary& out_;
};

double rel(double err, double scale) { return scale > 0 ? err / scale : err; }

void suite_core(Runner& run) {
  Rng rng = run.rng_for("core");
  Tally body_trip;
  Tally pair_trip;
  Tally triangle;
  Tally mu;
  for (int n = 2; n <= 6; ++n) {
    for (int c = 0; c < run.cases(); ++c) {
      const auto ms = sampling::random_masses(rng, n);
      const auto b = sampling::random_bodies(rng, ms);
      const auto p = bodies_to_pairs(b, ms);
      const auto b2 = pairs_to_bodies(p, ms);
      double err = 0.0;
      double vscale = 0.0;
      for (int i = 0; i < n; ++i) vscale = std::max(vscale, b.rdot[i].norm());
      for (int i = 0; i < n; ++i) {
        err = std::max(err, (b2.r[i] - b.r[i]).norm() / length_scale(b));
        err = std::max(err, (b2.rdot[i] - b.rdot[i]).norm() / vscale);
      }
      body_trip.add(err);

      const auto p2 = bodies_to_pairs(b2, ms);
      double perr = 0.0;
      for (std::size_t k = 0; k < p.q.size(); ++k) {
        perr = std::max(perr, (p2.q[k] - p.q[k]).norm() / length_scale(p));
        perr = std::max(perr, (p2.qdot[k] - p.qdot[k]).norm() / vscale);
      }
      pair_trip.add(perr);
      triangle.add(max_triangle_residual(p).max_residual / length_scale(p));

      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          mu.add(rel(std::abs(ms.mu(i, j) - ms.mass(i) * ms.mass(j) / ms.total()), ms.mu(i, j)));
          for (int k = j + 1; k < n; ++k) {
            const double direct = ms.mass(i) * ms.mass(j) * ms.mass(k) / (ms.total() * ms.total());
            mu.add(rel(std::abs(ms.mu(k, i, j) - direct), direct));
          }
        }
    }
  }
  run.record("core", "round trip bodies->pairs->bodies", body_trip, 1e-12);
  run.record("core", "round trip pairs->bodies->pairs", pair_trip, 1e-12);
  run.record("core", "triangle residual of converted states", triangle, 1e-13);
  run.record("core", "reduced masses", mu, 1e-15);
}

void suite_kinetic(Runner& run) {
  Rng rng = run.rng_for("kinetic");
  Tally t;
  for (int n = 2; n <= 6; ++n) {
    for (int c = 0; c < run.cases(); ++c) {
      const auto ms = sampling::random_masses(rng, n);
      auto b = sampling::random_bodies(rng, ms);
      const Vec3d drift = rng.in_ball(1.0);  // non-barycentric velocities exercise the R term
      for (auto& v : b.rdot) v += drift;
      double direct = 0.0;
      for (int i = 0; i < n; ++i) direct += 0.5 * ms.mass(i) * b.rdot[i].squaredNorm();
      t.add(rel(std::abs(kinetic_energy(bodies_to_pairs(b, ms), ms) - direct), direct));
    }
  }
  run.record("kinetic", "pair kinetic energy equals body kinetic energy", t, 1e-12);
}

void suite_multipliers(Runner& run) {
  Rng rng = run.rng_for("multipliers");
  Tally row;
  Tally triple;
  Tally anti;
  Tally quartet;
  for (int c = 0; c < run.cases(); ++c) {
    const int n = 4 + (c % 2);
    const auto ms = sampling::random_masses(rng, n);
    const PotentialLaw<double> law(rng.uniform(0.5, 3.0));
    const auto s = bodies_to_pairs(sampling::random_bodies(rng, ms), ms);
    const ReducedGradients<double> a(s, ms, law);
    for (int i = 0; i < n; ++i) {
      Vec3d sum = Vec3d::Zero();
      double mag = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const Vec3d J = multiplier_sum_J(a, ms, i, j);
        sum += J;
        mag += J.norm();
      }
      row.add(rel(sum.norm(), mag));
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          if (i == j || j == k || i == k) continue;
          const Vec3d f = a.triplet(i, j, k);
          const Vec3d lhs = multiplier_sum_J(a, ms, i, j) / ms.mu(i, j) +
                            multiplier_sum_J(a, ms, j, k) / ms.mu(j, k) + multiplier_sum_J(a, ms, k, i) / ms.mu(k, i);
          const double scale = a(i, j).norm() + a(j, k).norm() + a(k, i).norm();
          triple.add(rel((lhs - f).norm(), scale));
          anti.add(rel((a.triplet(j, i, k) + f).norm(), scale));
          anti.add(rel((a.triplet(j, k, i) - f).norm(), scale));
          for (int d = 0; d < n; ++d) {
            if (d == i || d == j || d == k) continue;
            const Vec3d rhs = a.triplet(i, j, d) + a.triplet(j, k, d) + a.triplet(k, i, d);
            const double qscale = scale + a(i, d).norm() + a(j, d).norm() + a(k, d).norm();
            quartet.add(rel((f - rhs).norm(), qscale));
          }
        }
  }
  run.record("multipliers", "row sums of J vanish", row, 1e-12);
  run.record("multipliers", "J triple relation reproduces F", triple, 1e-12);
  run.record("multipliers", "F antisymmetric and cyclic", anti, 1e-12);
  run.record("multipliers", "F quartet relation", quartet, 1e-12);
}

void suite_dynamics(Runner& run) {
  Rng rng = run.rng_for("dynamics");
  const PotentialLaw<double> newton(1.0);

  Tally tri;
  for (int c = 0; c < run.cases(); ++c) {
    const auto ms = sampling::random_masses(rng, 3);
    const PotentialLaw<double> law(rng.uniform(0.5, 3.0));
    const auto s = bodies_to_pairs(sampling::random_bodies(rng, ms), ms);
    const auto acc = pair_accelerations(s, ms, law).qddot;
    const Vec3d sum = acc[0] + acc[2] - acc[1];  // slots 12, 13, 23: q12 + q23 + q31
    tri.add(rel(sum.norm(), std::max({acc[0].norm(), acc[1].norm(), acc[2].norm()})));
  }
  run.record("dynamics", "acceleration triangle sum", tri, 1e-12);

  const int heavy = std::max(1, std::min(run.cases(), 5));

  Tally circle;
  for (int c = 0; c < heavy; ++c) {
    const MassSystem<double> ms({rng.log_uniform(0.1, 10), rng.log_uniform(0.1, 10)});
    const double r = rng.uniform(0.5, 2.0);
    const double w = std::sqrt(ms.total() / (r * r * r));
    PairState<double> s(2);
    s.q[0] = Vec3d(r, 0, 0);
    s.qdot[0] = Vec3d(0, r * w, 0);
    IntegratorConfig cfg;
    cfg.t_end = 10 * 2 * pi<double>() / w;
    cfg.dt = 2 * pi<double>() / w / 1000;
    cfg.monitor_every = 50;
    double worst = 0.0;
    for (const auto& smp : integrate(s, ms, newton, cfg).samples)
      worst = std::max(worst, std::abs(smp.state.q[0].norm() - r) / r);
    circle.add(worst);
  }
  run.record("dynamics", "two-body circular radius over 10 periods", circle, 1e-6);

  Tally energy;
  Tally momentum;
  for (int c = 0; c < heavy; ++c) {
    const auto ms = sampling::random_masses(rng, 3, 0.5, 2.0);
    const auto s = bodies_to_pairs(sampling::hierarchical_triple(rng, ms), ms);
    IntegratorConfig cfg;
    cfg.t_end = 10 * dynamical_time(s, ms, newton);
    cfg.monitor_every = 100;
    const auto traj = integrate(s, ms, newton, cfg);
    const auto total_L = [](const Diagnostics<double>& d) {
      Vec3d L = Vec3d::Zero();
      for (const auto& l : d.pair_angular_momenta) L += l;
      return L;
    };
    const double E0 = traj.samples.front().diagnostics.energy;
    const Vec3d L0 = total_L(traj.samples.front().diagnostics);
    double dE = 0.0;
    double dL = 0.0;
    for (const auto& smp : traj.samples) {
      dE = std::max(dE, std::abs(smp.diagnostics.energy - E0) / std::abs(E0));
      dL = std::max(dL, (total_L(smp.diagnostics) - L0).norm() / L0.norm());
    }
    energy.add(traj.status == RunStatus::kCompleted ? dE : 1.0);
    momentum.add(dL);
  }
  run.record("dynamics", "pair energy drift over 10 dynamical times", energy, 1e-8);
  run.record("dynamics", "total pair angular momentum drift", momentum, 1e-8);

  Tally match;
  Tally com;
  for (int c = 0; c < heavy; ++c) {
    const int n = 3 + c % 3;
    const auto ms = sampling::random_masses(rng, n, 0.5, 2.0);
    auto b = sampling::rotating_cluster(rng, ms);
    const Vec3d shift = rng.in_ball(1.0);
    for (auto& v : b.rdot) v += shift;
    const auto s = bodies_to_pairs(b, ms);
    IntegratorConfig cfg;
    cfg.t_end = dynamical_time(s, ms, newton);
    cfg.monitor_every = 10;
    const auto pt = integrate(s, ms, newton, cfg);
    const auto bt = oracle::integrate_bodies(b, ms, newton, cfg);
    double err = 0.0;
    for (std::size_t k = 0; k < pt.samples.size() && k < bt.samples.size(); ++k) {
      const auto mapped = pairs_to_bodies(pt.samples[k].state, ms);
      const double L = length_scale(bt.samples[k].state);
      for (int i = 0; i < n; ++i) err = std::max(err, (mapped.r[i] - bt.samples[k].state.r[i]).norm() / L);
      const auto& st = pt.samples[k].state;
      const Vec3d expected = s.R + st.time * s.Rdot;
      com.add(std::max((st.R - expected).norm() / std::max(1.0, expected.norm()), (st.Rdot - s.Rdot).norm()));
    }
    match.add(pt.samples.size() == bt.samples.size() ? err : 1.0);
  }
  run.record("dynamics", "pair-space trajectory matches body-space oracle over 1 dynamical time", match, 1e-6);
  run.record("dynamics", "centre of mass moves uniformly", com, 1e-13);
}

void suite_threebody(Runner& run) {
  Rng rng = run.rng_for("threebody");
  Tally phi_J;
  Tally fund;
  Tally ang;
  Tally energy;
  Tally rate;
  Tally totalang;
  for (int c = 0; c < run.cases(); ++c) {
    const auto ms = sampling::random_masses(rng, 3);
    const PotentialLaw<double> law(rng.uniform(0.5, 3.0));
    const auto b = sampling::random_bodies(rng, ms);
    const auto s = bodies_to_pairs(b, ms);
    const Vec3d f = phi(s, ms, law);
    phi_J.add(rel((f - multiplier_sum_J(s, ms, law, 0, 1)).norm(), f.norm()));
    fund.add(rel((s.pos(0, 1).cross(f) - torque12_closed_form(s, ms, law)).norm(), s.pos(0, 1).norm() * f.norm()));

    Vec3d body_L = Vec3d::Zero();
    double body_T = 0.0;
    for (int i = 0; i < 3; ++i) {
      body_L += ms.mass(i) * b.r[i].cross(b.rdot[i]);
      body_T += 0.5 * ms.mass(i) * b.rdot[i].squaredNorm();
    }
    ang.add(rel((pair_angular_momenta(s, ms).total() - body_L).norm(), body_L.norm()));
    double body_V = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        body_V -= ms.mass(i) * ms.mass(j) / std::pow((b.r[i] - b.r[j]).norm(), law.n());
    const double body_E = body_T + body_V;
    energy.add(rel(std::abs(pair_energies(s, ms, law).total - body_E), std::abs(body_T) + std::abs(body_V)));

    const Vec3d vsum = s.vel(0, 1) + s.vel(1, 2) + s.vel(2, 0);
    const double vscale = std::max({s.vel(0, 1).norm(), s.vel(1, 2).norm(), s.vel(2, 0).norm()});
    rate.add(rel(std::abs(f.dot(vsum)), f.norm() * vscale));
    const Vec3d qsum = s.pos(0, 1) + s.pos(1, 2) + s.pos(2, 0);
    totalang.add(rel(qsum.cross(f).norm(), f.norm() * length_scale(s)));
  }
  run.record("threebody", "phi equals J_12", phi_J, 1e-12);
  run.record("threebody", "torque closed form", fund, 1e-12);
  run.record("threebody", "pair angular momenta sum to body angular momentum", ang, 1e-12);
  run.record("threebody", "pair energy equals body energy", energy, 1e-12);
  run.record("threebody", "energy rate term vanishes", rate, 1e-12);
  run.record("threebody", "total torque vanishes", totalang, 1e-12);

  Tally collinear;
  for (int c = 0; c < run.cases(); ++c) {
    const MassSystem<double> ms({rng.log_uniform(0.1, 10), rng.log_uniform(0.1, 10), rng.log_uniform(0.1, 10)});
    const PotentialLaw<double> law(rng.uniform(0.5, 3.0));
    const auto s = euler_initial_conditions(ms, law, rng.uniform(0.5, 2.0), CollinearMode::kCircular);
    const auto am = pair_angular_momenta(s, ms, law);
    const Vec3d f = phi(s, ms, law);
    for (std::size_t p = 0; p < 3; ++p) {
      const auto [i, j] = kCyclicPairs[p];
      collinear.add(rel(am.torque[p].norm(), s.pos(i, j).norm() * f.norm()));
    }
  }
  run.record("threebody", "collinear torques vanish", collinear, 1e-12);

  Tally lagrange;
  {
    const MassSystem<double> ms({1.0, 1.0, 1.0});
    const PotentialLaw<double> law(1.0);
    const auto s = lagrange_circular_initial(ms, law, 1.0);
    IntegratorConfig cfg;
    cfg.t_end = 5 * 2 * pi<double>() / lagrange_circular_omega(ms, law, 1.0);
    cfg.monitor_every = 100;
    const auto v = conservation_classifier(integrate(s, ms, law, cfg).samples, ms);
    lagrange.require(v.verdict == ConservationClass::kAllConserved);
  }
  run.record("threebody", "Lagrange orbit conserves every L_ij", lagrange, 0.0);

  Tally generic;
  for (int c = 0; c < std::max(1, std::min(run.cases(), 3)); ++c) {
    const auto ms = sampling::random_masses(rng, 3, 0.5, 2.0);
    const PotentialLaw<double> law(1.0);
    const auto s = bodies_to_pairs(sampling::random_bodies(rng, ms, 0.5, 0.3), ms);
    IntegratorConfig cfg;
    cfg.t_end = 5 * dynamical_time(s, ms, law);
    cfg.monitor_every = 20;
    const auto v = conservation_classifier(integrate(s, ms, law, cfg).samples, ms);
    generic.require(v.verdict == ConservationClass::kNoneConserved);
  }
  run.record("threebody", "generic orbit conserves no L_ij", generic, 0.0);
}

void suite_central(Runner& run) {
  Rng rng = run.rng_for("central");
  Tally forms;
  Tally xl;
  Tally decomposition;
  Tally positive;
  Tally fd;
  Tally inversion;
  Tally quintic;
  Tally monotone;
  const double exponents[] = {0.5, 1.0, 2.0, 3.0};
  for (int c = 0; c < run.cases(); ++c) {
    const double m1 = rng.log_uniform(0.1, 10);
    const double m2 = rng.log_uniform(0.1, 10);
    const double m3 = rng.log_uniform(0.1, 10);
    const MassSystem<double> ms({m1, m2, m3});
    const PotentialLaw<double> law(exponents[c % 4]);
    const double x = rng.log_uniform(1e-2, 1e2);
    const double scale = E_scale(x, ms, law);
    forms.add(rel(std::abs(E_of_x(x, ms, law) - E_of_x_expanded(x, ms, law)), scale));
    const double xL = x_L(ms, law);
    xl.add(rel(std::abs(E_of_x(xL, ms, law) - E_at_x_L(ms, law)), E_scale(xL, ms, law)));
    const double parts = m1 * Q_of_x(x, 0, ms, law) + m3 * x * R_of_x(x, 2, ms, law);
    decomposition.add(rel(std::abs(E_of_x(x, ms, law) - parts), scale));

    int negative = 0;
    double worst_fd = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double xs = std::pow(10.0, -3.0 + 6.0 * k / 999.0);
      const double d = E_derivative(xs, ms, law);
      if (!(d > 0)) ++negative;
      if (k % 50 == 0) {
        const double h = 1e-5 * xs;
        const double num = (E_of_x(xs + h, ms, law) - E_of_x(xs - h, ms, law)) / (2 * h);
        worst_fd = std::max(worst_fd, std::abs(num - d) / std::abs(d));
      }
    }
    positive.require(negative == 0);
    fd.add(worst_fd);

    const double alpha = euler_alpha(ms, law).alpha;
    const double inv = euler_alpha(MassSystem<double>({m3, m2, m1}), law).alpha;
    inversion.add(std::abs(inv * alpha - 1));

    const PotentialLaw<double> newton(1.0);
    const double a1 = euler_alpha(ms, newton).alpha;
    quintic.add(std::abs(a1 * a1 * (1 + a1) * (1 + a1) * E_of_x(a1, ms, newton)) / ms.total());

    double prev = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (double n : {0.5, 1.0, 2.0, 3.0, 10.0, 50.0}) {
      const double gap = std::abs(euler_alpha(ms, PotentialLaw<double>(n)).alpha - 1);
      ok = ok && gap <= prev;
      prev = gap;
    }
    monotone.require(ok);
  }
  run.record("central", "E expanded form agrees", forms, 1e-12);
  run.record("central", "E at x_L closed form", xl, 1e-12);
  run.record("central", "E = m1 Q1 + m3 x R3", decomposition, 1e-12);
  run.record("central", "E' positive at 1000 points", positive, 0.0);
  run.record("central", "E' matches finite differences", fd, 1e-6);
  run.record("central", "reversed masses give 1/alpha", inversion, 1e-10);
  run.record("central", "Euler quintic at alpha (n=1, per unit M)", quintic, 1e-10);
  run.record("central", "|alpha - 1| shrinks as n grows", monotone, 0.0);

  Tally rot;
  const Mat3d r = rotation_third<double>();
  const Mat3d sum = Mat3d::Identity() + r + r * r;
  rot.add(sum.topLeftCorner<2, 2>().cwiseAbs().maxCoeff());
  rot.add((r * r * r - Mat3d::Identity()).cwiseAbs().maxCoeff());
  run.record("central", "rotation by a third: planar identity and cube", rot, 1e-15);
}

void suite_bounds(Runner& run) {
  Rng rng = run.rng_for("bounds");
  Tally t;
  const double exponents[] = {0.5, 1.0, 2.0, 3.0};
  for (int c = 0; c < run.cases(); ++c) {
    const std::array<double, 3> m{rng.log_uniform(0.01, 100), rng.log_uniform(0.01, 100), rng.log_uniform(0.01, 100)};
    for (double n : exponents) t.add(static_cast<double>(sweep::analyze(m, n).violations.size()));
  }
  run.record("bounds", "bounds, cases and sigma/tau properties", t, 0.0);
}

const std::map<std::string, std::function<void(Runner&)>>& registry() {
  static const std::map<std::string, std::function<void(Runner&)>> r{
      {"core", suite_core},           {"kinetic", suite_kinetic}, {"multipliers", suite_multipliers},
      {"dynamics", suite_dynamics},   {"threebody", suite_threebody},   {"central", suite_central},
      {"bounds", suite_bounds}};
  return r;
}

}  // namespace

int Summary::failures() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"core",     "kinetic", "multipliers", "dynamics",
                                              "threebody", "central",    "bounds"};
  return names;
}

Summary run(const Options& opts) {
  if (opts.cases < 1) throw DomainError("--cases must be at least 1");
  for (const auto& name : opts.only) {
    if (!registry().count(name)) throw DomainError("unknown suite \"" + name + "\"");
  }
  Summary out;
  out.seed = opts.seed;
  out.cases = opts.cases;
  Runner runner(opts, out);
  for (const auto& name : suite_names()) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), name) == opts.only.end()) continue;
    registry().at(name)(runner);
  }
  return out;
}

void write_text(std::ostream& os, const Summary& s) {
  os << "seed " << s.seed << ", " << s.cases << " cases per check\n";
  for (const auto& c : s.checks) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e <= %.1e", c.worst, c.limit);
    os << (c.passed ? "PASS " : "FAIL ") << c.suite << ": " << c.name << " [" << buf << ", " << c.instances << " instances]\n";
  }
  os << s.checks.size() - static_cast<std::size_t>(s.failures()) << " passed, " << s.failures() << " failed\n";
}

void write_json(std::ostream& os, const Summary& s) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : s.checks) {
    checks.push_back({{"suite", c.suite},
                      {"name", c.name},
                      {"instances", c.instances},
                      {"worst", c.worst},
                      {"limit", c.limit},
                      {"passed", c.passed}});
  }
  os << nlohmann::json{{"seed", s.seed}, {"cases", s.cases}, {"failures", s.failures()}, {"checks", checks}}.dump(1)
     << '\n';
}

}  // namespace pairspace::verify
