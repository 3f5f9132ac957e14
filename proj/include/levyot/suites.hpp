// Copyright 2026 The levyot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded invariant suites shared by `levyot verify` and the acceptance
// runner. A suite runs n independent instances; each instance records named
// checks, and a failing instance yields a JSON reproducer that `verify
// --replay` can rerun.

#ifndef LEVYOT_SUITES_HPP_
#define LEVYOT_SUITES_HPP_

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "levyot/bounds.hpp"
#include "levyot/families.hpp"
#include "levyot/io.hpp"
#include "levyot/measures.hpp"
#include "levyot/parallel.hpp"
#include "levyot/random.hpp"
#include "levyot/transport.hpp"
#include "levyot/viscosity.hpp"

namespace levyot::suites {

using io::Json;

struct Tolerances {
  double gap = 1e-9;         // relative duality gap
  double symmetry = 1e-10;   // |d(a,b) - d(b,a)|
  double triangle = 1e-8;    // triangle inequality slack
  double oracle = 1e-10;     // solver vs enumeration
  double ksupport = 1e-9;    // K-membership of used arcs
  double bound = 1e-8;       // bound dominance slack
  double semiconvex = 1e-8;  // second differences of sup-convolutions
  double coupling = 1e-8;    // coupling inequality slack
  double sweep = 0.1;        // relative slack over quadrature estimates

  void set(const std::string& name, double value) {
    std::map<std::string, double*> slots{
        {"gap", &gap},           {"symmetry", &symmetry},     {"triangle", &triangle},
        {"oracle", &oracle},     {"ksupport", &ksupport},     {"bound", &bound},
        {"semiconvex", &semiconvex}, {"coupling", &coupling}, {"sweep", &sweep}};
    auto it = slots.find(name);
    if (it == slots.end()) throw InvalidInput("unknown tolerance \"" + name + "\"");
    require(std::isfinite(value) && value >= 0.0, "tolerance " + name + " must be >= 0");
    *it->second = value;
  }
};

struct CheckLine {
  std::string name;
  bool pass = true;
  double worst = 0.0;  // largest observed value of the checked quantity
  std::size_t failures = 0;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t instances = 0;
  double seconds = 0.0;
  std::vector<CheckLine> checks;
  std::vector<Json> reproducers;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.pass; });
  }
  const CheckLine* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

// Per-instance record: named checks with the measured value and verdict,
// plus the instance data serialized on demand for reproducers.
class Instance {
 public:
  Instance(std::uint64_t seed, std::size_t index) : rng(instance_rng(seed, index)), index_(index) {}

  void check(const std::string& name, double value, bool ok) {
    entries_.push_back({name, value, ok});
  }
  void note(const std::string& key, Json value) { data_[key] = std::move(value); }

  bool failed() const {
    return std::any_of(entries_.begin(), entries_.end(), [](const Entry& e) { return !e.ok; });
  }

  struct Entry {
    std::string name;
    double value;
    bool ok;
  };
  const std::vector<Entry>& entries() const { return entries_; }
  const Json& data() const { return data_; }
  std::size_t index() const { return index_; }

  Rng rng;

 private:
  std::size_t index_;
  std::vector<Entry> entries_;
  Json data_ = Json::object();
};

using InstanceFn = std::function<void(Instance&, const Tolerances&)>;

struct SuiteSpec {
  std::string name;
  std::string summary;
  std::size_t default_n = 1;
  InstanceFn run;
  // Optional cross-instance checks, run after every instance has finished.
  std::function<void(const std::vector<Instance>&, SuiteResult&)> finalize;
};

namespace detail {

inline const std::array<double, 3> kExponents{1.0, 1.5, 2.0};

// Records plan feasibility, certified optimality and K-support of a solve.
inline void certify(Instance& in, const SolveReport& r, const DiscreteMeasure& mu,
                    const DiscreteMeasure& nu, double p, const Tolerances& tol) {
  const bool feasible = verify_plan(r.plan, mu, nu).empty();
  in.check("plan_feasible", feasible ? 0.0 : 1.0, feasible);
  const auto dv = find_dual_violation(r.duals, mu, nu, p);
  in.check("duals_feasible", dv ? dv->excess : 0.0, !dv);
  const double primal = plan_cost(r.plan, mu, nu, CostSpec{p});
  const double dual = dual_objective(r.duals, mu, nu);
  const double rel = std::abs(primal - dual) / (1.0 + primal);
  in.check("strong_duality", rel, rel <= tol.gap);
  const auto ks = k_support_check(r.plan, mu, nu, p, tol.ksupport);
  in.check("k_support", static_cast<double>(ks.size()), ks.empty());
}

inline std::pair<DiscreteMeasure, DiscreteMeasure> weighted_pair(Instance& in, std::size_t dim,
                                                                 double radius) {
  RandomMeasureSpec spec{dim, 40, 0, radius, false};
  auto mu = random_measure(in.rng, spec);
  auto nu = random_neighbor(in.rng, mu, spec);
  return {mu, nu};
}

// ---------------------------------------------------------------------------

inline void duality_instance(Instance& in, const Tolerances& tol) {
  const std::size_t k = in.index();
  const std::size_t dim = 1 + k % 3;
  const double p = kExponents[(k / 3) % 3];
  auto [mu, nu] = weighted_pair(in, dim, 1.5);
  in.note("p", p);
  in.note("mu", io::measure_to_json(mu));
  in.note("nu", io::measure_to_json(nu));
  certify(in, solve(mu, nu, CostSpec{p}), mu, nu, p, tol);
}

inline void metric_instance(Instance& in, const Tolerances& tol) {
  const std::size_t k = in.index();
  const std::size_t dim = 1 + k % 3;
  const double p = kExponents[(k / 3) % 3];
  RandomMeasureSpec spec{dim, 40, 0, 1.5, false};
  auto m1 = random_measure(in.rng, spec);
  auto m2 = random_neighbor(in.rng, m1, spec);
  auto m3 = random_neighbor(in.rng, m2, spec);
  in.note("p", p);
  in.note("mu1", io::measure_to_json(m1));
  in.note("mu2", io::measure_to_json(m2));
  in.note("mu3", io::measure_to_json(m3));
  const auto r12 = solve(m1, m2, CostSpec{p});
  const auto r21 = solve(m2, m1, CostSpec{p});
  const auto r23 = solve(m2, m3, CostSpec{p});
  const auto r13 = solve(m1, m3, CostSpec{p});
  const auto r11 = solve(m1, m1, CostSpec{p});
  certify(in, r12, m1, m2, p, tol);
  certify(in, r21, m2, m1, p, tol);
  certify(in, r23, m2, m3, p, tol);
  certify(in, r13, m1, m3, p, tol);
  certify(in, r11, m1, m1, p, tol);
  auto dist = [p](const SolveReport& r) { return std::pow(std::max(0.0, r.value), 1.0 / p); };
  const double asym = std::abs(dist(r12) - dist(r21));
  in.check("symmetry", asym, asym <= tol.symmetry);
  const double excess = dist(r13) - dist(r12) - dist(r23);
  in.check("triangle", excess, excess <= tol.triangle);
  in.check("self_distance_zero", dist(r11), dist(r11) == 0.0);
  const bool zero12 = dist(r12) == 0.0, tv12 = tv_distance(m1, m2) == 0.0;
  in.check("zero_iff_equal", zero12 == tv12 ? 0.0 : 1.0, zero12 == tv12);
}

inline void oracle_instance(Instance& in, const Tolerances& tol) {
  const std::size_t k = in.index();
  const std::size_t dim = 1 + k % 3;
  const double p = kExponents[(k / 3) % 3];
  RandomMeasureSpec spec{dim, 5, 0, 1.2, true};
  auto mu = random_measure(in.rng, spec);
  auto nu = random_measure(in.rng, spec);
  in.note("p", p);
  in.note("mu", io::measure_to_json(mu));
  in.note("nu", io::measure_to_json(nu));
  const auto r = solve(mu, nu, CostSpec{p});
  const double diff = std::abs(r.value - brute_force_unit(mu, nu, p));
  in.check("oracle_equivalence", diff, diff <= tol.oracle);
  certify(in, r, mu, nu, p, tol);
}

// Maps T(z) = A z + b with A near the identity, for push-forward bounds.
struct AffineMap {
  std::vector<double> a;  // row-major dim x dim
  std::vector<double> b;
  Point operator()(PointView z) const {
    const std::size_t d = b.size();
    Point out(b);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) out[r] += a[r * d + c] * z[c];
    }
    return out;
  }
  Json to_json() const { return {{"a", a}, {"b", b}}; }
};

inline AffineMap random_affine(Rng& rng, std::size_t d) {
  AffineMap m{std::vector<double>(d * d), std::vector<double>(d)};
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) m.a[r * d + c] = (r == c ? 1.0 : 0.0) + uniform(rng, -0.3, 0.3);
    m.b[r] = uniform(rng, -0.2, 0.2);
  }
  return m;
}

inline void bounds_instance(Instance& in, const Tolerances& tol) {
  const std::size_t k = in.index();
  const std::size_t dim = 1 + k % 3;
  const double p = kExponents[(k / 3) % 3];
  auto [mu, nu] = weighted_pair(in, dim, 0.99);
  const double r = uniform(in.rng, 0.05, 1.0);
  const double a = uniform(in.rng, 0.02, 0.6);
  const double b = uniform(in.rng, a + 0.05, 1.0);
  const auto psi = RadialTestFunction::hat(a, b, uniform(in.rng, -1.0, 1.0));
  const auto t1 = random_affine(in.rng, dim), t2 = random_affine(in.rng, dim);
  in.note("p", p);
  in.note("mu", io::measure_to_json(mu));
  in.note("nu", io::measure_to_json(nu));
  in.note("r", r);
  in.note("psi", {{"radii", psi.radii()}, {"values", psi.values()}});
  in.note("t1", t1.to_json());
  in.note("t2", t2.to_json());

  auto record = [&](const BoundCheck& c) {
    const double allowed = tol.bound + kBoundRelSlack * std::abs(c.rhs);
    in.check(c.name, -c.slack(), c.slack() >= -allowed);
  };
  record(check_tv_power_bound(mu, nu, p));
  record(check_positive_part_dual_bound(combine(mu, nu), nu, p));
  record(check_restriction_bound(mu, r, p));
  record(check_pushforward_bound(t1, t2, mu, dim, p));
  record(restricted_integral_bound(mu, nu, psi, p));
}

// ---------------------------------------------------------------------------
// Sweeps.

inline KernelFamily sweep_kernel() { return make_sinusoidal_kernel(1, 0.5, 1.0, 0.5, 1.0, true); }
inline AnnularGrid sweep_kernel_grid() { return AnnularGrid{1e-3, 1.0, 200, 1}; }

// One pair per instance: delta log-spaced over [1e-3, 0.5] across n.
inline SweepPair indexed_pair(Instance& in, std::size_t n) {
  const double t = n > 1 ? static_cast<double>(in.index()) / static_cast<double>(n - 1) : 0.0;
  const double delta = 1e-3 * std::pow(0.5 / 1e-3, t);
  const double x = uniform(in.rng, -1.0, 1.0);
  const double sign = uniform(in.rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
  return {{x}, {x + sign * delta}};
}

inline void kernel_sweep_instance(Instance& in, const Tolerances& tol, std::size_t n) {
  const auto fam = sweep_kernel();
  const auto grid = sweep_kernel_grid();
  const auto pr = indexed_pair(in, n);
  in.note("x", pr.x);
  in.note("y", pr.y);
  auto make = [&](PointView x) { return decompose(discretize_kernel(fam, x, grid)).hat; };
  const auto rep = regularity_sweep(make, {pr}, 1.0, 1.0);
  const double sep = rep.rows[0].separation;
  const double est = kernel_distance_estimate(fam, pr.x, pr.y, 1.0) / sep;
  const double ratio = rep.rows[0].ratio;
  in.note("ratio", ratio);
  in.note("estimate", est);
  in.check("ratio_below_estimate", ratio / std::max(est, 1e-300),
           ratio <= (1.0 + tol.sweep) * est);
  in.check("ratio", ratio, std::isfinite(ratio));
}

inline FracLaplFamily sweep_fraclap() { return make_sinusoidal_fraclap(1, 1.5, 0.5, 0.25, 1.0); }
inline AnnularGrid sweep_fraclap_grid() { return AnnularGrid{1e-3, 1.0, 120, 1}; }

inline void fraclap_instance(Instance& in, const Tolerances&, std::size_t n) {
  const double p = 1.75;
  const auto fam = sweep_fraclap();
  const auto grid = sweep_fraclap_grid();
  const auto pr = indexed_pair(in, n);
  in.note("x", pr.x);
  in.note("y", pr.y);
  auto make = [&](PointView x) { return split_fraclap(fam, x, grid).hat; };
  const auto rep = regularity_sweep(make, {pr}, p, 1.0);
  const double ratio = rep.rows[0].ratio;
  // Coupling z -> (r_y / r_x) z of the shared reference gives
  // d <= |r_x - r_y| (sum w |z|^p)^{1/p} <= L |x - y| (sum w |z|^p)^{1/p}.
  FracLaplFamily ref = fam;
  ref.a = [](PointView) { return 1.0; };
  const double moment = power_moment(split_fraclap(ref, Point{0.0}, grid).hat, p);
  const double coupling = fam.lipschitz_L * std::pow(moment, 1.0 / p);
  const auto mt = mutilde_checks(fam, pr.x, pr.y);
  const double l2 = mutilde_lipschitz_constant(fam);
  in.note("ratio", ratio);
  in.note("separation", rep.rows[0].separation);
  in.note("mutilde_ratio", mt.lipschitz_ratio);
  in.check("hat_ratio", ratio, std::isfinite(ratio) && ratio <= coupling * (1.0 + 1e-9));
  in.check("mutilde_ratio", mt.lipschitz_ratio,
           std::isfinite(mt.lipschitz_ratio) && mt.lipschitz_ratio <= l2);
  in.check("mutilde_mass", mt.mass_x, std::isfinite(mt.mass_x));
}

// Stability of the sweep: the largest ratio over the last decade of
// separations, [1e-3, 1e-2), is within 25% of the one over [1e-2, 1e-1).
inline void fraclap_stability(const std::vector<Instance>& done, SuiteResult& out) {
  double last = 0.0, previous = 0.0;
  for (const auto& in : done) {
    const double sep = in.data().value("separation", 0.0);
    const double ratio = in.data().value("ratio", 0.0);
    if (sep < 1e-2) {
      last = std::max(last, ratio);
    } else if (sep < 1e-1) {
      previous = std::max(previous, ratio);
    }
  }
  const double drift = previous > 0.0 ? std::abs(last - previous) / previous : INFINITY;
  CheckLine line{"last_decade_stable", drift <= 0.25, drift, drift <= 0.25 ? 0u : 1u, ""};
  line.detail = "max ratio " + io::fmt(last) + " on [1e-3, 1e-2) vs " + io::fmt(previous) +
                " on [1e-2, 1e-1)";
  out.checks.push_back(line);
}

// ---------------------------------------------------------------------------
// Sup/inf-convolution properties on random bounded grid functions.

inline GridFunction random_grid_function(Rng& rng, std::size_t dim, std::size_t n) {
  struct Wave {
    Point k;
    double phase, amp;
  };
  std::vector<Wave> waves;
  for (int w = 0; w < 3; ++w) {
    Wave wave{Point(dim), uniform(rng, 0.0, 6.3), uniform(rng, 0.2, 1.0)};
    for (auto& c : wave.k) c = uniform(rng, -8.0, 8.0);
    waves.push_back(wave);
  }
  const Point center = random_point(rng, dim, 0.8);
  const double height = uniform(rng, -1.0, 1.0);
  const double cut = uniform(rng, 0.1, 0.5);
  return GridFunction::sample(Point(dim, -1.0), Point(dim, 1.0), std::vector<std::size_t>(dim, n),
                              [&](PointView x) {
                                double v = 0.0;
                                for (const auto& w : waves) {
                                  double arg = w.phase;
                                  for (std::size_t c = 0; c < dim; ++c) arg += w.k[c] * x[c];
                                  v += w.amp * std::sin(arg);
                                }
                                // A jump keeps the functions merely bounded.
                                if (squared_distance(x, center) < cut * cut) v += height;
                                return v;
                              });
}

inline void convolution_instance(Instance& in, const Tolerances& tol) {
  const std::size_t dim = in.index() % 2 == 0 ? 1 : 2;
  const std::size_t n = dim == 1 ? 512 : 64;
  const auto u = random_grid_function(in.rng, dim, n);
  in.note("dim", dim);
  in.note("nodes_per_axis", n);
  const std::vector<double> deltas{1e-1, 1e-2, 1e-3};
  std::vector<ConvolutionResult> sup, inf;
  for (double d : deltas) {
    sup.push_back(sup_convolution_with_argmax(u, d));
    inf.push_back(inf_convolution_with_argmax(u, d));
  }
  // (1) monotone in delta, (2) ordering against u.
  double mono = 0.0, order = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    for (std::size_t a = 0; a + 1 < deltas.size(); ++a) {
      mono = std::max(mono, sup[a + 1].value[k] - sup[a].value[k]);  // smaller delta below
      mono = std::max(mono, inf[a].value[k] - inf[a + 1].value[k]);
    }
    for (std::size_t a = 0; a < deltas.size(); ++a) {
      order = std::max(order, u[k] - sup[a].value[k]);
      order = std::max(order, inf[a].value[k] - u[k]);
    }
  }
  in.check("delta_monotone", mono, mono <= 0.0);
  in.check("ordering", order, order <= 0.0);
  // (3) sup distance to u shrinks with delta.
  double prev = INFINITY, growth = 0.0;
  for (std::size_t a = 0; a < deltas.size(); ++a) {
    double gap = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) gap = std::max(gap, sup[a].value[k] - u[k]);
    growth = std::max(growth, gap - prev);
    prev = gap;
  }
  in.check("convergence_monotone", growth, growth <= 0.0);
  // (4) semiconvexity: second differences of u^delta >= -2/delta.
  double semi = 0.0;
  for (std::size_t a = 0; a < deltas.size(); ++a) {
    const auto& g = sup[a].value;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const auto idx = g.multi_index(k);
      for (std::size_t ax = 0; ax < dim; ++ax) {
        if (idx[ax] == 0 || idx[ax] + 1 == g.shape(ax)) continue;
        auto lo = idx, hi = idx;
        --lo[ax];
        ++hi[ax];
        const double h = g.spacing(ax);
        const double d2 = (g[g.flat_index(lo)] + g[g.flat_index(hi)] - 2.0 * g[k]) / (h * h);
        semi = std::max(semi, -2.0 / deltas[a] - d2);
      }
    }
  }
  in.check("semiconvexity", semi, semi <= tol.semiconvex);
  // (5) maximizers stay within (2 delta |u|)^{1/2}.
  double reach = 0.0;
  for (std::size_t a = 0; a < deltas.size(); ++a) {
    const double bound = std::sqrt(2.0 * deltas[a] * u.sup_norm());
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double d = std::sqrt(squared_distance(u.node(k), u.node(sup[a].argmax[k])));
      reach = std::max(reach, d - bound);
    }
  }
  in.check("maximizer_reach", reach, reach <= 0.0);
}

// ---------------------------------------------------------------------------
// Coupling inequality at doubling maxima. Atoms sit on multiples of the grid
// spacing so that every shifted point is a grid node.

inline void coupling_instance(Instance& in, const Tolerances& tol) {
  const std::size_t k = in.index();
  const double p = kExponents[k % 3];
  const std::size_t nodes = 161;
  const double lo = -2.0, hi = 2.0;
  const double h = (hi - lo) / static_cast<double>(nodes - 1);
  auto bumps = [&](Rng& rng) {
    std::vector<std::array<double, 3>> b;
    for (int j = 0; j < 2; ++j) {
      b.push_back({uniform(rng, -0.5, 0.5), uniform(rng, 0.2, 0.5), uniform(rng, 0.2, 1.0)});
    }
    return GridFunction::sample({lo}, {hi}, {nodes}, [b](PointView x) {
      double v = 0.0;
      for (const auto& [c, s, a] : b) v += a * std::exp(-(x[0] - c) * (x[0] - c) / (s * s));
      return v;
    });
  };
  const auto u = bumps(in.rng);
  const auto v = bumps(in.rng);
  const std::array<double, 3> epsilons{0.5, 0.1, 0.05};
  const std::array<double, 3> kappas{1e-6, 1e-3, 0.5};
  const PenalizationSpec spec{epsilons[uniform_index(in.rng, 0, 2)],
                              kappas[uniform_index(in.rng, 0, 2)], p};
  const bool full = k % 5 == 4;
  auto lattice_measure = [&](std::size_t count, long max_steps) {
    std::vector<Atom> atoms;
    for (std::size_t j = 0; j < count; ++j) {
      long s = 0;
      while (s == 0) s = static_cast<long>(uniform_index(in.rng, 0, 2 * max_steps)) - max_steps;
      atoms.push_back({{static_cast<double>(s) * h}, uniform(in.rng, 0.05, 1.5)});
    }
    return DiscreteMeasure(1, atoms);
  };
  const long inner = static_cast<long>(std::ceil(1.0 / h)) - 1;  // |z| < 1
  auto mu = lattice_measure(uniform_index(in.rng, 1, 12), inner);
  // nu keeps some atoms of mu with perturbed weights and adds fresh ones.
  std::vector<Atom> kept;
  for (const auto& a : mu.atoms()) {
    if (uniform(in.rng, 0.0, 1.0) < 0.6) kept.push_back({a.z, a.w * uniform(in.rng, 0.5, 1.5)});
  }
  auto nu = combine(DiscreteMeasure(1, kept), lattice_measure(uniform_index(in.rng, 0, 6), inner));
  if (full) {
    // Large jumps, different on each side, exercise the total variation term.
    mu = combine(mu, DiscreteMeasure(1, {{{static_cast<double>(inner + 8) * h}, 0.4}}));
    nu = combine(nu, DiscreteMeasure(1, {{{-static_cast<double>(inner + 12) * h}, 0.3}}));
  }
  in.note("p", p);
  in.note("epsilon", spec.epsilon);
  in.note("kappa", spec.kappa);
  in.note("mu", io::measure_to_json(mu));
  in.note("nu", io::measure_to_json(nu));
  in.note("full", full);
  const double cp = pointwise_cp_constant(p).constant;
  const auto at = doubling_maximize(u, v, spec);
  const auto c = coupling_inequality_check(u, v, spec, mu, nu, cp, at, tol.coupling);
  in.note("lhs", c.lhs);
  in.note("rhs", c.rhs);
  in.check("coupling_inequality", c.lhs - c.rhs, c.pass);
}

// ---------------------------------------------------------------------------

inline void experiment_instance(Instance& in, const Tolerances&) {
  const auto rep = basic_idea_experiment(EquationSpec{}, BasicIdeaConfig{});
  Json rows = Json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"epsilon", r.epsilon}, {"penalty_term", r.penalty_term}});
  }
  in.note("rows", rows);
  in.check("penalty_nonincreasing", rep.penalty_nonincreasing ? 0.0 : 1.0,
           rep.penalty_nonincreasing);
  in.check("final_penalty", rep.final_penalty, rep.final_penalty <= 1e-3);
  in.check("u_below_v", rep.u_below_v ? 0.0 : 1.0, rep.u_below_v);
}

inline void performance_instance(Instance& in, const Tolerances& tol) {
  RandomMeasureSpec spec{2, 2000, 2000, 1.0, false};
  auto mu = random_measure(in.rng, spec);
  auto nu = random_measure(in.rng, spec);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = solve(mu, nu, CostSpec{2.0});
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  in.check("solve_seconds", secs, secs < 5.0);
  const double rel = r.gap / (1.0 + r.value);
  in.check("strong_duality", rel, rel <= tol.gap);
}

}  // namespace detail

inline constexpr std::size_t kSweepPairs = 40;

inline const std::vector<SuiteSpec>& registry() {
  static const std::vector<SuiteSpec> suites{
      {"duality", "strong duality, feasibility, K-support on weighted instances", 300,
       detail::duality_instance},
      {"metric", "symmetry, triangle inequality, identity on random triples", 200,
       detail::metric_instance},
      {"oracle", "solver vs exhaustive enumeration on unit-weight instances", 100,
       detail::oracle_instance},
      {"bounds", "closed-form bounds dominate exact distances", 100, detail::bounds_instance},
      {"kernel-sweep", "sigma < 1 kernel sweep below the quadrature estimate", kSweepPairs,
       [](Instance& in, const Tolerances& t) { detail::kernel_sweep_instance(in, t, kSweepPairs); }},
      {"fraclap", "fractional Laplacian small-jump and middle-part Lipschitz sweeps", 60,
       [](Instance& in, const Tolerances& t) { detail::fraclap_instance(in, t, 60); },
       detail::fraclap_stability},
      {"convolution", "sup/inf-convolution properties on random grid functions", 50,
       detail::convolution_instance},
      {"coupling", "coupling inequality at doubling maxima", 50, detail::coupling_instance},
      {"experiment", "doubling penalty decay on the periodic model problem", 1,
       detail::experiment_instance},
      {"performance", "2000 x 2000 solve under 5 s", 1, detail::performance_instance},
  };
  return suites;
}

inline const SuiteSpec& find_suite(const std::string& name) {
  for (const auto& s : registry()) {
    if (s.name == name) return s;
  }
  throw InvalidInput("unknown suite \"" + name + "\"");
}

inline Json reproducer(const SuiteSpec& suite, std::uint64_t seed, const Instance& in,
                       const Tolerances& tol) {
  Json checks = Json::array();
  for (const auto& e : in.entries()) {
    if (!e.ok) checks.push_back({{"check", e.name}, {"value", e.value}});
  }
  return {{"suite", suite.name},
          {"seed", seed},
          {"instance", in.index()},
          {"failed", checks},
          {"tolerances",
           {{"gap", tol.gap}, {"symmetry", tol.symmetry}, {"triangle", tol.triangle},
            {"oracle", tol.oracle}, {"ksupport", tol.ksupport}, {"bound", tol.bound},
            {"semiconvex", tol.semiconvex}, {"coupling", tol.coupling}, {"sweep", tol.sweep}}},
          {"data", in.data()}};
}

// Runs the given instance indices (all of [0, n) when `only` is empty).
inline SuiteResult run_suite(const SuiteSpec& suite, std::size_t n, std::uint64_t seed,
                             const Tolerances& tol, std::vector<std::size_t> only = {}) {
  if (only.empty()) {
    only.resize(n);
    for (std::size_t k = 0; k < n; ++k) only[k] = k;
  }
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Instance> done;
  done.reserve(only.size());
  for (std::size_t k : only) done.emplace_back(seed, k);
  // The performance suite times a single solve; keep it alone on the machine.
  const std::size_t threads = suite.name == "performance" ? 1 : thread_budget();
  parallel_for(
      done.size(), [&](std::size_t k) { suite.run(done[k], tol); }, threads);

  SuiteResult out;
  out.suite = suite.name;
  out.seed = seed;
  out.instances = done.size();
  std::map<std::string, std::size_t> slot;
  for (const auto& in : done) {
    for (const auto& e : in.entries()) {
      auto [it, fresh] = slot.emplace(e.name, out.checks.size());
      if (fresh) out.checks.push_back({e.name, true, -INFINITY, 0, ""});
      auto& line = out.checks[it->second];
      line.worst = std::max(line.worst, e.value);
      if (!e.ok) {
        if (line.pass) line.detail = "first failure at instance " + std::to_string(in.index());
        line.pass = false;
        ++line.failures;
      }
    }
    if (in.failed()) out.reproducers.push_back(reproducer(suite, seed, in, tol));
  }
  if (suite.finalize) suite.finalize(done, out);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace levyot::suites

#endif  // LEVYOT_SUITES_HPP_
