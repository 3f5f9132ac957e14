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

// Command-line front end. `run` takes the arguments without the program name
// and writes to the given streams, so tests can drive it in-process.
//
// Exit codes: 0 success (and --help), 1 failed invariant, 2 bad input or
// configuration, 3 solver failure.

#ifndef LEVYOT_CLI_HPP_
#define LEVYOT_CLI_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "levyot/bounds.hpp"
#include "levyot/families.hpp"
#include "levyot/io.hpp"
#include "levyot/measures.hpp"
#include "levyot/suites.hpp"
#include "levyot/transport.hpp"
#include "levyot/viscosity.hpp"

namespace levyot::cli {

using io::Json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSolver = 3;

// ---------------------------------------------------------------------------
// Family configuration files.
//
// { "type": "kernel" | "fraclap" | "levyito", "dim": d, "sigma": f,
//   "gamma": f, "params": {...}, "grid": {...}, "part": "hat" | "full" }

struct FamilyConfig {
  std::string type;
  std::size_t dim = 1;
  double sigma = 0.5;
  double gamma = 1.0;
  bool hat_only = true;
  AnnularGrid grid;
  KernelFamily kernel;
  FracLaplFamily fraclap;
  LevyItoFamily levyito;

  DiscreteMeasure measure(PointView x) const {
    if (type == "kernel") {
      auto mu = discretize_kernel(kernel, x, grid);
      return hat_only ? decompose(mu).hat : mu;
    }
    if (type == "fraclap") {
      return hat_only ? split_fraclap(fraclap, x, grid).hat : fraclap_measure(fraclap, x, grid);
    }
    return pushforward(levyito, x);
  }

  // Discarded p-cost below the grid's inner radius; 0 for exact families.
  double truncation(PointView x, double p) const {
    if (type == "kernel") return kernel_truncation_cost(kernel, x, grid.r_min, p, grid.n_angular);
    if (type == "fraclap") return fraclap_truncation_cost(fraclap, x, grid, p);
    return 0.0;
  }
};

inline AnnularGrid grid_from_json(const Json& j, const std::string& where) {
  AnnularGrid g;
  if (j.is_null()) return g;
  if (!j.is_object()) throw InvalidInput(where + ": expected an object");
  g.r_min = io::number_or(j, "r_min", g.r_min, where);
  g.r_max = io::number_or(j, "r_max", g.r_max, where);
  g.n_radial = io::count_or(j, "n_radial", g.n_radial, where);
  g.n_angular = io::count_or(j, "n_angular", g.n_angular, where);
  if (j.contains("breaks")) g.breaks = io::numbers(j.at("breaks"), where + ".breaks");
  try {
    g.validate();
  } catch (const InvalidInput& e) {
    throw InvalidInput(where + ": " + e.what());
  }
  return g;
}

inline FamilyConfig family_from_json(const Json& j, const std::string& where) {
  FamilyConfig c;
  const Json& type = io::field(j, "type", where);
  if (!type.is_string()) throw InvalidInput(where + ".type: expected a string");
  c.type = type.get<std::string>();
  c.dim = io::count_or(j, "dim", 1, where);
  if (c.dim < 1 || c.dim > 3) throw InvalidInput(where + ".dim: must be 1, 2 or 3");
  c.sigma = io::number_or(j, "sigma", c.type == "fraclap" ? 1.5 : 0.5, where);
  c.gamma = io::number_or(j, "gamma", 1.0, where);
  if (!(c.gamma > 0.0 && c.gamma <= 1.0)) throw InvalidInput(where + ".gamma: must lie in (0, 1]");
  c.grid = grid_from_json(j.value("grid", Json()), where + ".grid");
  if (j.contains("part")) {
    const Json& part = j.at("part");
    if (part != "hat" && part != "full") {
      throw InvalidInput(where + ".part: expected \"hat\" or \"full\"");
    }
    c.hat_only = part == "hat";
  }
  const Json params = j.value("params", Json::object());
  const std::string pw = where + ".params";
  try {
    if (c.type == "kernel") {
      c.kernel = make_sinusoidal_kernel(c.dim, c.sigma, io::number_or(params, "c0", 1.0, pw),
                                        io::number_or(params, "c1", 0.0, pw),
                                        io::number_or(params, "freq", 1.0, pw),
                                        params.value("unit_ball", true));
      c.kernel.holder_gamma = c.gamma;
    } else if (c.type == "fraclap") {
      c.fraclap = make_sinusoidal_fraclap(c.dim, c.sigma, io::number_or(params, "base", 0.5, pw),
                                          io::number_or(params, "amp", 0.0, pw),
                                          io::number_or(params, "freq", 1.0, pw));
    } else if (c.type == "levyito") {
      // T_x(z) = (1 + scale sin(freq x_0)) z on a base measure.
      c.levyito.base = io::measure_from_json(io::field(params, "base", pw), pw + ".base");
      const double scale = io::number_or(params, "scale", 0.0, pw);
      const double freq = io::number_or(params, "freq", 1.0, pw);
      c.levyito.image_dim = c.levyito.base.dim();
      c.levyito.map = [scale, freq](PointView x, PointView z) {
        Point out(z.begin(), z.end());
        for (auto& v : out) v *= 1.0 + scale * std::sin(freq * x[0]);
        return out;
      };
      c.levyito.rho = [](PointView z) { return norm(z); };
      c.levyito.bound_C = std::max(1.0 + std::abs(scale), std::abs(scale * freq));
    } else {
      throw InvalidInput(where + ".type: unknown family \"" + c.type + "\"");
    }
  } catch (const Json::exception& e) {
    throw InvalidInput(pw + ": " + e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------

namespace detail {

enum class Format { kJson, kCsv };

struct FormatFlags {
  bool json = false;
  bool csv = false;
  Format pick(Format fallback) const {
    if (json) return Format::kJson;
    if (csv) return Format::kCsv;
    return fallback;
  }
};

inline void add_format(CLI::App* cmd, FormatFlags& f) {
  auto* j = cmd->add_flag("--json", f.json, "JSON output");
  auto* c = cmd->add_flag("--csv", f.csv, "CSV output");
  j->excludes(c);
}

inline void check_exponent(double p) {
  if (!(std::isfinite(p) && p >= 1.0)) throw InvalidInput("--p must be a finite number >= 1");
}

inline std::string csv_row(std::initializer_list<std::string> cells) {
  std::string out;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    first = false;
    out += c;
  }
  return out + '\n';
}

inline std::string point_cell(const Point& x) {
  std::string out;
  for (std::size_t k = 0; k < x.size(); ++k) out += (k ? " " : "") + io::fmt(x[k]);
  return out;
}

// Writes to --out when given, else to `out`.
inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput(path + ": cannot open for writing");
  f << text;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands. Each returns an exit code.

struct DistArgs {
  std::string a, b;
  double p = 2.0;
  detail::FormatFlags format;
};

inline int cmd_dist(const DistArgs& args, std::ostream& out) {
  detail::check_exponent(args.p);
  const auto mu = io::load_measure(args.a);
  const auto nu = io::load_measure(args.b);
  const auto r = solve(mu, nu, CostSpec{args.p});
  if (args.format.pick(detail::Format::kJson) == detail::Format::kCsv) {
    out << "p,value,distance,dual_value,gap,iterations\n";
    out << detail::csv_row({io::fmt(args.p), io::fmt(r.value),
                            io::fmt(std::pow(std::max(0.0, r.value), 1.0 / args.p)),
                            io::fmt(r.dual_value), io::fmt(r.gap), std::to_string(r.iterations)});
  } else {
    out << io::dump(io::report_to_json(r, args.p)) << '\n';
  }
  return kExitOk;
}

struct DualArgs {
  std::string a, b, duals;
  double p = 2.0;
  detail::FormatFlags format;
};

// Dual objective of potentials read from --duals (or the solver's own),
// with a feasibility verdict against the admissible set.
inline int cmd_dual(const DualArgs& args, std::ostream& out) {
  detail::check_exponent(args.p);
  const auto mu = io::load_measure(args.a);
  const auto nu = io::load_measure(args.b);
  const auto r = solve(mu, nu, CostSpec{args.p});
  const DualPotentials duals =
      args.duals.empty() ? r.duals : io::duals_from_json(io::load(args.duals), args.duals);
  const auto violation = find_dual_violation(duals, mu, nu, args.p);
  if (violation && violation->kind == DualViolation::Kind::kShape) {
    throw InvalidInput(args.duals + ": potentials do not match the atom counts");
  }
  const double objective = dual_objective(duals, mu, nu);
  if (args.format.pick(detail::Format::kJson) == detail::Format::kCsv) {
    out << "p,feasible,dual_value,primal_value\n";
    out << detail::csv_row({io::fmt(args.p), violation ? "false" : "true", io::fmt(objective),
                            io::fmt(r.value)});
  } else {
    Json j{{"p", args.p},
           {"source", args.duals.empty() ? "solver" : args.duals},
           {"feasible", !violation},
           {"dual_value", objective},
           {"primal_value", r.value},
           {"duals", {{"phi", duals.phi}, {"psi", duals.psi}}}};
    if (violation) j["violation"] = violation->message();
    out << io::dump(j) << '\n';
  }
  return violation ? kExitInvariant : kExitOk;
}

struct BoundsArgs {
  std::string a, b, psi;
  double p = 2.0;
  double r = 0.5;
  double scale = 0.9;
  detail::FormatFlags format;
};

// Every closed-form bound on the pair (a, b): tv and restricted-integral on
// (a, b), positive part on (a + b, b), restriction on a, push-forward of a
// by the identity against z -> scale z.
inline int cmd_bounds(const BoundsArgs& args, std::ostream& out) {
  detail::check_exponent(args.p);
  const auto mu = io::load_measure(args.a);
  const auto nu = io::load_measure(args.b);
  RadialTestFunction psi = RadialTestFunction::hat(0.25, 0.75, 1.0);
  if (!args.psi.empty()) {
    const Json j = io::load(args.psi);
    psi = RadialTestFunction(io::numbers(io::field(j, "radii", args.psi), args.psi + ".radii"),
                             io::numbers(io::field(j, "values", args.psi), args.psi + ".values"));
  }
  const double t = args.scale;
  std::vector<BoundCheck> checks{
      check_tv_power_bound(mu, nu, args.p),
      check_positive_part_dual_bound(combine(mu, nu), nu, args.p),
      check_restriction_bound(mu, args.r, args.p),
      check_pushforward_bound([](PointView z) { return Point(z.begin(), z.end()); },
                              [t](PointView z) {
                                Point s(z.begin(), z.end());
                                for (auto& c : s) c *= t;
                                return s;
                              },
                              mu, mu.dim(), args.p),
      restricted_integral_bound(mu, nu, psi, args.p)};
  bool all = true;
  for (const auto& c : checks) all = all && c.pass();
  if (args.format.pick(detail::Format::kCsv) == detail::Format::kJson) {
    Json rows = Json::array();
    for (const auto& c : checks) {
      rows.push_back(
          {{"bound", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"slack", c.slack()}, {"pass", c.pass()}});
    }
    out << io::dump({{"p", args.p}, {"bounds", rows}}) << '\n';
  } else {
    out << "bound_name,lhs,rhs,slack,pass\n";
    for (const auto& c : checks) {
      out << detail::csv_row({c.name, io::fmt(c.lhs), io::fmt(c.rhs), io::fmt(c.slack()),
                              c.pass() ? "true" : "false"});
    }
  }
  return all ? kExitOk : kExitInvariant;
}

struct SweepArgs {
  std::string config, out;
  double p = 1.0;
  double s = -1.0;  // negative selects the config's gamma
  std::size_t pairs = 20;
  std::uint64_t seed = 0;
  double dmin = 1e-3, dmax = 0.5;
  detail::FormatFlags format;
};

inline int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  detail::check_exponent(args.p);
  const auto cfg = family_from_json(io::load(args.config), args.config);
  const double s = args.s < 0.0 ? cfg.gamma : args.s;
  if (!(s > 0.0 && s <= 1.0)) throw InvalidInput("--s must lie in (0, 1]");
  if (!(args.dmin > 0.0 && args.dmax >= args.dmin)) {
    throw InvalidInput("--dmin and --dmax must satisfy 0 < dmin <= dmax");
  }
  const std::size_t dim = cfg.type == "levyito" ? 1 : cfg.dim;
  const auto pairs = sweep_pairs(dim, args.pairs, args.seed, 1.0, args.dmin, args.dmax);
  const auto rep = regularity_sweep([&](PointView x) { return cfg.measure(x); }, pairs, args.p, s,
                                    [&](PointView x) { return cfg.truncation(x, args.p); });
  std::string text;
  if (args.format.pick(detail::Format::kCsv) == detail::Format::kJson) {
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
      rows.push_back({{"x", r.x}, {"y", r.y}, {"separation", r.separation},
                      {"distance", r.distance}, {"ratio", r.ratio},
                      {"truncation_cost", r.truncation_cost}});
    }
    text = io::dump({{"seed", args.seed}, {"p", args.p}, {"s", s}, {"max_ratio", rep.max_ratio},
                     {"rows", rows}}) + "\n";
  } else {
    text = "# seed=" + std::to_string(args.seed) + " p=" + io::fmt(args.p) + " s=" + io::fmt(s) +
           "\nx,y,|x-y|,distance,ratio,truncation_cost\n";
    for (const auto& r : rep.rows) {
      text += detail::csv_row({detail::point_cell(r.x), detail::point_cell(r.y),
                               io::fmt(r.separation), io::fmt(r.distance), io::fmt(r.ratio),
                               io::fmt(r.truncation_cost)});
    }
  }
  detail::emit(text, args.out, out);
  err << "max_ratio=" << io::fmt(rep.max_ratio) << '\n';
  return kExitOk;
}

struct ConvolveArgs {
  std::string grid, out;
  double delta = 0.1;
  bool inf = false;
  detail::FormatFlags format;
};

inline int cmd_convolve(const ConvolveArgs& args, std::ostream& out) {
  if (!(std::isfinite(args.delta) && args.delta > 0.0)) throw InvalidInput("--delta must be > 0");
  const auto u = io::grid_from_json(io::load(args.grid), args.grid);
  const auto r = args.inf ? inf_convolution_with_argmax(u, args.delta)
                          : sup_convolution_with_argmax(u, args.delta);
  std::string text;
  if (args.format.pick(detail::Format::kJson) == detail::Format::kCsv) {
    text = "node,x,u,value,argmax\n";
    for (std::size_t k = 0; k < u.size(); ++k) {
      text += detail::csv_row({std::to_string(k), detail::point_cell(u.node(k)), io::fmt(u[k]),
                               io::fmt(r.value[k]), std::to_string(r.argmax[k])});
    }
  } else {
    Json j = io::grid_to_json(r.value);
    j["delta"] = args.delta;
    j["kind"] = args.inf ? "inf" : "sup";
    j["argmax"] = r.argmax;
    text = io::dump(j) + "\n";
  }
  detail::emit(text, args.out, out);
  return kExitOk;
}

struct DoublingArgs {
  std::string u, v, mu, nu;
  double epsilon = 0.1, kappa = 1e-3, p = 2.0;
  detail::FormatFlags format;
};

// Doubling maximum of u(x) - v(y) - psi_kappa(x - y)/eps; with --mu/--nu the
// coupling inequality is checked there as well.
inline int cmd_doubling(const DoublingArgs& args, std::ostream& out) {
  const PenalizationSpec spec{args.epsilon, args.kappa, args.p};
  spec.validate();
  const auto u = io::grid_from_json(io::load(args.u), args.u);
  const auto v = io::grid_from_json(io::load(args.v), args.v);
  if (args.mu.empty() != args.nu.empty()) throw InvalidInput("--mu and --nu go together");
  const auto at = doubling_maximize(u, v, spec);
  Json j{{"epsilon", spec.epsilon}, {"kappa", spec.kappa}, {"p", spec.p}, {"i", at.i},
         {"j", at.j},           {"x", at.x},           {"y", at.y},     {"value", at.value}};
  bool pass = true;
  if (!args.mu.empty()) {
    const auto mu = io::load_measure(args.mu);
    const auto nu = io::load_measure(args.nu);
    if (mu.dim() != u.dim()) throw InvalidInput(args.mu + ": dimension differs from the grid");
    const double cp = pointwise_cp_constant(spec.p).constant;
    const auto c = coupling_inequality_check(u, v, spec, mu, nu, cp, at);
    pass = c.pass;
    j["coupling"] = {{"lhs", c.lhs},      {"rhs", c.rhs},   {"transport_term", c.transport_term},
                     {"tv_term", c.tv_term}, {"cp", c.cp}, {"pass", c.pass}};
  }
  if (args.format.pick(detail::Format::kJson) == detail::Format::kCsv) {
    out << "i,j,x,y,value\n";
    out << detail::csv_row({std::to_string(at.i), std::to_string(at.j), detail::point_cell(at.x),
                            detail::point_cell(at.y), io::fmt(at.value)});
  } else {
    out << io::dump(j) << '\n';
  }
  return pass ? kExitOk : kExitInvariant;
}

struct ExperimentArgs {
  std::size_t nodes = 512;
  double margin = 0.5;
  double kappa = 1e-3;
  std::string out;
  detail::FormatFlags format;
};

inline int cmd_experiment(const ExperimentArgs& args, std::ostream& out) {
  BasicIdeaConfig cfg;
  cfg.nodes = args.nodes;
  cfg.margin = args.margin;
  cfg.kappa = args.kappa;
  const auto rep = basic_idea_experiment(EquationSpec{}, cfg);
  std::string text;
  if (args.format.pick(detail::Format::kJson) == detail::Format::kCsv) {
    text = "epsilon,kappa,x_star,y_star,gap,penalty_term,distance_term\n";
    for (const auto& r : rep.rows) {
      text += detail::csv_row({io::fmt(r.epsilon), io::fmt(r.kappa), io::fmt(r.x_star),
                               io::fmt(r.y_star), io::fmt(r.gap), io::fmt(r.penalty_term),
                               io::fmt(r.distance_term)});
    }
  } else {
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
      rows.push_back({{"epsilon", r.epsilon}, {"kappa", r.kappa}, {"x_star", r.x_star},
                      {"y_star", r.y_star}, {"gap", r.gap}, {"penalty_term", r.penalty_term},
                      {"distance_term", r.distance_term}});
    }
    text = io::dump({{"nodes", cfg.nodes},
                     {"residual", rep.residual},
                     {"u_below_v", rep.u_below_v},
                     {"penalty_nonincreasing", rep.penalty_nonincreasing},
                     {"final_penalty", rep.final_penalty},
                     {"rows", rows}}) +
           "\n";
  }
  detail::emit(text, args.out, out);
  return kExitOk;
}

struct VerifyArgs {
  std::string suite;
  std::size_t n = 0;  // 0 selects the suite default
  std::uint64_t seed = 0;
  std::vector<std::string> tol;
  std::string replay;
  std::string repro_dir = ".";
  detail::FormatFlags format;
};

namespace detail {

inline suites::Tolerances parse_tolerances(const std::vector<std::string>& items,
                                           suites::Tolerances tol = {}) {
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidInput("--tol expects name=value, got \"" + item + "\"");
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInput("--tol " + item + ": value is not a number");
    }
    tol.set(item.substr(0, eq), value);
  }
  return tol;
}

inline void print_result(const suites::SuiteResult& r, Format format, std::ostream& out) {
  if (format == Format::kJson) {
    Json checks = Json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"check", c.name}, {"pass", c.pass}, {"worst", c.worst},
                        {"failures", c.failures}, {"detail", c.detail}});
    }
    out << io::dump({{"suite", r.suite}, {"seed", r.seed}, {"instances", r.instances},
                     {"pass", r.pass()}, {"checks", checks}})
        << '\n';
    return;
  }
  out << "# suite=" << r.suite << " seed=" << r.seed << " instances=" << r.instances << '\n';
  out << "check,result,worst,failures,detail\n";
  for (const auto& c : r.checks) {
    out << csv_row({c.name, c.pass ? "pass" : "FAIL", io::fmt(c.worst), std::to_string(c.failures),
                    c.detail});
  }
}

}  // namespace detail

inline int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  const auto format = args.format.pick(detail::Format::kCsv);
  if (!args.replay.empty()) {
    // Rerun one recorded instance and confirm it regenerates the same data.
    const Json repro = io::load(args.replay);
    const Json& name = io::field(repro, "suite", args.replay);
    if (!name.is_string()) throw InvalidInput(args.replay + ".suite: expected a string");
    const auto& suite = suites::find_suite(name.get<std::string>());
    const auto seed = static_cast<std::uint64_t>(
        io::count(io::field(repro, "seed", args.replay), args.replay + ".seed"));
    const std::size_t index =
        io::count(io::field(repro, "instance", args.replay), args.replay + ".instance");
    suites::Tolerances tol;
    if (repro.contains("tolerances")) {
      for (auto it = repro.at("tolerances").begin(); it != repro.at("tolerances").end(); ++it) {
        tol.set(it.key(), io::number(it.value(), args.replay + ".tolerances." + it.key()));
      }
    }
    tol = detail::parse_tolerances(args.tol, tol);
    suites::Instance in(seed, index);
    suite.run(in, tol);
    if (repro.contains("data") && io::dump(repro.at("data")) != io::dump(in.data())) {
      err << args.replay << ": regenerated instance differs from the recorded data\n";
      return kExitInput;
    }
    suites::SuiteResult r;
    r.suite = suite.name;
    r.seed = seed;
    r.instances = 1;
    for (const auto& e : in.entries()) {
      r.checks.push_back({e.name, e.ok, e.value, e.ok ? 0u : 1u,
                          "instance " + std::to_string(index)});
    }
    detail::print_result(r, format, out);
    return r.pass() ? kExitOk : kExitInvariant;
  }

  if (args.suite.empty()) throw InvalidInput("verify needs --suite or --replay");
  std::vector<const suites::SuiteSpec*> chosen;
  if (args.suite == "all") {
    for (const auto& s : suites::registry()) chosen.push_back(&s);
  } else {
    chosen.push_back(&suites::find_suite(args.suite));
  }
  const auto tol = detail::parse_tolerances(args.tol);
  bool all = true;
  for (const auto* suite : chosen) {
    const std::size_t n = args.n > 0 ? args.n : suite->default_n;
    const auto r = suites::run_suite(*suite, n, args.seed, tol);
    detail::print_result(r, format, out);
    err << suite->name << ": " << (r.pass() ? "pass" : "FAIL") << " in " << r.seconds << " s\n";
    if (!r.pass()) {
      all = false;
      if (!r.reproducers.empty()) {
        // The first failing instance is a self-contained reproducer.
        const Json& first = r.reproducers.front();
        std::filesystem::create_directories(args.repro_dir);
        const auto path = std::filesystem::path(args.repro_dir) /
                          ("repro-" + suite->name + "-" + std::to_string(args.seed) + "-" +
                           std::to_string(first.at("instance").get<std::size_t>()) + ".json");
        std::ofstream f(path, std::ios::binary);
        f << io::dump(first) << '\n';
        err << "reproducer written to " << path.string() << " (" << r.reproducers.size()
            << " failing instance(s))\n";
      }
    }
  }
  return all ? kExitOk : kExitInvariant;
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal transport between discrete Levy measures", "levyot"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  DistArgs dist;
  auto* c_dist = app.add_subcommand("dist", "Distance, plan and duals between two measures");
  c_dist->add_option("a", dist.a, "First measure (JSON)")->required();
  c_dist->add_option("b", dist.b, "Second measure (JSON)")->required();
  c_dist->add_option("--p", dist.p, "Cost exponent p >= 1");
  detail::add_format(c_dist, dist.format);

  DualArgs dual;
  auto* c_dual = app.add_subcommand("dual", "Dual objective and feasibility of potentials");
  c_dual->add_option("a", dual.a, "First measure (JSON)")->required();
  c_dual->add_option("b", dual.b, "Second measure (JSON)")->required();
  c_dual->add_option("--p", dual.p, "Cost exponent p >= 1");
  c_dual->add_option("--duals", dual.duals, "Potentials {phi, psi} (default: solver duals)");
  detail::add_format(c_dual, dual.format);

  BoundsArgs bounds;
  auto* c_bounds = app.add_subcommand("bounds", "Closed-form bounds against exact distances");
  c_bounds->add_option("a", bounds.a, "Measure inside the unit ball (JSON)")->required();
  c_bounds->add_option("b", bounds.b, "Measure inside the unit ball (JSON)")->required();
  c_bounds->add_option("--p", bounds.p, "Cost exponent p >= 1");
  c_bounds->add_option("--r", bounds.r, "Restriction radius in (0, 1]");
  c_bounds->add_option("--scale", bounds.scale, "Push-forward map z -> scale z");
  c_bounds->add_option("--psi", bounds.psi, "Radial test function {radii, values} (JSON)");
  detail::add_format(c_bounds, bounds.format);

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Regularity sweep of a measure family");
  c_sweep->add_option("config", sweep.config, "Family configuration (JSON)")->required();
  c_sweep->add_option("--p", sweep.p, "Cost exponent p >= 1");
  c_sweep->add_option("--s", sweep.s, "Hoelder exponent (default: config gamma)");
  c_sweep->add_option("--pairs", sweep.pairs, "Number of pairs");
  c_sweep->add_option("--seed", sweep.seed, "Seed");
  c_sweep->add_option("--dmin", sweep.dmin, "Smallest separation");
  c_sweep->add_option("--dmax", sweep.dmax, "Largest separation");
  c_sweep->add_option("--out", sweep.out, "Write the table here instead of stdout");
  detail::add_format(c_sweep, sweep.format);

  ConvolveArgs conv;
  auto* c_conv = app.add_subcommand("convolve", "Sup- or inf-convolution of a grid function");
  c_conv->add_option("grid", conv.grid, "Grid function (JSON)")->required();
  c_conv->add_option("--delta", conv.delta, "Convolution parameter delta > 0");
  c_conv->add_flag("--inf", conv.inf, "Inf-convolution instead of sup-convolution");
  c_conv->add_option("--out", conv.out, "Write the result here instead of stdout");
  detail::add_format(c_conv, conv.format);

  DoublingArgs doub;
  auto* c_doub = app.add_subcommand("doubling", "Doubling-of-variables maximum of two grids");
  c_doub->add_option("u", doub.u, "Grid function u (JSON)")->required();
  c_doub->add_option("v", doub.v, "Grid function v (JSON)")->required();
  c_doub->add_option("--epsilon", doub.epsilon, "Penalization epsilon");
  c_doub->add_option("--kappa", doub.kappa, "Smoothing kappa");
  c_doub->add_option("--p", doub.p, "Penalization exponent");
  c_doub->add_option("--mu", doub.mu, "Measure at x for the coupling check (JSON)");
  c_doub->add_option("--nu", doub.nu, "Measure at y for the coupling check (JSON)");
  detail::add_format(c_doub, doub.format);

  ExperimentArgs exp;
  auto* c_exp = app.add_subcommand("experiment", "Penalty decay on the periodic model problem");
  c_exp->add_option("--nodes", exp.nodes, "Grid nodes");
  c_exp->add_option("--margin", exp.margin, "Height of the comparison margin");
  c_exp->add_option("--kappa", exp.kappa, "Smoothing kappa");
  c_exp->add_option("--out", exp.out, "Write the report here instead of stdout");
  detail::add_format(c_exp, exp.format);

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "Seeded invariant suites");
  std::string suite_names;
  for (const auto& s : suites::registry()) suite_names += "\n  " + s.name + ": " + s.summary;
  c_ver->footer("Suites (or \"all\"):" + suite_names);
  c_ver->add_option("--suite", ver.suite, "Suite name");
  c_ver->add_option("--n", ver.n, "Instances (default: suite default)");
  c_ver->add_option("--seed", ver.seed, "Seed");
  c_ver->add_option("--tol", ver.tol, "Tolerance override name=value (repeatable)");
  c_ver->add_option("--replay", ver.replay, "Rerun a reproducer file");
  c_ver->add_option("--repro-dir", ver.repro_dir, "Directory for failure reproducers");
  detail::add_format(c_ver, ver.format);

  try {
    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "levyot: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (c_dist->parsed()) return cmd_dist(dist, out);
    if (c_dual->parsed()) return cmd_dual(dual, out);
    if (c_bounds->parsed()) return cmd_bounds(bounds, out);
    if (c_sweep->parsed()) return cmd_sweep(sweep, out, err);
    if (c_conv->parsed()) return cmd_convolve(conv, out);
    if (c_doub->parsed()) return cmd_doubling(doub, out);
    if (c_exp->parsed()) return cmd_experiment(exp, out);
    if (c_ver->parsed()) return cmd_verify(ver, out, err);
  } catch (const InvalidInput& e) {
    err << "levyot: " << e.what() << '\n';
    return kExitInput;
  } catch (const Json::exception& e) {
    err << "levyot: " << e.what() << '\n';
    return kExitInput;
  } catch (const SolverFailure& e) {
    err << "levyot: solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitInput;
}

}  // namespace levyot::cli

#endif  // LEVYOT_CLI_HPP_
