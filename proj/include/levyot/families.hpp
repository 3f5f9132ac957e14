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

// Families x -> mu_x of Levy measures: kernel densities K(x, z) dz, the
// fractional Laplacian type a(x) |z|^{-d-sigma} dz, and push-forwards of a
// fixed reference measure. Densities are discretized on annular grids.

#ifndef LEVYOT_FAMILIES_HPP_
#define LEVYOT_FAMILIES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "levyot/common.hpp"
#include "levyot/measures.hpp"
#include "levyot/parallel.hpp"
#include "levyot/quadrature.hpp"
#include "levyot/random.hpp"
#include "levyot/transport.hpp"

namespace levyot {

using Point = std::vector<double>;
using PointView = std::span<const double>;

struct AnnularGrid {
  double r_min = 1e-3;
  double r_max = 1.0;
  std::size_t n_radial = 100;
  std::size_t n_angular = 8;  // sectors (d = 2) or sphere points (d = 3)
  std::vector<double> breaks;  // extra radii that must be shell boundaries

  void validate() const {
    require(std::isfinite(r_min) && r_min > 0.0, "grid: r_min must be > 0");
    require(std::isfinite(r_max) && r_max > r_min, "grid: r_max must exceed r_min");
    require(n_radial >= 1, "grid: n_radial must be >= 1");
    require(n_angular >= 1, "grid: n_angular must be >= 1");
  }

  // Constant ratio between consecutive geometric shell radii.
  double shell_ratio() const {
    return std::pow(r_max / r_min, 1.0 / static_cast<double>(n_radial));
  }

  std::vector<double> edges() const {
    validate();
    std::vector<double> e;
    e.reserve(n_radial + 1 + breaks.size());
    for (std::size_t k = 0; k <= n_radial; ++k) {
      e.push_back(r_min * std::pow(r_max / r_min,
                                   static_cast<double>(k) / static_cast<double>(n_radial)));
    }
    e.front() = r_min;
    e.back() = r_max;
    for (double b : breaks) {
      if (b > r_min && b < r_max) e.push_back(b);
    }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
  }
};

// Geometric shell edges on [lo, hi) with ratio at most q.
inline std::vector<double> shell_edges(double lo, double hi, double q) {
  std::vector<double> e;
  if (!(hi > lo)) return e;
  const auto n = static_cast<std::size_t>(
      std::max(1.0, std::ceil(std::log(hi / lo) / std::log(q) - 1e-9)));
  for (std::size_t k = 0; k <= n; ++k) {
    e.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(n)));
  }
  e.front() = lo;
  e.back() = hi;
  return e;
}

// One angular cell of the unit sphere. In d = 2 the sector [theta0, theta1]
// is integrated; otherwise the cell is a point rule with weight `measure`.
struct AngularCell {
  Point direction;
  double measure = 0.0;
  double theta0 = 0.0;
  double theta1 = 0.0;
};

inline std::vector<AngularCell> angular_cells(std::size_t dim, std::size_t n_angular) {
  std::vector<AngularCell> cells;
  switch (dim) {
    case 1:
      cells.push_back({{1.0}, 1.0});
      cells.push_back({{-1.0}, 1.0});
      break;
    case 2: {
      const double width = 2.0 * std::numbers::pi / static_cast<double>(n_angular);
      for (std::size_t k = 0; k < n_angular; ++k) {
        const double t0 = width * static_cast<double>(k);
        const double mid = t0 + 0.5 * width;
        cells.push_back({{std::cos(mid), std::sin(mid)}, width, t0, t0 + width});
      }
      break;
    }
    case 3: {
      // Fibonacci sphere: near-uniform points with equal weights.
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      const double n = static_cast<double>(n_angular);
      for (std::size_t k = 0; k < n_angular; ++k) {
        const double zc = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / n;
        const double rc = std::sqrt(std::max(0.0, 1.0 - zc * zc));
        const double phi = golden * static_cast<double>(k);
        cells.push_back({{rc * std::cos(phi), rc * std::sin(phi), zc}, 4.0 * std::numbers::pi / n});
      }
      break;
    }
    default:
      throw InvalidInput("angular discretization supports dimensions 1 to 3, got " +
                         std::to_string(dim));
  }
  return cells;
}

namespace detail {

// Integral of g(z) |z|^{d-1} over the cell's angles and r in [r0, r1],
// 10-point Gauss-Legendre in log r (and in the angle for d = 2).
template <class G>
double cell_integral(G&& g, const AngularCell& cell, std::size_t dim, double r0, double r1) {
  const double dm1 = static_cast<double>(dim) - 1.0;
  Point z(dim);
  auto radial = [&](auto&& dir) {
    return quad::gauss_legendre(
        [&](double t) {
          const double r = std::exp(t);
          for (std::size_t c = 0; c < dim; ++c) z[c] = r * dir[c];
          return g(PointView(z), r) * std::pow(r, dm1) * r;
        },
        std::log(r0), std::log(r1));
  };
  if (dim == 2) {
    return quad::gauss_legendre(
        [&](double th) {
          const double dir[2] = {std::cos(th), std::sin(th)};
          return radial(dir);
        },
        cell.theta0, cell.theta1);
  }
  return cell.measure * radial(cell.direction);
}

inline Point scaled(const Point& dir, double r) {
  Point z(dir);
  for (auto& c : z) c *= r;
  return z;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Kernel families: d mu_x = K(x, z) dz.

struct KernelFamily {
  std::size_t dim = 1;
  double sigma = 0.5;
  double envelope_lambda = 1.0;  // K(x, z) <= lambda |z|^{-(d + sigma)}
  double holder_gamma = 1.0;
  std::function<double(PointView x, PointView z)> density;

  double envelope(PointView z) const {
    return envelope_lambda * std::pow(norm(z), -(static_cast<double>(dim) + sigma));
  }
};

// One atom per (shell, angular cell), placed on the cell's axis at the radial
// mass centroid so that it stays inside its shell.
inline DiscreteMeasure discretize_kernel(const KernelFamily& family, PointView x,
                                         const AnnularGrid& grid) {
  require(static_cast<bool>(family.density), "kernel family has no density");
  const auto edges = grid.edges();
  const auto cells = angular_cells(family.dim, grid.n_angular);
  std::vector<Atom> atoms;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    for (const auto& cell : cells) {
      auto k = [&](PointView z, double) {
        const double v = family.density(x, z);
        if (!std::isfinite(v)) throw InvalidInput("kernel density is not finite");
        if (v < 0.0) throw InvalidInput("kernel density is negative");
        return v;
      };
      const double mass = detail::cell_integral(k, cell, family.dim, edges[s], edges[s + 1]);
      if (!(mass > 0.0)) continue;
      const double moment = detail::cell_integral(
          [&](PointView z, double r) { return k(z, r) * r; }, cell, family.dim, edges[s],
          edges[s + 1]);
      const double rc = std::clamp(moment / mass, edges[s], edges[s + 1]);
      atoms.push_back({detail::scaled(cell.direction, rc), mass});
    }
  }
  return DiscreteMeasure(family.dim, atoms);
}

namespace detail {

// Integral over |z| in [lo, hi] of g(z, r) |z|^{d-1} summed over all cells,
// adaptive in r. Used for continuum quantities (truncation costs, estimates).
template <class G>
double radial_integral(G&& g, std::size_t dim, std::size_t n_angular, double lo, double hi,
                       bool to_zero, double tol = quad::kDefaultTolerance) {
  const auto cells = angular_cells(dim, n_angular);
  const double dm1 = static_cast<double>(dim) - 1.0;
  KahanSum total;
  for (const auto& cell : cells) {
    auto along = [&](const double* dir) {
      Point z(dim);
      auto f = [&](double r) {
        for (std::size_t c = 0; c < dim; ++c) z[c] = r * dir[c];
        return g(PointView(z), r) * std::pow(r, dm1);
      };
      return to_zero ? quad::integrate_to_zero(f, hi, tol) : quad::integrate(f, lo, hi, tol);
    };
    if (dim == 2) {
      total += quad::gauss_legendre(
          [&](double th) {
            const double dir[2] = {std::cos(th), std::sin(th)};
            return along(dir);
          },
          cell.theta0, cell.theta1);
    } else {
      total += cell.measure * along(cell.direction.data());
    }
  }
  return total.value();
}

}  // namespace detail

// p-cost of the mass discarded by truncation: int_{B_r} |z|^p K(x, z) dz.
inline double kernel_truncation_cost(const KernelFamily& family, PointView x, double r_min,
                                     double p, std::size_t n_angular = 8) {
  return detail::radial_integral(
      [&](PointView z, double r) { return radial_power(r, p) * family.density(x, z); },
      family.dim, n_angular, 0.0, r_min, true);
}

// int_{B_1} |z|^p |K(x, z) - K(y, z)| dz by adaptive quadrature.
inline double kernel_difference_moment(const KernelFamily& family, PointView x, PointView y,
                                       double p, std::size_t n_angular = 8) {
  return detail::radial_integral(
      [&](PointView z, double r) {
        return radial_power(r, p) * std::abs(family.density(x, z) - family.density(y, z));
      },
      family.dim, n_angular, 0.0, 1.0, true);
}

// Upper bound 2^{(p-1)/p} (int_{B_1} |z|^p |K(x,.) - K(y,.)|)^{1/p} on the
// distance between the unit-ball parts of mu_x and mu_y.
inline double kernel_distance_estimate(const KernelFamily& family, PointView x, PointView y,
                                       double p, std::size_t n_angular = 8) {
  require_exponent(p);
  return std::pow(2.0, (p - 1.0) / p) *
         std::pow(kernel_difference_moment(family, x, y, p, n_angular), 1.0 / p);
}

// Largest sampled violations of 0 <= K <= envelope and of the Holder bound
// |K(x,z) - K(y,z)| <= |x-y|^gamma envelope(z). Both are <= 0 when the
// declared constants hold.
struct KernelCheck {
  double envelope_excess = 0.0;
  double holder_excess = 0.0;
};

inline KernelCheck check_kernel_family(const KernelFamily& family,
                                       const std::vector<Point>& xs,
                                       const std::vector<Point>& zs) {
  KernelCheck out{-INFINITY, -INFINITY};
  for (const auto& z : zs) {
    const double env = family.envelope(z);
    for (std::size_t a = 0; a < xs.size(); ++a) {
      const double k = family.density(xs[a], z);
      out.envelope_excess = std::max({out.envelope_excess, (k - env) / env, -k / env});
      for (std::size_t b = a + 1; b < xs.size(); ++b) {
        const double dxy = std::sqrt(squared_distance(xs[a], xs[b]));
        if (dxy == 0.0) continue;
        const double diff = std::abs(k - family.density(xs[b], z));
        out.holder_excess = std::max(
            out.holder_excess, (diff - std::pow(dxy, family.holder_gamma) * env) / env);
      }
    }
  }
  return out;
}

// K(x, z) = (c0 + c1 sin(freq x_0)) |z|^{-d-sigma}, optionally cut to B_1.
inline KernelFamily make_sinusoidal_kernel(std::size_t dim, double sigma, double c0, double c1,
                                           double freq, bool unit_ball) {
  require(sigma > 0.0 && sigma < 2.0, "kernel sigma must lie in (0, 2)");
  require(c0 - std::abs(c1) >= 0.0, "kernel amplitude must keep the density nonnegative");
  KernelFamily k;
  k.dim = dim;
  k.sigma = sigma;
  k.envelope_lambda = c0 + std::abs(c1);
  k.holder_gamma = 1.0;
  const double order = static_cast<double>(dim) + sigma;
  k.density = [=](PointView x, PointView z) {
    const double r = norm(z);
    if (unit_ball && r >= 1.0) return 0.0;
    return (c0 + c1 * std::sin(freq * x[0])) * std::pow(r, -order);
  };
  return k;
}

// ---------------------------------------------------------------------------
// Fractional Laplacian type: d mu_x = a(x) |z|^{-d-sigma} dz, sigma in (1, 2).

struct FracLaplFamily {
  std::size_t dim = 1;
  double sigma = 1.5;
  std::function<double(PointView)> a;
  double lipschitz_L = 0.0;  // of x -> a(x)^{1/sigma}

  void validate() const {
    require(sigma > 1.0 && sigma < 2.0, "fraclap sigma must lie in (1, 2)");
    require(static_cast<bool>(a), "fraclap family has no coefficient a(x)");
  }
  double coefficient(PointView x) const {
    const double v = a(x);
    require(std::isfinite(v) && v > 0.0 && v <= 1.0, "fraclap coefficient a(x) must be in (0, 1]");
    return v;
  }
  double radius(PointView x) const { return std::pow(coefficient(x), 1.0 / sigma); }
};

// Closed-form integrals of a |z|^{-d-sigma} over the shell r0 <= |z| < r1
// restricted to an angular cell of surface measure `cell`.
inline double fraclap_shell_mass(double a, double sigma, double cell, double r0, double r1) {
  return a * cell * (std::pow(r0, -sigma) - std::pow(r1, -sigma)) / sigma;
}

inline double fraclap_shell_moment(double a, double sigma, double cell, double r0, double r1) {
  return a * cell * (std::pow(r1, 1.0 - sigma) - std::pow(r0, 1.0 - sigma)) / (1.0 - sigma);
}

namespace detail {

// Atoms of a |z|^{-d-sigma} on consecutive shells, coordinates scaled by
// `scale` after placement (weights unchanged).
inline void fraclap_atoms(std::vector<Atom>& atoms, const std::vector<double>& edges, double a,
                          double sigma, const std::vector<AngularCell>& cells, double scale) {
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    for (const auto& cell : cells) {
      const double mass = fraclap_shell_mass(a, sigma, cell.measure, edges[s], edges[s + 1]);
      if (!(mass > 0.0)) continue;
      const double moment = fraclap_shell_moment(a, sigma, cell.measure, edges[s], edges[s + 1]);
      const double rc = std::clamp(moment / mass, edges[s], edges[s + 1]);
      atoms.push_back({scaled(cell.direction, scale * rc), mass});
    }
  }
}

}  // namespace detail

struct FracLaplSplit {
  DiscreteMeasure hat;    // inside B_{r_x}
  DiscreteMeasure tilde;  // r_x <= |z| < 1
  DiscreteMeasure check;  // 1 <= |z| < r_max
  double r_x = 0.0;
  double hat_inner = 0.0;  // hat covers [hat_inner, r_x); 0 when dropped
};

// The small-jump part is the image of the reference measure |z|^{-d-sigma}
// on [r_min, 1) under z -> r_x z, which is exactly a(x)|z|^{-d-sigma} on
// [r_x r_min, r_x). Sharing one reference keeps x -> hat Lipschitz. When
// r_x <= r_min the whole ball lies inside the truncation and hat is empty.
inline FracLaplSplit split_fraclap(const FracLaplFamily& family, PointView x,
                                   const AnnularGrid& grid) {
  family.validate();
  grid.validate();
  require(grid.r_min < 1.0, "fraclap grid needs r_min < 1");
  const double a = family.coefficient(x);
  const double rx = std::min(1.0, family.radius(x));
  const double q = grid.shell_ratio();
  const auto cells = angular_cells(family.dim, grid.n_angular);
  FracLaplSplit out{DiscreteMeasure(family.dim), DiscreteMeasure(family.dim),
                    DiscreteMeasure(family.dim), rx, 0.0};
  std::vector<Atom> atoms;
  if (rx > grid.r_min) {
    detail::fraclap_atoms(atoms, shell_edges(grid.r_min, 1.0, q), 1.0, family.sigma, cells, rx);
    out.hat = DiscreteMeasure(family.dim, atoms);
    out.hat_inner = rx * grid.r_min;
  }
  atoms.clear();
  detail::fraclap_atoms(atoms, shell_edges(rx, 1.0, q), a, family.sigma, cells, 1.0);
  out.tilde = DiscreteMeasure(family.dim, atoms);
  atoms.clear();
  if (grid.r_max > 1.0) {
    detail::fraclap_atoms(atoms, shell_edges(1.0, grid.r_max, q), a, family.sigma, cells, 1.0);
  }
  out.check = DiscreteMeasure(family.dim, atoms);
  return out;
}

inline DiscreteMeasure fraclap_measure(const FracLaplFamily& family, PointView x,
                                       const AnnularGrid& grid) {
  auto s = split_fraclap(family, x, grid);
  return combine(combine(s.hat, s.tilde), s.check);
}

// p-cost of the part of a(x)|z|^{-d-sigma} below the hat's inner radius.
inline double fraclap_truncation_cost(const FracLaplFamily& family, PointView x,
                                      const AnnularGrid& grid, double p) {
  family.validate();
  const double a = family.coefficient(x);
  const double rx = std::min(1.0, family.radius(x));
  const double inner = rx > grid.r_min ? rx * grid.r_min : rx;
  if (p <= family.sigma) return INFINITY;
  return a * quad::sphere_area(family.dim) * std::pow(inner, p - family.sigma) /
         (p - family.sigma);
}

// a(x) = (base + amp sin(freq x_0))^sigma, so a^{1/sigma} is amp*freq-Lipschitz.
inline FracLaplFamily make_sinusoidal_fraclap(std::size_t dim, double sigma, double base,
                                              double amp, double freq) {
  require(base - std::abs(amp) > 0.0 && base + std::abs(amp) <= 1.0,
          "fraclap profile must stay in (0, 1]");
  FracLaplFamily f;
  f.dim = dim;
  f.sigma = sigma;
  f.a = [=](PointView x) { return std::pow(base + amp * std::sin(freq * x[0]), sigma); };
  f.lipschitz_L = std::abs(amp * freq);
  f.validate();
  return f;
}

// Largest sampled |a(x)^{1/sigma} - a(y)^{1/sigma}| / |x - y|.
inline double sampled_radius_lipschitz(const FracLaplFamily& family,
                                       const std::vector<Point>& xs) {
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double dxy = std::sqrt(squared_distance(xs[i], xs[j]));
      if (dxy == 0.0) continue;
      worst = std::max(worst, std::abs(family.radius(xs[i]) - family.radius(xs[j])) / dxy);
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Push-forward families: mu_x = (T_x)_# mu.

struct LevyItoFamily {
  DiscreteMeasure base;
  std::size_t image_dim = 1;
  std::function<Point(PointView x, PointView z)> map;
  std::function<double(PointView z)> rho;
  double bound_C = 1.0;
};

inline DiscreteMeasure pushforward(const LevyItoFamily& family, PointView x) {
  require(static_cast<bool>(family.map), "push-forward family has no map");
  return push_forward(family.base, family.image_dim,
                      [&](PointView z) { return family.map(x, z); });
}

// Largest sampled ratios |T_x(z)| / (C rho(z)) and
// |T_x(z) - T_y(z)| / (C rho(z) |x - y|); both <= 1 when the bounds hold.
struct LevyItoCheck {
  double size_ratio = 0.0;
  double lipschitz_ratio = 0.0;
};

inline LevyItoCheck check_levyito_family(const LevyItoFamily& family,
                                         const std::vector<Point>& xs) {
  require(static_cast<bool>(family.rho), "push-forward family has no rho bound");
  LevyItoCheck out;
  for (std::size_t i = 0; i < family.base.size(); ++i) {
    auto z = family.base.position(i);
    const double scale = family.bound_C * family.rho(z);
    for (std::size_t a = 0; a < xs.size(); ++a) {
      const Point tx = family.map(xs[a], z);
      out.size_ratio = std::max(out.size_ratio, norm(tx) / scale);
      for (std::size_t b = a + 1; b < xs.size(); ++b) {
        const double dxy = std::sqrt(squared_distance(xs[a], xs[b]));
        if (dxy == 0.0) continue;
        const Point ty = family.map(xs[b], z);
        out.lipschitz_ratio =
            std::max(out.lipschitz_ratio, std::sqrt(squared_distance(tx, ty)) / (scale * dxy));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Regularity sweeps.

struct SweepPair {
  Point x;
  Point y;
};

struct SweepRow {
  Point x;
  Point y;
  double separation = 0.0;
  double distance = 0.0;
  double ratio = 0.0;
  double truncation_cost = 0.0;
};

struct SweepReport {
  double max_ratio = 0.0;
  std::vector<SweepRow> rows;
};

// Pairs (x, x + delta e): x uniform in [-half_width, half_width]^d, e a
// random unit vector, delta log-spaced over [delta_min, delta_max].
inline std::vector<SweepPair> sweep_pairs(std::size_t dim, std::size_t count, std::uint64_t seed,
                                          double half_width = 1.0, double delta_min = 1e-3,
                                          double delta_max = 0.5) {
  std::vector<SweepPair> pairs;
  pairs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = count > 1 ? static_cast<double>(k) / static_cast<double>(count - 1) : 0.0;
    const double delta = delta_min * std::pow(delta_max / delta_min, t);
    Rng rng = instance_rng(seed, k);
    Point x(dim);
    for (auto& c : x) c = uniform(rng, -half_width, half_width);
    Point e = random_point(rng, dim, 1.0);
    const double len = norm(e);
    Point y(x);
    for (std::size_t c = 0; c < dim; ++c) y[c] += delta * e[c] / len;
    pairs.push_back({std::move(x), std::move(y)});
  }
  return pairs;
}

// ratio_k = distance(mu_{x_k}, mu_{y_k}) / |x_k - y_k|^s. `truncation` (if
// set) gives the discarded p-cost at a point; rows carry the sum for x and y.
template <class Make>
SweepReport regularity_sweep(Make&& make_measure, const std::vector<SweepPair>& pairs, double p,
                             double s, const std::function<double(PointView)>& truncation = {}) {
  require_exponent(p);
  require(s > 0.0 && s <= 1.0, "sweep exponent s must lie in (0, 1]");
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    require(pairs[k].x.size() == pairs[k].y.size(), "sweep pair " + std::to_string(k) +
                                                        " has mismatched dimensions");
    require(squared_distance(pairs[k].x, pairs[k].y) > 0.0,
            "sweep pair " + std::to_string(k) + " has x == y");
  }
  SweepReport report;
  report.rows.resize(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto& pr = pairs[k];
    SweepRow row{pr.x, pr.y};
    row.separation = std::sqrt(squared_distance(pr.x, pr.y));
    row.distance = distance(make_measure(PointView(pr.x)), make_measure(PointView(pr.y)), p);
    row.ratio = row.distance / std::pow(row.separation, s);
    if (truncation) row.truncation_cost = truncation(pr.x) + truncation(pr.y);
    report.rows[k] = std::move(row);
  });
  for (const auto& row : report.rows) report.max_ratio = std::max(report.max_ratio, row.ratio);
  return report;
}

// Empirical tail modulus theta(r) = sup_x int_{B_r} |z|^p d mu_x over the
// sampled points, for each radius.
template <class Make>
std::vector<double> tail_modulus(Make&& make_measure, const std::vector<Point>& xs,
                                 const std::vector<double>& radii, double p) {
  std::vector<double> out(radii.size(), 0.0);
  for (const auto& x : xs) {
    const DiscreteMeasure mu = make_measure(PointView(x));
    for (std::size_t k = 0; k < radii.size(); ++k) {
      out[k] = std::max(out[k], inner_power_mass(mu, radii[k], p));
    }
  }
  return out;
}

}  // namespace levyot

#endif  // LEVYOT_FAMILIES_HPP_
