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

// Closed-form upper bounds on the reservoir transport distance, and the
// integral estimates they feed.

#ifndef LEVYOT_BOUNDS_HPP_
#define LEVYOT_BOUNDS_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "levyot/common.hpp"
#include "levyot/families.hpp"
#include "levyot/measures.hpp"
#include "levyot/quadrature.hpp"
#include "levyot/transport.hpp"

namespace levyot {

inline constexpr double kBoundAbsSlack = 1e-8;
inline constexpr double kBoundRelSlack = 1e-9;

// A bound checked against the quantity it controls: pass iff
// lhs <= rhs + 1e-8 + 1e-9 |rhs|.
struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack() const { return rhs - lhs; }
  bool pass() const { return slack() >= -(kBoundAbsSlack + kBoundRelSlack * std::abs(rhs)); }
};

namespace detail {

inline void require_unit_ball(const DiscreteMeasure& mu, const std::string& what) {
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.radius(i) >= 1.0) {
      throw InvalidInput(what + ": atom " + std::to_string(i) + " lies outside the open unit ball");
    }
  }
}

}  // namespace detail

// 2^{(p-1)/p} d_TV(|z|^p mu, |z|^p nu)^{1/p}, for measures inside B_1.
inline double tv_power_bound(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  require_exponent(p);
  detail::check_pair(mu, nu);
  detail::require_unit_ball(mu, "tv_power_bound");
  detail::require_unit_ball(nu, "tv_power_bound");
  const double tv = tv_distance(weight_by_power(mu, p), weight_by_power(nu, p));
  return std::pow(2.0, (p - 1.0) / p) * std::pow(tv, 1.0 / p);
}

// int |z|^p d(mu - nu), valid as a bound on distance^p when mu - nu >= 0.
inline double positive_part_dual_bound(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                       double p) {
  require_exponent(p);
  detail::check_pair(mu, nu);
  std::map<std::vector<double>, double> excess;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto z = mu.position(i);
    excess[std::vector<double>(z.begin(), z.end())] += mu.weight(i);
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    auto z = nu.position(j);
    auto it = excess.find(std::vector<double>(z.begin(), z.end()));
    const double have = it == excess.end() ? 0.0 : it->second;
    if (have < nu.weight(j)) {
      throw InvalidInput("positive_part_dual_bound: mu - nu is negative at nu atom " +
                         std::to_string(j));
    }
    it->second = have - nu.weight(j);
  }
  KahanSum s;
  for (const auto& [z, w] : excess) s += power_from_squared(squared_norm(z), p) * w;
  return s.value();
}

// sum_{|z| < r} |z|^p w(z), which bounds distance(mu, mu restricted to |z| >= r)^p.
inline double restriction_bound(const DiscreteMeasure& mu, double r, double p) {
  require_exponent(p);
  require(r > 0.0 && r <= 1.0, "restriction_bound: r must lie in (0, 1]");
  return inner_power_mass(mu, r, p);
}

// sum_i w_i |T1(z_i) - T2(z_i)|^p: the cost of the coupling (T1 x T2)_# base.
template <class Map1, class Map2>
double pushforward_bound(Map1&& t1, Map2&& t2, const DiscreteMeasure& base, double p) {
  require_exponent(p);
  KahanSum s;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const std::vector<double> a = t1(base.position(i));
    const std::vector<double> b = t2(base.position(i));
    require(a.size() == b.size(), "pushforward_bound: maps disagree on image dimension");
    s += power_from_squared(squared_distance(a, b), p) * base.weight(i);
  }
  return s.value();
}

// Radial test function psi(z) = profile(|z|): piecewise linear through the
// knots, zero outside [radii.front(), radii.back()].
class RadialTestFunction {
 public:
  RadialTestFunction() = default;
  RadialTestFunction(std::vector<double> radii, std::vector<double> values)
      : radii_(std::move(radii)), values_(std::move(values)) {
    require(radii_.size() == values_.size(), "test function: knot count mismatch");
    if (radii_.empty()) return;
    require(radii_.size() >= 2, "test function needs at least two knots");
    require(radii_.front() > 0.0, "test function support touches the origin");
    require(radii_.back() <= 1.0, "test function support leaves the closed unit ball");
    require(values_.front() == 0.0 && values_.back() == 0.0,
            "test function must vanish at its end knots");
    for (std::size_t k = 0; k + 1 < radii_.size(); ++k) {
      require(radii_[k + 1] > radii_[k], "test function knots must increase");
    }
    for (double v : values_) require(std::isfinite(v), "test function value is not finite");
  }

  // Hat function rising linearly from a to the midpoint and back to b.
  static RadialTestFunction hat(double a, double b, double height) {
    return RadialTestFunction({a, 0.5 * (a + b), b}, {0.0, height, 0.0});
  }

  double operator()(std::span<const double> z) const { return profile(norm(z)); }

  double profile(double r) const {
    if (radii_.empty() || r <= radii_.front() || r >= radii_.back()) return 0.0;
    const auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
    const std::size_t k = static_cast<std::size_t>(it - radii_.begin()) - 1;
    const double t = (r - radii_[k]) / (radii_[k + 1] - radii_[k]);
    return values_[k] + t * (values_[k + 1] - values_[k]);
  }

  // Exact Lipschitz constant: the steepest segment.
  double lipschitz() const {
    double lip = 0.0;
    for (std::size_t k = 0; k + 1 < radii_.size(); ++k) {
      lip = std::max(lip, std::abs(values_[k + 1] - values_[k]) / (radii_[k + 1] - radii_[k]));
    }
    return lip;
  }

  // Whether |z| = r lies in the closed support.
  bool in_support(double r) const {
    for (std::size_t k = 0; k + 1 < radii_.size(); ++k) {
      if ((values_[k] != 0.0 || values_[k + 1] != 0.0) && r >= radii_[k] && r <= radii_[k + 1]) {
        return true;
      }
    }
    return false;
  }

  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> radii_;
  std::vector<double> values_;
};

// |int psi dmu - int psi dnu| against
// (mu(spt psi) + nu(spt psi))^{(p-1)/p} [psi]_Lip distance(mu, nu).
inline BoundCheck restricted_integral_bound(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                            const RadialTestFunction& psi, double p) {
  require_exponent(p);
  detail::check_pair(mu, nu);
  detail::require_unit_ball(mu, "restricted_integral_bound");
  detail::require_unit_ball(nu, "restricted_integral_bound");
  KahanSum integral, support_mass;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    integral += psi(mu.position(i)) * mu.weight(i);
    if (psi.in_support(mu.radius(i))) support_mass += mu.weight(i);
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    integral += -psi(nu.position(j)) * nu.weight(j);
    if (psi.in_support(nu.radius(j))) support_mass += nu.weight(j);
  }
  const double lip = psi.lipschitz();
  BoundCheck out{"restricted_integral", std::abs(integral.value()), 0.0};
  if (lip > 0.0) {
    out.rhs = std::pow(support_mass.value(), (p - 1.0) / p) * lip * distance(mu, nu, p);
  }
  return out;
}

// The pair (psi, -psi) of a 1-Lipschitz psi with psi(0) = 0 as dual potentials.
template <class Psi>
DualPotentials sayah_duals(Psi&& psi, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  DualPotentials d;
  d.phi.reserve(mu.size());
  d.psi.reserve(nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) d.phi.push_back(psi(mu.position(i)));
  for (std::size_t j = 0; j < nu.size(); ++j) d.psi.push_back(-psi(nu.position(j)));
  return d;
}

// ---------------------------------------------------------------------------
// Checks of each bound against the exact solver.

inline BoundCheck check_tv_power_bound(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                       double p) {
  return {"tv_power", distance(mu, nu, p), tv_power_bound(mu, nu, p)};
}

inline BoundCheck check_positive_part_dual_bound(const DiscreteMeasure& mu,
                                                 const DiscreteMeasure& nu, double p) {
  return {"positive_part_dual", solve(mu, nu, CostSpec{p}).value,
          positive_part_dual_bound(mu, nu, p)};
}

inline BoundCheck check_restriction_bound(const DiscreteMeasure& mu, double r, double p) {
  return {"restriction", solve(mu, restrict_outside(mu, r), CostSpec{p}).value,
          restriction_bound(mu, r, p)};
}

template <class Map1, class Map2>
BoundCheck check_pushforward_bound(Map1&& t1, Map2&& t2, const DiscreteMeasure& base,
                                   std::size_t image_dim, double p) {
  const auto a = push_forward(base, image_dim, t1);
  const auto b = push_forward(base, image_dim, t2);
  return {"pushforward", solve(a, b, CostSpec{p}).value, pushforward_bound(t1, t2, base, p)};
}

// ---------------------------------------------------------------------------
// The middle part mu~_x = a(x)|z|^{-d-sigma} on r_x <= |z| < 1 of a
// fractional Laplacian family, integrated directly in the radial variable.

struct MutildeReport {
  double mass_x = 0.0;  // mu~_x(B_1)
  double mass_y = 0.0;
  double first_moment_difference = 0.0;  // int |z| d|mu~_x - mu~_y|
  double lipschitz_ratio = 0.0;          // the above over |x - y|
};

inline MutildeReport mutilde_checks(const FracLaplFamily& family, PointView x, PointView y,
                                    double tol = quad::kDefaultTolerance) {
  require(family.sigma > 1.0 && family.sigma < 2.0, "mutilde_checks: sigma must lie in (1, 2)");
  family.validate();
  const double sig = family.sigma;
  const double area = quad::sphere_area(family.dim);
  const double ax = family.coefficient(x), ay = family.coefficient(y);
  const double rx = std::min(1.0, family.radius(x)), ry = std::min(1.0, family.radius(y));
  auto density = [&](double a, double rr, double r) {
    return r >= rr && r < 1.0 ? a * std::pow(r, -1.0 - sig) : 0.0;
  };
  MutildeReport out;
  out.mass_x = area * quad::integrate([&](double r) { return density(ax, rx, r); }, rx, 1.0, tol);
  out.mass_y = area * quad::integrate([&](double r) { return density(ay, ry, r); }, ry, 1.0, tol);
  const double lo = std::min(rx, ry);
  out.first_moment_difference =
      area * quad::integrate_with_breaks(
                 [&](double r) { return r * std::abs(density(ax, rx, r) - density(ay, ry, r)); },
                 lo, 1.0, {rx, ry}, tol);
  if (out.first_moment_difference > 0.0) {
    out.lipschitz_ratio = out.first_moment_difference / std::sqrt(squared_distance(x, y));
  }
  return out;
}

// Bound on the lipschitz_ratio above from the mean value theorem applied to
// a = r^sigma: S (1 + sigma / (sigma - 1)) L, S the unit sphere area.
inline double mutilde_lipschitz_constant(const FracLaplFamily& family) {
  const double sig = family.sigma;
  return quad::sphere_area(family.dim) * (1.0 + sig / (sig - 1.0)) * family.lipschitz_L;
}

}  // namespace levyot

#endif  // LEVYOT_BOUNDS_HPP_
