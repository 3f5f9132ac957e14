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

// One-dimensional quadrature helpers on top of Boost.Math.

#ifndef LEVYOT_QUADRATURE_HPP_
#define LEVYOT_QUADRATURE_HPP_

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "levyot/common.hpp"

namespace levyot::quad {

inline constexpr double kDefaultTolerance = 1e-10;

// Adaptive 15-point Gauss-Kronrod on [a, b], at most 12 bisection levels.
template <class F>
double integrate(F&& f, double a, double b, double tol = kDefaultTolerance) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 12, tol, &err);
}

// Integral over [a, b] split at the given interior breakpoints, so that
// integrands with jumps at known radii are integrated piecewise.
template <class F>
double integrate_with_breaks(F&& f, double a, double b, std::vector<double> breaks,
                             double tol = kDefaultTolerance) {
  if (!(b > a)) return 0.0;
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  KahanSum s;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = std::max(a, breaks[k]);
    const double hi = std::min(b, breaks[k + 1]);
    if (hi > lo) s += integrate(f, lo, hi, tol);
  }
  return s.value();
}

// Integral over (0, b] for integrands with an integrable singularity at 0.
// Works in t = log r on unit pieces (Boost's error estimate degrades on
// intervals far below 1) and stops once the geometric tail is negligible.
template <class F>
double integrate_to_zero(F&& f, double b, double tol = kDefaultTolerance) {
  auto g = [&](double t) {
    const double r = std::exp(t);
    return f(r) * r;
  };
  KahanSum s;
  double hi = std::log(b);
  double prev = 0.0;
  for (int k = 0; k < 800; ++k) {
    const double piece = integrate(g, hi - 1.0, hi, tol);
    s += piece;
    hi -= 1.0;
    if (k > 4 && std::abs(piece) < std::abs(prev)) {
      const double q = std::abs(piece / prev);
      if (std::abs(piece) * q / (1.0 - q) <= 0.1 * tol * std::abs(s.value())) break;
    }
    if (k > 4 && piece == 0.0 && prev == 0.0) break;
    prev = piece;
  }
  return s.value();
}

// Fixed 10-point Gauss-Legendre rule on [a, b].
template <class F>
double gauss_legendre(F&& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
}

// Surface measure of the unit sphere S^{d-1}.
inline double sphere_area(std::size_t dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: {
      const double h = 0.5 * static_cast<double>(dim);
      return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
    }
  }
}

}  // namespace levyot::quad

#endif  // LEVYOT_QUADRATURE_HPP_
