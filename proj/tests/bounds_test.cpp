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

#include "levyot/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "levyot/random.hpp"
#include "test_support.hpp"

namespace levyot {
namespace {

using testing::empty_measure;
using testing::measure_1d;

TEST(TvPowerBoundTest, Examples) {
  auto mu = measure_1d({{0.5, 1.0}, {-0.3, 2.0}});
  EXPECT_EQ(tv_power_bound(mu, mu, 1.5), 0.0);
  auto a = measure_1d({{0.5, 1.0}}), b = measure_1d({{0.5, 2.0}});
  EXPECT_DOUBLE_EQ(tv_power_bound(a, b, 1.0), 0.5);
  EXPECT_NEAR(distance(a, b, 1.0), 0.5, 1e-12);
  EXPECT_NEAR(tv_power_bound(a, empty_measure(), 2.0), std::sqrt(2.0) * 0.5, 1e-15);
  EXPECT_NEAR(distance(a, empty_measure(), 2.0), 0.5, 1e-15);
  EXPECT_THROW(tv_power_bound(measure_1d({{1.0, 1.0}}), a, 1.0), InvalidInput);
}

TEST(PositivePartBoundTest, Examples) {
  auto nu = measure_1d({{0.5, 1.0}, {-0.2, 0.7}});
  EXPECT_EQ(positive_part_dual_bound(nu, nu, 2.0), 0.0);
  auto mu = combine(nu, measure_1d({{0.3, 1.0}}));
  EXPECT_NEAR(positive_part_dual_bound(mu, nu, 2.0), 0.09, 1e-15);
  EXPECT_LE(std::pow(distance(mu, nu, 2.0), 2.0), 0.09 + 1e-12);
  EXPECT_NEAR(positive_part_dual_bound(nu, empty_measure(), 1.5),
              solve(nu, empty_measure(), CostSpec{1.5}).value, 1e-15);
  EXPECT_THROW(positive_part_dual_bound(nu, mu, 2.0), InvalidInput);
}

TEST(RestrictionBoundTest, Examples) {
  auto mu = measure_1d({{0.1, 1.0}, {0.5, 1.0}});
  EXPECT_EQ(restriction_bound(mu, 0.05, 2.0), 0.0);
  EXPECT_NEAR(restriction_bound(mu, 0.3, 2.0), 0.01, 1e-15);
  EXPECT_TRUE(check_restriction_bound(mu, 0.3, 2.0).pass());
  auto one = measure_1d({{0.2, 1.0}});
  auto c = check_restriction_bound(one, 0.5, 1.5);
  EXPECT_NEAR(c.lhs, c.rhs, 1e-15);
  EXPECT_THROW(restriction_bound(mu, 1.5, 2.0), InvalidInput);
}

TEST(PushforwardBoundTest, IdentityAndShift) {
  auto base = measure_1d({{0.1, 1.0}, {0.4, 1.0}, {-0.3, 1.0}});
  auto id = [](PointView z) { return Point(z.begin(), z.end()); };
  auto shift = [](PointView z) { return Point{z[0] + 0.05}; };
  EXPECT_EQ(pushforward_bound(id, id, base, 2.0), 0.0);
  for (double p : {1.0, 1.5, 2.0}) {
    const double bound = pushforward_bound(id, shift, base, p);
    EXPECT_NEAR(bound, 3.0 * std::pow(0.05, p), 1e-14);
    const double exact = brute_force_unit(push_forward(base, 1, id), push_forward(base, 1, shift), p);
    EXPECT_LE(exact, bound + 1e-12);
  }
}

TEST(PushforwardBoundTest, ScalingMapsMatchQuadrature) {
  // Reference |z|^{-1-sigma} on [1e-3, 1) pushed by z -> r z for two radii.
  const double sigma = 1.5, p = 1.75, rx = 0.4, ry = 0.45;
  FracLaplFamily ref;
  ref.sigma = sigma;
  ref.a = [](PointView) { return 1.0; };
  AnnularGrid g{1e-3, 1.0, 200, 1};
  auto base = split_fraclap(ref, Point{0.0}, g).hat;
  auto bound = pushforward_bound([&](PointView z) { return Point{rx * z[0]}; },
                                 [&](PointView z) { return Point{ry * z[0]}; }, base, p);
  const double continuum = std::pow(ry - rx, p) * 2.0 *
                           quad::integrate([&](double r) { return std::pow(r, p - 1.0 - sigma); },
                                           1e-3, 1.0);
  EXPECT_NEAR(bound, continuum, 2e-3 * continuum);
  auto check = check_pushforward_bound([&](PointView z) { return Point{rx * z[0]}; },
                                       [&](PointView z) { return Point{ry * z[0]}; }, base, 1, p);
  EXPECT_TRUE(check.pass());
}

TEST(RadialTestFunctionTest, LipschitzAndSupport) {
  auto psi = RadialTestFunction::hat(0.2, 0.8, 0.6);
  EXPECT_DOUBLE_EQ(psi.lipschitz(), 2.0);
  EXPECT_DOUBLE_EQ(psi.profile(0.5), 0.6);
  EXPECT_TRUE(psi.in_support(0.2));
  EXPECT_TRUE(psi.in_support(0.8));
  EXPECT_FALSE(psi.in_support(0.81));
  EXPECT_THROW(RadialTestFunction({0.0, 0.5}, {0.0, 0.0}), InvalidInput);
  RadialTestFunction gap({0.1, 0.2, 0.3, 0.4, 0.5}, {0.0, 1.0, 0.0, 0.0, 0.0});
  EXPECT_TRUE(gap.in_support(0.3));
  EXPECT_FALSE(gap.in_support(0.35));
}

TEST(RestrictedIntegralBoundTest, Examples) {
  auto mu = measure_1d({{0.5, 1.0}, {-0.3, 2.0}});
  auto psi = RadialTestFunction::hat(0.2, 0.8, 0.6);
  auto same = restricted_integral_bound(mu, mu, psi, 1.5);
  EXPECT_EQ(same.lhs, 0.0);
  auto zero = restricted_integral_bound(mu, measure_1d({{0.4, 1.0}}), RadialTestFunction(), 1.5);
  EXPECT_EQ(zero.lhs, 0.0);
  EXPECT_EQ(zero.rhs, 0.0);
  for (std::uint64_t k = 0; k < 50; ++k) {
    Rng rng = instance_rng(8, k);
    RandomMeasureSpec spec{1 + k % 3, 15, 0, 0.99, false};
    auto a = random_measure(rng, spec);
    auto b = random_neighbor(rng, a, spec);
    EXPECT_TRUE(restricted_integral_bound(a, b, psi, 1.0 + 0.5 * (k % 3)).pass()) << k;
  }
}

TEST(SayahDualsTest, FeasibleAndBelowDistance) {
  for (std::uint64_t k = 0; k < 50; ++k) {
    Rng rng = instance_rng(14, k);
    RandomMeasureSpec spec{1 + k % 3, 12, 0, 1.5, false};
    auto a = random_measure(rng, spec);
    auto b = random_neighbor(rng, a, spec);
    const Point c = random_point(rng, spec.dim, 1.0);
    const double t = uniform(rng, -1.0, 1.0);
    // t(|z - c| - |c|) is 1-Lipschitz and vanishes at 0.
    auto psi = [&](PointView z) { return t * (std::sqrt(squared_distance(z, c)) - norm(c)); };
    auto duals = sayah_duals(psi, a, b);
    EXPECT_FALSE(find_dual_violation(duals, a, b, 1.0).has_value());
    EXPECT_LE(dual_value(duals, a, b, 1.0), distance(a, b, 1.0) + 1e-9);
  }
}

TEST(MutildeTest, Examples) {
  FracLaplFamily f;
  f.sigma = 1.5;
  f.a = [](PointView x) { return x[0] < 0.5 ? 0.25 : 0.36; };
  auto same = mutilde_checks(f, Point{0.0}, Point{0.1});
  EXPECT_EQ(same.lipschitz_ratio, 0.0);
  // mass = 2 a (r_x^{-sigma} - 1) / sigma = 2 (1 - a) / sigma.
  EXPECT_NEAR(same.mass_x, 2.0 * 0.75 / 1.5, 1e-9);
  FracLaplFamily one;
  one.sigma = 1.5;
  one.a = [](PointView) { return 1.0; };
  EXPECT_EQ(mutilde_checks(one, Point{0.0}, Point{1.0}).mass_x, 0.0);

  auto r = mutilde_checks(f, Point{0.0}, Point{1.0});
  const double rx = std::pow(0.25, 1.0 / 1.5), ry = std::pow(0.36, 1.0 / 1.5);
  // On [rx, ry) only mu~_x; above ry both, with density gap 0.11 r^{-1-sigma}.
  const double direct = 2.0 * (0.25 * (std::pow(rx, -0.5) - std::pow(ry, -0.5)) / 0.5 +
                               0.11 * (std::pow(ry, -0.5) - 1.0) / 0.5);
  EXPECT_NEAR(r.first_moment_difference, direct, 1e-9);
  f.lipschitz_L = ry - rx;
  EXPECT_LE(r.lipschitz_ratio, mutilde_lipschitz_constant(f));

  FracLaplFamily bad = f;
  bad.sigma = 0.9;
  EXPECT_THROW(mutilde_checks(bad, Point{0.0}, Point{1.0}), InvalidInput);
}

TEST(BoundDominanceTest, RandomInstances) {
  for (std::uint64_t k = 0; k < 100; ++k) {
    Rng rng = instance_rng(31, k);
    const double p = std::array<double, 3>{1.0, 1.5, 2.0}[k % 3];
    RandomMeasureSpec spec{1 + (k / 3) % 3, 20, 0, 0.99, false};
    auto a = random_measure(rng, spec);
    auto b = random_neighbor(rng, a, spec);
    auto tv = check_tv_power_bound(a, b, p);
    EXPECT_TRUE(tv.pass()) << k;
    if (p == 1.0) EXPECT_NEAR(tv.rhs, tv_distance(weight_by_power(a, 1.0), weight_by_power(b, 1.0)), 1e-15);
    EXPECT_TRUE(check_positive_part_dual_bound(combine(a, b), b, p).pass()) << k;
    EXPECT_TRUE(check_restriction_bound(a, uniform(rng, 0.05, 1.0), p).pass()) << k;
  }
}

}  // namespace
}  // namespace levyot
