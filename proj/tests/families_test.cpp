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

#include "levyot/families.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "levyot/bounds.hpp"
#include "test_support.hpp"

namespace levyot {
namespace {

using testing::measure_1d;

KernelFamily PowerKernel(double sigma) {
  KernelFamily k;
  k.sigma = sigma;
  k.density = [sigma](PointView, PointView z) {
    const double r = norm(z);
    return r < 1.0 ? std::pow(r, -1.0 - sigma) : 0.0;
  };
  return k;
}

TEST(AnnularGridTest, EdgesAndValidation) {
  AnnularGrid g{0.01, 1.0, 4, 1, {0.5}};
  auto e = g.edges();
  ASSERT_EQ(e.size(), 6u);
  EXPECT_EQ(e.front(), 0.01);
  EXPECT_EQ(e.back(), 1.0);
  EXPECT_NEAR(e[1], 0.01 * std::sqrt(10.0), 1e-15);
  EXPECT_THROW((AnnularGrid{0.0, 1.0, 4, 1}.validate()), InvalidInput);
  EXPECT_THROW((AnnularGrid{0.5, 0.4, 4, 1}.validate()), InvalidInput);
}

TEST(AngularCellsTest, MeasuresSumToSphereArea) {
  for (std::size_t d = 1; d <= 3; ++d) {
    double total = 0.0;
    for (const auto& c : angular_cells(d, 12)) {
      total += c.measure;
      EXPECT_NEAR(norm(c.direction), 1.0, 1e-15);
    }
    EXPECT_NEAR(total, quad::sphere_area(d), 1e-12);
  }
  EXPECT_THROW(angular_cells(4, 8), InvalidInput);
}

TEST(DiscretizeKernelTest, ZeroKernelIsEmpty) {
  KernelFamily k;
  k.density = [](PointView, PointView) { return 0.0; };
  EXPECT_TRUE(discretize_kernel(k, Point{0.0}, AnnularGrid{}).empty());
}

TEST(DiscretizeKernelTest, PowerLawMassMatchesAntiderivative) {
  const double sigma = 0.5, rmin = 1e-3;
  auto mu = discretize_kernel(PowerKernel(sigma), Point{0.0}, AnnularGrid{rmin, 1.0, 400, 1});
  const double exact = 2.0 / sigma * (std::pow(rmin, -sigma) - 1.0);
  EXPECT_LE(std::abs(mu.total_mass() - exact) / exact, 1e-3);
  EXPECT_EQ(mu.size(), 800u);
}

TEST(DiscretizeKernelTest, AtomsStayInTheirShells) {
  AnnularGrid g{1e-2, 1.0, 20, 6};
  KernelFamily k = make_sinusoidal_kernel(2, 0.5, 1.0, 0.5, 1.0, true);
  k.dim = 2;
  auto mu = discretize_kernel(k, Point{0.3, 0.0}, g);
  const auto e = g.edges();
  EXPECT_EQ(mu.size(), 20u * 6u);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double r = mu.radius(i);
    const std::size_t shell = i / 6;
    EXPECT_GE(r, e[shell] * (1 - 1e-14));
    EXPECT_LE(r, e[shell + 1] * (1 + 1e-14));
  }
}

TEST(DiscretizeKernelTest, IndependentOfXForConstantKernel) {
  auto k = PowerKernel(0.5);
  AnnularGrid g{1e-2, 1.0, 30, 1};
  auto a = discretize_kernel(k, Point{0.1}, g);
  auto b = discretize_kernel(k, Point{0.9}, g);
  EXPECT_EQ(tv_distance(a, b), 0.0);
}

TEST(DiscretizeKernelTest, RejectsNonFiniteDensity) {
  KernelFamily k;
  k.density = [](PointView, PointView) { return NAN; };
  EXPECT_THROW(discretize_kernel(k, Point{0.0}, AnnularGrid{0.1, 1.0, 2, 1}), InvalidInput);
}

TEST(DiscretizeKernelTest, RefinementDistancesShrink) {
  auto k = PowerKernel(0.5);
  std::vector<double> gaps;
  for (std::size_t n : {25u, 50u, 100u, 200u}) {
    auto coarse = discretize_kernel(k, Point{0.0}, AnnularGrid{1e-3, 1.0, n, 1});
    auto fine = discretize_kernel(k, Point{0.0}, AnnularGrid{1e-3, 1.0, 2 * n, 1});
    gaps.push_back(distance(coarse, fine, 1.0));
  }
  for (std::size_t i = 0; i + 1 < gaps.size(); ++i) EXPECT_LT(gaps[i + 1], gaps[i]);
}

TEST(SplitFraclapTest, CoefficientOneHasNoMiddle) {
  FracLaplFamily f;
  f.sigma = 1.5;
  f.a = [](PointView) { return 1.0; };
  auto s = split_fraclap(f, Point{0.0}, AnnularGrid{1e-3, 2.0, 50, 1});
  EXPECT_TRUE(s.tilde.empty());
  EXPECT_FALSE(s.hat.empty());
  EXPECT_FALSE(s.check.empty());
}

TEST(SplitFraclapTest, TinyCoefficientHasNoSmallJumps) {
  FracLaplFamily f;
  f.sigma = 1.5;
  f.a = [](PointView) { return 1e-12; };
  auto s = split_fraclap(f, Point{0.0}, AnnularGrid{1e-3, 2.0, 50, 1});
  EXPECT_LE(s.hat.total_mass(), 1e-9);
}

TEST(SplitFraclapTest, ShellMassesAndAnnuli) {
  FracLaplFamily f;
  f.sigma = 1.5;
  f.a = [](PointView) { return 0.25; };
  AnnularGrid g{1e-3, 3.0, 60, 1};
  auto s = split_fraclap(f, Point{0.0}, g);
  const double rx = std::pow(0.25, 1.0 / 1.5);
  EXPECT_NEAR(s.r_x, 0.39685026299204984, 1e-15);
  EXPECT_NEAR(s.r_x, rx, 1e-15);
  auto mass = [&](double r0, double r1) {
    return 2.0 * 0.25 * (std::pow(r0, -1.5) - std::pow(r1, -1.5)) / 1.5;
  };
  EXPECT_NEAR(s.hat.total_mass(), mass(rx * 1e-3, rx), 1e-9 * s.hat.total_mass());
  EXPECT_NEAR(s.tilde.total_mass(), mass(rx, 1.0), 1e-12);
  EXPECT_NEAR(s.check.total_mass(), mass(1.0, 3.0), 1e-12);
  for (std::size_t i = 0; i < s.hat.size(); ++i) {
    EXPECT_GE(s.hat.radius(i), s.hat_inner);
    EXPECT_LT(s.hat.radius(i), rx);
  }
  for (std::size_t i = 0; i < s.tilde.size(); ++i) {
    EXPECT_GE(s.tilde.radius(i), rx);
    EXPECT_LT(s.tilde.radius(i), 1.0);
  }
  for (std::size_t i = 0; i < s.check.size(); ++i) {
    EXPECT_GE(s.check.radius(i), 1.0);
    EXPECT_LT(s.check.radius(i), 3.0);
  }
  auto whole = fraclap_measure(f, Point{0.0}, g);
  EXPECT_NEAR(whole.total_mass(),
              s.hat.total_mass() + s.tilde.total_mass() + s.check.total_mass(), 1e-9);
}

TEST(SplitFraclapTest, RejectsSigmaOutsideRange) {
  FracLaplFamily f;
  f.sigma = 0.8;
  f.a = [](PointView) { return 0.5; };
  EXPECT_THROW(split_fraclap(f, Point{0.0}, AnnularGrid{}), InvalidInput);
}

TEST(PushforwardTest, Examples) {
  LevyItoFamily fam{measure_1d({{1.0, 3.0}}), 1,
                    [](PointView, PointView z) { return Point{2.0 * z[0]}; }};
  auto img = pushforward(fam, Point{0.0});
  ASSERT_EQ(img.size(), 1u);
  EXPECT_EQ(img.position(0)[0], 2.0);
  EXPECT_EQ(img.weight(0), 3.0);
  fam.map = [](PointView, PointView z) { return Point(z.begin(), z.end()); };
  EXPECT_EQ(tv_distance(pushforward(fam, Point{0.5}), fam.base), 0.0);
  fam.map = [](PointView, PointView) { return Point{0.0}; };
  EXPECT_TRUE(pushforward(fam, Point{0.5}).empty());
}

TEST(PushforwardTest, CouplingBoundHolds) {
  Rng rng = instance_rng(4, 0);
  auto base = random_measure(rng, RandomMeasureSpec{1, 30, 10, 1.0, false});
  LevyItoFamily fam{base, 1,
                    [](PointView x, PointView z) { return Point{(1.0 + 0.3 * std::sin(x[0])) * z[0]}; },
                    [](PointView z) { return norm(z); }, 1.3};
  const auto check = check_levyito_family(fam, {{-1.0}, {0.0}, {0.4}, {1.0}});
  EXPECT_LE(check.size_ratio, 1.0);
  EXPECT_LE(check.lipschitz_ratio, 1.0);
  for (double p : {1.0, 1.5, 2.0}) {
    Point x{0.2}, y{0.7};
    const double d = distance(pushforward(fam, x), pushforward(fam, y), p);
    const double bound = pushforward_bound([&](PointView z) { return fam.map(x, z); },
                                           [&](PointView z) { return fam.map(y, z); }, base, p);
    EXPECT_LE(std::pow(d, p), bound + 1e-12);
  }
}

TEST(RegularitySweepTest, ConstantFamilyHasZeroRatios) {
  auto mu = measure_1d({{0.3, 1.0}});
  auto pairs = sweep_pairs(1, 10, 3);
  auto rep = regularity_sweep([&](PointView) { return mu; }, pairs, 2.0, 1.0);
  EXPECT_EQ(rep.max_ratio, 0.0);
  EXPECT_EQ(rep.rows.size(), 10u);
}

TEST(RegularitySweepTest, TranslationFamilyHasExactRatio) {
  const double m = 0.2;
  auto make = [&](PointView x) { return measure_1d({{0.3 + m * x[0], 1.0}}); };
  std::vector<SweepPair> pairs{{{0.1}, {0.1 + 1e-3}}, {{-0.4}, {-0.39}}};
  for (double p : {1.0, 1.5, 2.0}) {
    auto rep = regularity_sweep(make, pairs, p, 1.0);
    for (const auto& row : rep.rows) EXPECT_NEAR(row.ratio, m, 1e-9);
  }
}

TEST(RegularitySweepTest, RejectsCoincidentPair) {
  auto mu = measure_1d({{0.3, 1.0}});
  std::vector<SweepPair> pairs{{{0.1}, {0.1}}};
  EXPECT_THROW(regularity_sweep([&](PointView) { return mu; }, pairs, 1.0, 1.0), InvalidInput);
}

TEST(RegularitySweepTest, SweepPairsAreSeededAndSpaced) {
  auto a = sweep_pairs(2, 5, 9), b = sweep_pairs(2, 5, 9);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_EQ(a[k].x, b[k].x);
    EXPECT_EQ(a[k].y, b[k].y);
  }
  EXPECT_NEAR(std::sqrt(squared_distance(a[0].x, a[0].y)), 1e-3, 1e-15);
  EXPECT_NEAR(std::sqrt(squared_distance(a[4].x, a[4].y)), 0.5, 1e-14);
}

TEST(KernelFamilyTest, SinusoidalKernelDeclaredBoundsHold) {
  auto k = make_sinusoidal_kernel(1, 0.5, 1.0, 0.5, 1.0, true);
  std::vector<Point> xs, zs;
  for (int i = 0; i <= 20; ++i) xs.push_back({-1.0 + 0.1 * i});
  for (int i = 1; i <= 20; ++i) zs.push_back({0.05 * i * (i % 2 ? 1.0 : -1.0)});
  auto c = check_kernel_family(k, xs, zs);
  EXPECT_LE(c.envelope_excess, 0.0);
  EXPECT_LE(c.holder_excess, 0.0);
}

TEST(KernelFamilyTest, EstimateMatchesClosedForm) {
  // int_{-1}^{1} |z| |z|^{-1.5} 0.5 |sin x - sin y| dz = 4 * 0.5 |sin x - sin y|.
  auto k = make_sinusoidal_kernel(1, 0.5, 1.0, 0.5, 1.0, true);
  const double est = kernel_distance_estimate(k, Point{0.2}, Point{0.5}, 1.0);
  EXPECT_NEAR(est, 2.0 * std::abs(std::sin(0.2) - std::sin(0.5)), 1e-8);
  // Truncation cost: 2 * int_0^r z^{1-1.5} dz * (1 + 0.5 sin 0) = 4 sqrt(r).
  EXPECT_NEAR(kernel_truncation_cost(k, Point{0.0}, 1e-3, 1.0), 4.0 * std::sqrt(1e-3), 1e-9);
}

TEST(TailModulusTest, MonotoneInRadius) {
  auto k = make_sinusoidal_kernel(1, 0.5, 1.0, 0.5, 1.0, true);
  AnnularGrid g{1e-3, 1.0, 60, 1};
  auto make = [&](PointView x) { return discretize_kernel(k, x, g); };
  auto th = tail_modulus(make, {{-0.5}, {0.0}, {0.5}}, {0.01, 0.1, 0.5, 1.0}, 1.0);
  for (std::size_t i = 0; i + 1 < th.size(); ++i) EXPECT_LE(th[i], th[i + 1]);
}

}  // namespace
}  // namespace levyot
