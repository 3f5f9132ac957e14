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

// Seeded generators for random measures used by the invariant suites.

#ifndef LEVYOT_RANDOM_HPP_
#define LEVYOT_RANDOM_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "levyot/measures.hpp"

namespace levyot {

using Rng = std::mt19937_64;

// Independent stream for instance `index` of a suite run with `seed`.
inline Rng instance_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Uniform point in the ball of radius `radius` minus a small core around 0.
inline std::vector<double> random_point(Rng& rng, std::size_t dim, double radius) {
  std::normal_distribution<double> gauss;
  std::vector<double> z(dim);
  double r2 = 0.0;
  do {
    r2 = 0.0;
    for (auto& c : z) {
      c = gauss(rng);
      r2 += c * c;
    }
  } while (r2 == 0.0);
  const double scale =
      radius * std::pow(uniform(rng, 1e-6, 1.0), 1.0 / static_cast<double>(dim)) / std::sqrt(r2);
  for (auto& c : z) c *= scale;
  return z;
}

struct RandomMeasureSpec {
  std::size_t dim = 1;
  std::size_t max_atoms = 10;
  std::size_t min_atoms = 0;
  double radius = 1.0;
  bool unit_weights = false;
};

inline DiscreteMeasure random_measure(Rng& rng, const RandomMeasureSpec& spec) {
  const std::size_t n = uniform_index(rng, spec.min_atoms, spec.max_atoms);
  std::vector<Atom> atoms;
  atoms.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = spec.unit_weights ? 1.0 : uniform(rng, 0.05, 2.0);
    atoms.push_back({random_point(rng, spec.dim, spec.radius), w});
  }
  return DiscreteMeasure(spec.dim, atoms);
}

// A measure sharing some atoms with `base` (perturbed weights) plus fresh
// atoms, so that tv-type quantities see both overlap and disjoint mass.
inline DiscreteMeasure random_neighbor(Rng& rng, const DiscreteMeasure& base,
                                       const RandomMeasureSpec& spec) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (uniform(rng, 0.0, 1.0) < 0.6) {
      Atom a = base.atom(i);
      if (!spec.unit_weights) a.w *= uniform(rng, 0.5, 1.5);
      atoms.push_back(std::move(a));
    }
  }
  const std::size_t extra = uniform_index(rng, 0, spec.max_atoms / 2 + 1);
  for (std::size_t k = 0; k < extra && atoms.size() < spec.max_atoms; ++k) {
    atoms.push_back({random_point(rng, spec.dim, spec.radius),
                     spec.unit_weights ? 1.0 : uniform(rng, 0.05, 2.0)});
  }
  return DiscreteMeasure(spec.dim, atoms);
}

}  // namespace levyot

#endif  // LEVYOT_RANDOM_HPP_
