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

// Discrete Levy measures: finitely many weighted atoms in R^d \ {0}.
//
// The origin plays the role of an infinite mass reservoir, so an atom placed
// exactly at 0 carries no information and is rejected. Atoms sharing the
// same (bit-identical) coordinates are merged on construction, keeping the
// position of the first occurrence in the atom order.

#ifndef LEVYOT_MEASURES_HPP_
#define LEVYOT_MEASURES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "levyot/common.hpp"

namespace levyot {

struct Atom {
  std::vector<double> z;
  double w = 0.0;
};

class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  explicit DiscreteMeasure(std::size_t dim) : dim_(dim) {
    require(dim >= 1, "measure dimension must be positive");
  }
  DiscreteMeasure(std::size_t dim, const std::vector<Atom>& atoms) : DiscreteMeasure(dim) {
    std::map<std::vector<double>, std::size_t> seen;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      const Atom& atom = atoms[a];
      const std::string where = "atom " + std::to_string(a);
      require(atom.z.size() == dim_, where + ": dimension " + std::to_string(atom.z.size()) +
                                         " does not match measure dimension " +
                                         std::to_string(dim_));
      for (double c : atom.z) require(std::isfinite(c), where + ": non-finite coordinate");
      require(std::isfinite(atom.w) && atom.w > 0.0, where + ": weight must be finite and > 0");
      require(squared_norm(atom.z) > 0.0, where + ": atom at the origin (reservoir)");
      auto [it, inserted] = seen.emplace(atom.z, weights_.size());
      if (inserted) {
        coords_.insert(coords_.end(), atom.z.begin(), atom.z.end());
        weights_.push_back(atom.w);
      } else {
        weights_[it->second] += atom.w;
      }
    }
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }

  std::span<const double> position(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  double radius(std::size_t i) const { return norm(position(i)); }
  std::span<const double> weights() const { return weights_; }

  double total_mass() const {
    KahanSum s;
    for (double w : weights_) s += w;
    return s.value();
  }

  Atom atom(std::size_t i) const {
    auto z = position(i);
    return {std::vector<double>(z.begin(), z.end()), weights_[i]};
  }

  std::vector<Atom> atoms() const {
    std::vector<Atom> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(atom(i));
    return out;
  }

  // Atoms kept in order; a filter that preserves the merge invariant.
  template <class Pred>
  DiscreteMeasure filter(Pred&& keep) const {
    DiscreteMeasure out(dim_);
    for (std::size_t i = 0; i < size(); ++i) {
      if (keep(position(i), weights_[i])) {
        auto z = position(i);
        out.coords_.insert(out.coords_.end(), z.begin(), z.end());
        out.weights_.push_back(weights_[i]);
      }
    }
    return out;
  }

 private:
  std::size_t dim_ = 1;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

struct MeasureDecomposition {
  DiscreteMeasure hat;    // |z| < 1
  DiscreteMeasure check;  // |z| >= 1
};

// N_p(mu) = sum_i min(1, |z_i|^p) w_i.
inline double n_p(const DiscreteMeasure& mu, double p) {
  require_exponent(p);
  KahanSum s;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double r2 = squared_norm(mu.position(i));
    s += (r2 >= 1.0 ? 1.0 : power_from_squared(r2, p)) * mu.weight(i);
  }
  return s.value();
}

// Splits at the unit sphere; |z| = 1 belongs to the bounded part.
inline MeasureDecomposition decompose(const DiscreteMeasure& mu) {
  return {mu.filter([](std::span<const double> z, double) { return squared_norm(z) < 1.0; }),
          mu.filter([](std::span<const double> z, double) { return squared_norm(z) >= 1.0; })};
}

// mu(. intersected with complement of B_r): keeps atoms with |z| >= r.
inline DiscreteMeasure restrict_outside(const DiscreteMeasure& mu, double r) {
  require(r > 0.0, "restriction radius must be positive");
  return mu.filter([r](std::span<const double> z, double) { return norm(z) >= r; });
}

// Keeps atoms with |z| < r.
inline DiscreteMeasure restrict_inside(const DiscreteMeasure& mu, double r) {
  return mu.filter([r](std::span<const double> z, double) { return norm(z) < r; });
}

inline double tv_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require(mu.dim() == nu.dim() || mu.empty() || nu.empty(), "tv_distance: dimension mismatch");
  std::map<std::vector<double>, double> nu_weight;
  for (std::size_t j = 0; j < nu.size(); ++j) {
    auto z = nu.position(j);
    nu_weight.emplace(std::vector<double>(z.begin(), z.end()), nu.weight(j));
  }
  KahanSum s;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto z = mu.position(i);
    auto it = nu_weight.find(std::vector<double>(z.begin(), z.end()));
    if (it == nu_weight.end()) {
      s += mu.weight(i);
    } else {
      s += std::abs(mu.weight(i) - it->second);
      nu_weight.erase(it);
    }
  }
  for (const auto& [z, w] : nu_weight) s += w;
  return s.value();
}

// d mu_p = |z|^p d mu.
inline DiscreteMeasure weight_by_power(const DiscreteMeasure& mu, double p) {
  require_exponent(p);
  std::vector<Atom> atoms = mu.atoms();
  for (auto& a : atoms) a.w *= power_from_squared(squared_norm(a.z), p);
  return DiscreteMeasure(mu.dim(), atoms);
}

inline DiscreteMeasure scale_weights(const DiscreteMeasure& mu, double factor) {
  require(factor > 0.0 && std::isfinite(factor), "scale factor must be positive");
  std::vector<Atom> atoms = mu.atoms();
  for (auto& a : atoms) a.w *= factor;
  return DiscreteMeasure(mu.dim(), atoms);
}

// Sum of two measures on the same space (weights add on shared atoms).
inline DiscreteMeasure combine(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  require(a.dim() == b.dim(), "combine: dimension mismatch");
  std::vector<Atom> atoms = a.atoms();
  for (auto& atom : b.atoms()) atoms.push_back(std::move(atom));
  return DiscreteMeasure(a.dim(), atoms);
}

// Push-forward T_# mu. Images landing on the origin are absorbed by the
// reservoir and dropped; coinciding images are merged.
template <class Map>
DiscreteMeasure push_forward(const DiscreteMeasure& base, std::size_t image_dim, Map&& map) {
  std::vector<Atom> atoms;
  atoms.reserve(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    std::vector<double> image = map(base.position(i));
    require(image.size() == image_dim, "push_forward: map returned wrong dimension");
    if (squared_norm(image) == 0.0) continue;
    atoms.push_back({std::move(image), base.weight(i)});
  }
  return DiscreteMeasure(image_dim, atoms);
}

// p-moment integral of |z|^p over atoms with |z| < r.
inline double inner_power_mass(const DiscreteMeasure& mu, double r, double p) {
  KahanSum s;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double rad = norm(mu.position(i));
    if (rad < r) s += radial_power(rad, p) * mu.weight(i);
  }
  return s.value();
}

inline double power_moment(const DiscreteMeasure& mu, double p) {
  KahanSum s;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    s += power_from_squared(squared_norm(mu.position(i)), p) * mu.weight(i);
  }
  return s.value();
}

}  // namespace levyot

#endif  // LEVYOT_MEASURES_HPP_
