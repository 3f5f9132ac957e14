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

#ifndef LEVYOT_COMMON_HPP_
#define LEVYOT_COMMON_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace levyot {

// Raised when an input violates a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a numerical routine fails to produce a certified result.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Compensated (Kahan–Babuska/Neumaier) accumulator.
class KahanSum {
 public:
  KahanSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

inline double norm(std::span<const double> v) { return std::sqrt(squared_norm(v)); }

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

// r^p from r^2, exact for p in {1, 2}.
inline double power_from_squared(double r2, double p) {
  if (p == 2.0) return r2;
  if (r2 == 0.0) return 0.0;
  if (p == 1.0) return std::sqrt(r2);
  return std::pow(r2, 0.5 * p);
}

// |r|^p for a scalar radius.
inline double radial_power(double r, double p) {
  r = std::abs(r);
  if (p == 1.0) return r;
  if (p == 2.0) return r * r;
  if (r == 0.0) return 0.0;
  return std::pow(r, p);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidInput(what);
}

inline void require_exponent(double p) {
  require(p >= 1.0 && p <= 2.0, "exponent p must lie in [1, 2], got " + std::to_string(p));
}

}  // namespace levyot

#endif  // LEVYOT_COMMON_HPP_
