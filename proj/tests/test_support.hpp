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

#ifndef LEVYOT_TESTS_TEST_SUPPORT_HPP_
#define LEVYOT_TESTS_TEST_SUPPORT_HPP_

#include <cstddef>
#include <random>
#include <vector>

#include "levyot/measures.hpp"

namespace levyot::testing {

inline DiscreteMeasure measure_1d(std::vector<std::pair<double, double>> atoms) {
  std::vector<Atom> out;
  for (auto [z, w] : atoms) out.push_back({{z}, w});
  return DiscreteMeasure(1, out);
}

inline DiscreteMeasure empty_measure(std::size_t dim = 1) { return DiscreteMeasure(dim); }

}  // namespace levyot::testing

#endif  // LEVYOT_TESTS_TEST_SUPPORT_HPP_
