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

// Optimal transport between discrete Levy measures with the origin acting as
// an infinite reservoir (Gamma = {0}).
//
// Mass of mu may be moved to another atom of nu at cost |x - y|^p or dropped
// into the reservoir at cost |x|^p; mass of nu may be drawn from the
// reservoir at cost |y|^p. The problem is solved exactly as a balanced
// transportation problem: the mu side gets a virtual reservoir row of mass
// |nu| and the nu side a virtual reservoir column of mass |mu|, with
// reservoir-to-reservoir cost 0. The solver is a primal network simplex
// with block-search pricing and strongly feasible spanning trees.

#ifndef LEVYOT_TRANSPORT_HPP_
#define LEVYOT_TRANSPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levyot/common.hpp"
#include "levyot/measures.hpp"

namespace levyot {

// Cost c_p(x, y) = |x - y|^p with the reservoir projection P(x) = 0.
struct CostSpec {
  double p = 2.0;

  double cost(std::span<const double> x, std::span<const double> y) const {
    return power_from_squared(squared_distance(x, y), p);
  }
  double reservoir_cost(std::span<const double> x) const {
    return power_from_squared(squared_norm(x), p);
  }
  // Cheapest way to connect x and y: directly or through the reservoir.
  double effective_cost(std::span<const double> x, std::span<const double> y) const {
    return std::min(cost(x, y), reservoir_cost(x) + reservoir_cost(y));
  }
};

struct PlanEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  double mass = 0.0;
};

struct TransportPlan {
  std::size_t n_source = 0;
  std::size_t n_target = 0;
  std::vector<PlanEntry> direct;        // sorted by (i, j), positive masses only
  std::vector<double> to_reservoir;     // s_i, size n_source
  std::vector<double> from_reservoir;   // t_j, size n_target

  static TransportPlan zeros(std::size_t n, std::size_t m) {
    TransportPlan plan;
    plan.n_source = n;
    plan.n_target = m;
    plan.to_reservoir.assign(n, 0.0);
    plan.from_reservoir.assign(m, 0.0);
    return plan;
  }
};

struct DualPotentials {
  std::vector<double> phi;  // one per mu atom
  std::vector<double> psi;  // one per nu atom
};

struct SolveReport {
  double value = 0.0;
  TransportPlan plan;
  DualPotentials duals;
  std::size_t iterations = 0;
  double dual_value = 0.0;
  double gap = 0.0;
};

inline constexpr double kDualSlack = 1e-9;
inline constexpr double kPlanTolerance = 1e-12;

namespace detail {

// Primal network simplex on the complete bipartite graph rows x cols with
// uncapacitated arcs. Tree bookkeeping (parent, thread, succ_num, last_succ)
// follows the classical preorder-thread representation.
class TransportationSimplex {
 public:
  TransportationSimplex(std::size_t rows, std::size_t cols, std::vector<double> costs)
      : rows_(rows), cols_(cols), nodes_(rows + cols), arcs_(rows * cols),
        cost_(std::move(costs)) {
    double scale = 1.0;
    for (double c : cost_) scale = std::max(scale, std::abs(c));
    eps_ = 1e-12 * scale;
    block_size_ = std::max<std::size_t>(
        10, static_cast<std::size_t>(std::sqrt(static_cast<double>(arcs_))));
  }

  // Star-shaped initial basis: every row except the last ships to the last
  // column, the last row feeds every column except the last, and the
  // reservoir-reservoir arc closes the tree with zero flow. Row supplies and
  // column demands must be consistent with that plan.
  void init_reservoir_tree(std::span<const double> row_mass, std::span<const double> col_mass) {
    const std::size_t rres = rows_ - 1;
    const std::size_t cres = rows_ + cols_ - 1;
    balance_rows_.assign(row_mass.begin(), row_mass.end());
    balance_cols_.assign(col_mass.begin(), col_mass.end());
    flow_.assign(arcs_, 0.0);
    state_.assign(arcs_, kLower);
    parent_.assign(nodes_, -1);
    pred_.assign(nodes_, -1);
    pred_dir_.assign(nodes_, 0);
    thread_.assign(nodes_, 0);
    rev_thread_.assign(nodes_, 0);
    succ_num_.assign(nodes_, 1);
    last_succ_.assign(nodes_, 0);
    pi_.assign(nodes_, 0.0);
    root_ = static_cast<int>(cres);

    auto link = [&](std::size_t node, std::size_t par, std::size_t arc, int dir, double f) {
      parent_[node] = static_cast<int>(par);
      pred_[node] = static_cast<std::int64_t>(arc);
      pred_dir_[node] = dir;
      flow_[arc] = f;
      state_[arc] = kTree;
    };
    for (std::size_t i = 0; i < rres; ++i) link(i, cres, arc_id(i, cols_ - 1), kUp, row_mass[i]);
    link(rres, cres, arc_id(rres, cols_ - 1), kUp, 0.0);
    for (std::size_t j = 0; j + 1 < cols_; ++j) {
      link(rows_ + j, rres, arc_id(rres, j), kDown, col_mass[j]);
    }

    // Preorder: root, mu rows, reservoir row, its nu columns.
    std::vector<int> order;
    order.reserve(nodes_);
    order.push_back(root_);
    for (std::size_t i = 0; i < rres; ++i) order.push_back(static_cast<int>(i));
    order.push_back(static_cast<int>(rres));
    for (std::size_t j = 0; j + 1 < cols_; ++j) order.push_back(static_cast<int>(rows_ + j));
    for (std::size_t k = 0; k < order.size(); ++k) {
      const int u = order[k];
      const int next = order[(k + 1) % order.size()];
      thread_[u] = next;
      rev_thread_[next] = u;
      last_succ_[u] = u;
    }
    succ_num_[rres] = static_cast<int>(cols_);
    last_succ_[rres] = cols_ > 1 ? static_cast<int>(rows_ + cols_ - 2) : static_cast<int>(rres);
    succ_num_[root_] = static_cast<int>(nodes_);
    last_succ_[root_] = last_succ_[rres];
    recompute_potentials();
  }

  // Runs pivots until no arc prices out. Returns the pivot count.
  std::size_t run(std::size_t max_pivots) {
    std::size_t pivots = 0;
    for (;;) {
      while (find_entering_arc()) {
        if (++pivots > max_pivots) {
          throw SolverFailure("network simplex exceeded " + std::to_string(max_pivots) +
                              " pivots");
        }
        find_join_node();
        if (!find_leaving_arc()) throw SolverFailure("transportation problem is unbounded");
        change_flow();
        update_tree_structure();
        update_potential();
      }
      // Refresh potentials from the tree and re-price once; drift in the
      // incremental updates can hide or invent a negative reduced cost.
      recompute_potentials();
      next_arc_ = 0;
      if (!find_entering_arc()) break;
      next_arc_ = 0;
    }
    recompute_flows();
    return pivots;
  }

  double reduced_cost(std::size_t arc) const {
    return cost_[arc] + pi_[arc / cols_] - pi_[rows_ + arc % cols_];
  }
  double potential(std::size_t node) const { return pi_[node]; }
  double flow(std::size_t arc) const { return flow_[arc]; }
  std::size_t arc_id(std::size_t row, std::size_t col) const { return row * cols_ + col; }

  // Basic arcs: the only arcs that may carry flow.
  std::vector<std::size_t> tree_arcs() const {
    std::vector<std::size_t> out;
    out.reserve(nodes_ - 1);
    for (std::size_t u = 0; u < nodes_; ++u) {
      if (static_cast<int>(u) != root_) out.push_back(static_cast<std::size_t>(pred_[u]));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static constexpr std::int8_t kTree = 0;
  static constexpr std::int8_t kLower = 1;
  static constexpr int kUp = 1;     // pred arc goes node -> parent
  static constexpr int kDown = -1;  // pred arc goes parent -> node

  std::size_t source(std::size_t arc) const { return arc / cols_; }
  std::size_t target(std::size_t arc) const { return rows_ + arc % cols_; }

  bool find_entering_arc() {
    double min_c = -eps_;
    std::int64_t best = -1;
    std::size_t count = 0;
    std::size_t e = next_arc_;
    std::size_t i = e / cols_;
    std::size_t j = e % cols_;
    for (std::size_t scanned = 0; scanned < arcs_; ++scanned) {
      if (state_[e] == kLower) {
        const double c = cost_[e] + pi_[i] - pi_[rows_ + j];
        if (c < min_c) {
          min_c = c;
          best = static_cast<std::int64_t>(e);
        }
      }
      ++e;
      if (++j == cols_) {
        j = 0;
        if (++i == rows_) {
          i = 0;
          e = 0;
        }
      }
      if (++count == block_size_) {
        if (best >= 0) break;
        count = 0;
      }
    }
    if (best < 0) return false;
    in_arc_ = static_cast<std::size_t>(best);
    next_arc_ = e;
    return true;
  }

  void find_join_node() {
    int u = static_cast<int>(source(in_arc_));
    int v = static_cast<int>(target(in_arc_));
    while (u != v) {
      if (succ_num_[u] < succ_num_[v]) {
        u = parent_[u];
      } else {
        v = parent_[v];
      }
    }
    join_ = u;
  }

  bool find_leaving_arc() {
    // Entering arcs are always at their lower bound.
    const int first = static_cast<int>(source(in_arc_));
    const int second = static_cast<int>(target(in_arc_));
    constexpr double kInf = std::numeric_limits<double>::infinity();
    delta_ = kInf;
    int result = 0;
    for (int u = first; u != join_; u = parent_[u]) {
      const double d = pred_dir_[u] == kDown ? kInf : flow_[pred_[u]];
      if (d < delta_) {
        delta_ = d;
        u_out_ = u;
        result = 1;
      }
    }
    for (int u = second; u != join_; u = parent_[u]) {
      const double d = pred_dir_[u] == kUp ? kInf : flow_[pred_[u]];
      if (d <= delta_) {
        delta_ = d;
        u_out_ = u;
        result = 2;
      }
    }
    if (result == 1) {
      u_in_ = first;
      v_in_ = second;
    } else {
      u_in_ = second;
      v_in_ = first;
    }
    return result != 0;
  }

  void change_flow() {
    if (delta_ > 0.0) {
      const double val = delta_;
      flow_[in_arc_] += val;
      for (int u = static_cast<int>(source(in_arc_)); u != join_; u = parent_[u]) {
        flow_[pred_[u]] -= pred_dir_[u] * val;
      }
      for (int u = static_cast<int>(target(in_arc_)); u != join_; u = parent_[u]) {
        flow_[pred_[u]] += pred_dir_[u] * val;
      }
    }
    state_[in_arc_] = kTree;
    flow_[pred_[u_out_]] = 0.0;
    state_[pred_[u_out_]] = kLower;
  }

  void update_tree_structure() {
    const int old_rev_thread = rev_thread_[u_out_];
    const int old_succ_num = succ_num_[u_out_];
    const int old_last_succ = last_succ_[u_out_];
    v_out_ = parent_[u_out_];

    if (u_in_ == u_out_) {
      parent_[u_in_] = v_in_;
      pred_[u_in_] = static_cast<std::int64_t>(in_arc_);
      pred_dir_[u_in_] = u_in_ == static_cast<int>(source(in_arc_)) ? kUp : kDown;
      if (thread_[v_in_] != u_out_) {
        int after = thread_[old_last_succ];
        thread_[old_rev_thread] = after;
        rev_thread_[after] = old_rev_thread;
        after = thread_[v_in_];
        thread_[v_in_] = u_out_;
        rev_thread_[u_out_] = v_in_;
        thread_[old_last_succ] = after;
        rev_thread_[after] = old_last_succ;
      }
    } else {
      const int thread_continue =
          old_rev_thread == v_in_ ? thread_[old_last_succ] : thread_[v_in_];

      // Re-hang the stem u_in .. u_out under v_in, reversing parent links.
      int stem = u_in_;
      int par_stem = v_in_;
      int last = last_succ_[u_in_];
      int after = thread_[last];
      thread_[v_in_] = u_in_;
      dirty_revs_.clear();
      dirty_revs_.push_back(v_in_);
      while (stem != u_out_) {
        const int next_stem = parent_[stem];
        thread_[last] = next_stem;
        dirty_revs_.push_back(last);

        const int before = rev_thread_[stem];
        thread_[before] = after;
        rev_thread_[after] = before;

        parent_[stem] = par_stem;
        par_stem = stem;
        stem = next_stem;

        last = last_succ_[stem] == last_succ_[par_stem] ? rev_thread_[par_stem]
                                                        : last_succ_[stem];
        after = thread_[last];
      }
      parent_[u_out_] = par_stem;
      thread_[last] = thread_continue;
      rev_thread_[thread_continue] = last;
      last_succ_[u_out_] = last;

      if (old_rev_thread != v_in_) {
        thread_[old_rev_thread] = after;
        rev_thread_[after] = old_rev_thread;
      }
      for (int u : dirty_revs_) rev_thread_[thread_[u]] = u;

      int tmp_sc = 0;
      const int tmp_ls = last_succ_[u_out_];
      for (int u = u_out_, p = parent_[u]; u != u_in_; u = p, p = parent_[u]) {
        pred_[u] = pred_[p];
        pred_dir_[u] = -pred_dir_[p];
        tmp_sc += succ_num_[u] - succ_num_[p];
        succ_num_[u] = tmp_sc;
        last_succ_[p] = tmp_ls;
      }
      pred_[u_in_] = static_cast<std::int64_t>(in_arc_);
      pred_dir_[u_in_] = u_in_ == static_cast<int>(source(in_arc_)) ? kUp : kDown;
      succ_num_[u_in_] = old_succ_num;
    }

    const int up_limit_out = last_succ_[join_] == v_in_ ? join_ : -1;
    const int last_succ_out = last_succ_[u_out_];
    for (int u = v_in_; u != -1 && last_succ_[u] == v_in_; u = parent_[u]) {
      last_succ_[u] = last_succ_out;
    }
    if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
      for (int u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ;
           u = parent_[u]) {
        last_succ_[u] = old_rev_thread;
      }
    } else if (last_succ_out != old_last_succ) {
      for (int u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ;
           u = parent_[u]) {
        last_succ_[u] = last_succ_out;
      }
    }
    for (int u = v_in_; u != join_; u = parent_[u]) succ_num_[u] += old_succ_num;
    for (int u = v_out_; u != join_; u = parent_[u]) succ_num_[u] -= old_succ_num;
  }

  void update_potential() {
    const double sigma = pi_[v_in_] - pi_[u_in_] - pred_dir_[u_in_] * cost_[in_arc_];
    const int end = thread_[last_succ_[u_in_]];
    for (int u = u_in_; u != end; u = thread_[u]) pi_[u] += sigma;
  }

  // Tree arcs have zero reduced cost: c + pi[source] - pi[target] = 0.
  void recompute_potentials() {
    pi_[root_] = 0.0;
    for (int u = thread_[root_]; u != root_; u = thread_[u]) {
      const double c = cost_[pred_[u]];
      pi_[u] = pred_dir_[u] == kUp ? pi_[parent_[u]] - c : pi_[parent_[u]] + c;
    }
  }

  // Tree flows from node balances, leaves first (reverse preorder).
  void recompute_flows() {
    std::vector<double> excess(nodes_, 0.0);
    for (std::size_t u = 0; u < rows_; ++u) excess[u] = balance_rows_[u];
    for (std::size_t j = 0; j < cols_; ++j) excess[rows_ + j] = -balance_cols_[j];
    for (int u = rev_thread_[root_]; u != root_; u = rev_thread_[u]) {
      const double f = pred_dir_[u] == kUp ? excess[u] : -excess[u];
      flow_[pred_[u]] = std::max(0.0, f);
      excess[parent_[u]] += excess[u];
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::size_t nodes_;
  std::size_t arcs_;
  std::vector<double> cost_;
  std::vector<double> flow_;
  std::vector<std::int8_t> state_;

  std::vector<int> parent_;
  std::vector<std::int64_t> pred_;
  std::vector<int> pred_dir_;
  std::vector<int> thread_;
  std::vector<int> rev_thread_;
  std::vector<int> succ_num_;
  std::vector<int> last_succ_;
  std::vector<double> pi_;
  std::vector<int> dirty_revs_;
  std::vector<double> balance_rows_;
  std::vector<double> balance_cols_;

  int root_ = 0;
  double eps_ = 0.0;
  std::size_t block_size_ = 10;
  std::size_t next_arc_ = 0;
  std::size_t in_arc_ = 0;
  int join_ = 0;
  int u_in_ = 0;
  int v_in_ = 0;
  int u_out_ = 0;
  int v_out_ = 0;
  double delta_ = 0.0;
};

inline void check_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (!mu.empty() && !nu.empty()) {
    require(mu.dim() == nu.dim(), "dimension mismatch: " + std::to_string(mu.dim()) + " vs " +
                                      std::to_string(nu.dim()));
  }
}

}  // namespace detail

inline double plan_cost(const TransportPlan& plan, const DiscreteMeasure& mu,
                        const DiscreteMeasure& nu, const CostSpec& cost) {
  KahanSum s;
  for (const auto& e : plan.direct) s += e.mass * cost.cost(mu.position(e.i), nu.position(e.j));
  for (std::size_t i = 0; i < plan.to_reservoir.size(); ++i) {
    s += plan.to_reservoir[i] * cost.reservoir_cost(mu.position(i));
  }
  for (std::size_t j = 0; j < plan.from_reservoir.size(); ++j) {
    s += plan.from_reservoir[j] * cost.reservoir_cost(nu.position(j));
  }
  return s.value();
}

// Dual objective sum phi_i w_i + sum psi_j w_j, without feasibility checks.
inline double dual_objective(const DualPotentials& duals, const DiscreteMeasure& mu,
                             const DiscreteMeasure& nu) {
  KahanSum s;
  for (std::size_t i = 0; i < mu.size(); ++i) s += duals.phi[i] * mu.weight(i);
  for (std::size_t j = 0; j < nu.size(); ++j) s += duals.psi[j] * nu.weight(j);
  return s.value();
}

struct SolveOptions {
  std::size_t max_pivots = 0;  // 0 selects a size-based default
};

inline SolveReport solve(const DiscreteMeasure& mu, const DiscreteMeasure& nu, CostSpec cost,
                         SolveOptions options = {}) {
  require_exponent(cost.p);
  detail::check_pair(mu, nu);
  const std::size_t n = mu.size();
  const std::size_t m = nu.size();

  SolveReport report;
  report.plan = TransportPlan::zeros(n, m);
  report.duals.phi.assign(n, 0.0);
  report.duals.psi.assign(m, 0.0);

  if (n == 0 || m == 0) {
    // Only one admissible plan: everything goes through the reservoir, and
    // the tight potentials phi = |x|^p, psi = |y|^p certify it.
    for (std::size_t i = 0; i < n; ++i) {
      report.plan.to_reservoir[i] = mu.weight(i);
      report.duals.phi[i] = cost.reservoir_cost(mu.position(i));
    }
    for (std::size_t j = 0; j < m; ++j) {
      report.plan.from_reservoir[j] = nu.weight(j);
      report.duals.psi[j] = cost.reservoir_cost(nu.position(j));
    }
  } else {
    const std::size_t rows = n + 1;
    const std::size_t cols = m + 1;
    std::vector<double> costs(rows * cols, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto x = mu.position(i);
      double* row = costs.data() + i * cols;
      for (std::size_t j = 0; j < m; ++j) row[j] = cost.cost(x, nu.position(j));
      row[m] = cost.reservoir_cost(x);
    }
    for (std::size_t j = 0; j < m; ++j) costs[n * cols + j] = cost.reservoir_cost(nu.position(j));

    std::vector<double> row_mass(mu.weights().begin(), mu.weights().end());
    std::vector<double> col_mass(nu.weights().begin(), nu.weights().end());
    row_mass.push_back(nu.total_mass());
    col_mass.push_back(mu.total_mass());

    detail::TransportationSimplex simplex(rows, cols, std::move(costs));
    simplex.init_reservoir_tree(row_mass, col_mass);
    const std::size_t cap =
        options.max_pivots > 0 ? options.max_pivots : 200 * (rows + cols) * (rows + cols) + 1000;
    report.iterations = simplex.run(cap);

    for (std::size_t arc : simplex.tree_arcs()) {
      const double f = simplex.flow(arc);
      if (f <= 0.0) continue;
      const std::size_t i = arc / cols;
      const std::size_t j = arc % cols;
      if (i < n && j < m) {
        report.plan.direct.push_back({i, j, f});
      } else if (i < n) {
        report.plan.to_reservoir[i] = f;
      } else if (j < m) {
        report.plan.from_reservoir[j] = f;
      }
    }
    // phi_i = u_i + v_res, psi_j = v_j + u_res with u = -pi(row), v = pi(col).
    const double v_res = simplex.potential(rows + m);
    const double u_res = -simplex.potential(n);
    for (std::size_t i = 0; i < n; ++i) report.duals.phi[i] = -simplex.potential(i) + v_res;
    for (std::size_t j = 0; j < m; ++j) report.duals.psi[j] = simplex.potential(rows + j) + u_res;
  }

  report.value = plan_cost(report.plan, mu, nu, cost);
  report.dual_value = dual_objective(report.duals, mu, nu);
  report.gap = std::abs(report.value - report.dual_value);
  return report;
}

// d_{L_p}(mu, nu) = (optimal cost)^{1/p}.
inline double distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  const double v = std::max(0.0, solve(mu, nu, CostSpec{p}).value);
  return p == 1.0 ? v : std::pow(v, 1.0 / p);
}

struct PlanViolation {
  enum class Kind { kRowSum, kColumnSum, kNegativeMass, kShape } kind;
  std::size_t index = 0;
  double residual = 0.0;
  std::string message;
};

// Marginal identities of an admissible plan, checked per constraint to
// within `tol` absolute.
inline std::vector<PlanViolation> verify_plan(const TransportPlan& plan, const DiscreteMeasure& mu,
                                              const DiscreteMeasure& nu,
                                              double tol = kPlanTolerance) {
  std::vector<PlanViolation> out;
  if (plan.to_reservoir.size() != mu.size() || plan.from_reservoir.size() != nu.size()) {
    out.push_back({PlanViolation::Kind::kShape, 0, 0.0, "plan shape does not match measures"});
    return out;
  }
  std::vector<KahanSum> rows(mu.size()), cols(nu.size());
  for (const auto& e : plan.direct) {
    if (e.i >= mu.size() || e.j >= nu.size()) {
      out.push_back({PlanViolation::Kind::kShape, e.i, 0.0, "plan entry index out of range"});
      continue;
    }
    if (e.mass < 0.0) {
      out.push_back({PlanViolation::Kind::kNegativeMass, e.i, e.mass,
                     "negative mass on arc (" + std::to_string(e.i) + ", " +
                         std::to_string(e.j) + ")"});
    }
    rows[e.i] += e.mass;
    cols[e.j] += e.mass;
  }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (plan.to_reservoir[i] < 0.0) {
      out.push_back({PlanViolation::Kind::kNegativeMass, i, plan.to_reservoir[i],
                     "negative reservoir mass for mu atom " + std::to_string(i)});
    }
    rows[i] += plan.to_reservoir[i];
    const double r = rows[i].value() - mu.weight(i);
    if (std::abs(r) > tol) {
      out.push_back({PlanViolation::Kind::kRowSum, i, r,
                     "row sum of mu atom " + std::to_string(i) + " off by " + std::to_string(r)});
    }
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    if (plan.from_reservoir[j] < 0.0) {
      out.push_back({PlanViolation::Kind::kNegativeMass, j, plan.from_reservoir[j],
                     "negative reservoir mass for nu atom " + std::to_string(j)});
    }
    cols[j] += plan.from_reservoir[j];
    const double r = cols[j].value() - nu.weight(j);
    if (std::abs(r) > tol) {
      out.push_back({PlanViolation::Kind::kColumnSum, j, r,
                     "column sum of nu atom " + std::to_string(j) + " off by " +
                         std::to_string(r)});
    }
  }
  return out;
}

struct ArcViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  double mass = 0.0;
  double excess = 0.0;  // |x-y|^p - |x|^p - |y|^p
};

// Direct arcs carrying mass outside K = {|x-y|^p <= |x|^p + |y|^p}.
inline std::vector<ArcViolation> k_support_check(const TransportPlan& plan,
                                                 const DiscreteMeasure& mu,
                                                 const DiscreteMeasure& nu, double p,
                                                 double tol = 1e-9, double tol_mass = 0.0) {
  CostSpec cost{p};
  std::vector<ArcViolation> out;
  for (const auto& e : plan.direct) {
    if (e.mass <= tol_mass) continue;
    auto x = mu.position(e.i);
    auto y = nu.position(e.j);
    const double excess = cost.cost(x, y) - cost.reservoir_cost(x) - cost.reservoir_cost(y);
    if (excess > tol) out.push_back({e.i, e.j, e.mass, excess});
  }
  return out;
}

struct DualViolation {
  enum class Kind { kPair, kSourceReservoir, kTargetReservoir, kShape } kind;
  std::size_t i = 0;
  std::size_t j = 0;
  double excess = 0.0;
  std::string message() const {
    switch (kind) {
      case Kind::kPair:
        return "phi[" + std::to_string(i) + "] + psi[" + std::to_string(j) +
               "] exceeds |x - y|^p by " + std::to_string(excess);
      case Kind::kSourceReservoir:
        return "phi[" + std::to_string(i) + "] exceeds |x|^p by " + std::to_string(excess);
      case Kind::kTargetReservoir:
        return "psi[" + std::to_string(j) + "] exceeds |y|^p by " + std::to_string(excess);
      case Kind::kShape:
        break;
    }
    return "dual potentials do not match the measures";
  }
};

// First violated Adm^p constraint, if any.
inline std::optional<DualViolation> find_dual_violation(const DualPotentials& duals,
                                                        const DiscreteMeasure& mu,
                                                        const DiscreteMeasure& nu, double p,
                                                        double slack = kDualSlack) {
  if (duals.phi.size() != mu.size() || duals.psi.size() != nu.size()) {
    return DualViolation{DualViolation::Kind::kShape};
  }
  CostSpec cost{p};
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double ex = duals.phi[i] - cost.reservoir_cost(mu.position(i));
    if (ex > slack) return DualViolation{DualViolation::Kind::kSourceReservoir, i, 0, ex};
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const double ex = duals.psi[j] - cost.reservoir_cost(nu.position(j));
    if (ex > slack) return DualViolation{DualViolation::Kind::kTargetReservoir, 0, j, ex};
  }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      const double ex = duals.phi[i] + duals.psi[j] - cost.cost(mu.position(i), nu.position(j));
      if (ex > slack) return DualViolation{DualViolation::Kind::kPair, i, j, ex};
    }
  }
  return std::nullopt;
}

// Dual objective of a feasible pair; infeasible pairs are rejected.
inline double dual_value(const DualPotentials& duals, const DiscreteMeasure& mu,
                         const DiscreteMeasure& nu, double p, double slack = kDualSlack) {
  require_exponent(p);
  detail::check_pair(mu, nu);
  if (auto v = find_dual_violation(duals, mu, nu, p, slack)) {
    throw InvalidInput("infeasible dual potentials: " + v->message());
  }
  return dual_objective(duals, mu, nu);
}

// Exhaustive oracle for unit-weight measures: every mu atom is matched to a
// distinct nu atom or to the reservoir, unmatched nu atoms draw from it.
inline double brute_force_unit(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  require_exponent(p);
  detail::check_pair(mu, nu);
  constexpr std::size_t kMaxAtoms = 6;
  require(mu.size() <= kMaxAtoms && nu.size() <= kMaxAtoms,
          "brute_force_unit supports at most 6 atoms per side");
  for (double w : mu.weights()) require(w == 1.0, "brute_force_unit needs unit weights");
  for (double w : nu.weights()) require(w == 1.0, "brute_force_unit needs unit weights");

  CostSpec cost{p};
  const std::size_t n = mu.size();
  const std::size_t m = nu.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> used(m, false);
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double acc) {
    if (i == n) {
      double total = acc;
      for (std::size_t j = 0; j < m; ++j) {
        if (!used[j]) total += cost.reservoir_cost(nu.position(j));
      }
      best = std::min(best, total);
      return;
    }
    rec(i + 1, acc + cost.reservoir_cost(mu.position(i)));
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      used[j] = true;
      rec(i + 1, acc + cost.cost(mu.position(i), nu.position(j)));
      used[j] = false;
    }
  };
  rec(0, 0.0);
  return best;
}

}  // namespace levyot

#endif  // LEVYOT_TRANSPORT_HPP_
