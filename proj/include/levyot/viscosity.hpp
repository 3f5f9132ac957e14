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

// Grid functions and the pieces of a doubling-of-variables argument:
// sup/inf-convolutions, the penalty psi_kappa, nonlocal operators built from
// discrete Levy measures, and the measure coupling inequality.

#ifndef LEVYOT_VISCOSITY_HPP_
#define LEVYOT_VISCOSITY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levyot/common.hpp"
#include "levyot/families.hpp"
#include "levyot/measures.hpp"
#include "levyot/parallel.hpp"
#include "levyot/transport.hpp"

namespace levyot {

// Values on a uniform tensor grid over a box, row-major with the last axis
// fastest. Off-grid evaluation is multilinear, and points outside the box
// are clamped onto it (constant continuation).
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Point lo, Point hi, std::vector<std::size_t> shape)
      : lo_(std::move(lo)), hi_(std::move(hi)), shape_(std::move(shape)) {
    require(!shape_.empty() && lo_.size() == shape_.size() && hi_.size() == shape_.size(),
            "grid: box and shape dimensions differ");
    std::size_t total = 1;
    for (std::size_t a = 0; a < shape_.size(); ++a) {
      require(shape_[a] >= 2, "grid: need at least two nodes per axis");
      require(std::isfinite(lo_[a]) && std::isfinite(hi_[a]) && hi_[a] > lo_[a],
              "grid: empty box");
      total *= shape_[a];
    }
    values_.assign(total, 0.0);
  }

  template <class F>
  static GridFunction sample(Point lo, Point hi, std::vector<std::size_t> shape, F&& f) {
    GridFunction g(std::move(lo), std::move(hi), std::move(shape));
    for (std::size_t k = 0; k < g.size(); ++k) g.values_[k] = f(PointView(g.node(k)));
    return g;
  }

  std::size_t dim() const { return shape_.size(); }
  std::size_t size() const { return values_.size(); }
  std::size_t shape(std::size_t axis) const { return shape_[axis]; }
  double lo(std::size_t axis) const { return lo_[axis]; }
  double hi(std::size_t axis) const { return hi_[axis]; }
  double spacing(std::size_t axis) const {
    return (hi_[axis] - lo_[axis]) / static_cast<double>(shape_[axis] - 1);
  }
  double max_spacing() const {
    double h = 0.0;
    for (std::size_t a = 0; a < dim(); ++a) h = std::max(h, spacing(a));
    return h;
  }

  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }
  const std::vector<double>& values() const { return values_; }

  std::vector<std::size_t> multi_index(std::size_t k) const {
    std::vector<std::size_t> idx(dim());
    for (std::size_t a = dim(); a-- > 0;) {
      idx[a] = k % shape_[a];
      k /= shape_[a];
    }
    return idx;
  }
  std::size_t flat_index(const std::vector<std::size_t>& idx) const {
    std::size_t k = 0;
    for (std::size_t a = 0; a < dim(); ++a) k = k * shape_[a] + idx[a];
    return k;
  }
  double coordinate(std::size_t axis, std::size_t i) const {
    return i + 1 == shape_[axis] ? hi_[axis] : lo_[axis] + static_cast<double>(i) * spacing(axis);
  }
  Point node(std::size_t k) const {
    const auto idx = multi_index(k);
    Point x(dim());
    for (std::size_t a = 0; a < dim(); ++a) x[a] = coordinate(a, idx[a]);
    return x;
  }

  double operator()(PointView x) const {
    require(x.size() == dim(), "grid: evaluation point has the wrong dimension");
    std::vector<std::size_t> base(dim());
    std::vector<double> frac(dim());
    for (std::size_t a = 0; a < dim(); ++a) {
      const double t = std::clamp((x[a] - lo_[a]) / spacing(a), 0.0,
                                  static_cast<double>(shape_[a] - 1));
      auto i = static_cast<std::size_t>(std::floor(t));
      if (i + 1 >= shape_[a]) i = shape_[a] - 2;
      base[a] = i;
      frac[a] = t - static_cast<double>(i);
    }
    double total = 0.0;
    std::vector<std::size_t> idx(dim());
    for (std::size_t corner = 0; corner < (std::size_t{1} << dim()); ++corner) {
      double w = 1.0;
      for (std::size_t a = 0; a < dim(); ++a) {
        const bool up = (corner >> a) & 1u;
        idx[a] = base[a] + (up ? 1 : 0);
        w *= up ? frac[a] : 1.0 - frac[a];
      }
      if (w != 0.0) total += w * values_[flat_index(idx)];
    }
    return total;
  }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }
  double oscillation() const {
    const auto [mn, mx] = std::minmax_element(values_.begin(), values_.end());
    return *mx - *mn;
  }
  bool same_grid(const GridFunction& o) const {
    return lo_ == o.lo_ && hi_ == o.hi_ && shape_ == o.shape_;
  }
  GridFunction with_values(std::vector<double> v) const {
    require(v.size() == size(), "grid: value count mismatch");
    GridFunction g = *this;
    g.values_ = std::move(v);
    return g;
  }

 private:
  Point lo_, hi_;
  std::vector<std::size_t> shape_;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Penalty psi_kappa(x) = (kappa + |x|^2)^{p/2} - kappa^{p/2}.

struct PenalizationSpec {
  double epsilon = 0.1;
  double kappa = 1e-3;
  double p = 2.0;

  void validate() const {
    require(std::isfinite(epsilon) && epsilon > 0.0, "penalization: epsilon must be > 0");
    require(kappa > 0.0 && kappa < 1.0, "penalization: kappa must lie in (0, 1)");
    require_exponent(p);
  }
};

inline double psi_kappa(PointView x, double kappa, double p) {
  const double r2 = squared_norm(x);
  if (p == 2.0) return r2;  // kappa cancels exactly
  return std::pow(kappa + r2, 0.5 * p) - std::pow(kappa, 0.5 * p);
}

inline Point psi_kappa_grad(PointView x, double kappa, double p) {
  const double factor = p == 2.0 ? 2.0 : p * std::pow(kappa + squared_norm(x), 0.5 * p - 1.0);
  Point g(x.begin(), x.end());
  for (auto& c : g) c *= factor;
  return g;
}

inline double psi_kappa(PointView x, const PenalizationSpec& s) { return psi_kappa(x, s.kappa, s.p); }
inline Point psi_kappa_grad(PointView x, const PenalizationSpec& s) {
  return psi_kappa_grad(x, s.kappa, s.p);
}

// |psi(a + h) - psi(a) - grad psi(a) h| / |h|^p. In any dimension only the
// plane spanned by a and h matters, so planar samples cover all cases.
inline double pointwise_cp_quotient(PointView a, PointView h, double kappa, double p) {
  Point ah(a.begin(), a.end());
  for (std::size_t c = 0; c < ah.size(); ++c) ah[c] += h[c];
  const Point g = psi_kappa_grad(a, kappa, p);
  double lin = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) lin += g[c] * h[c];
  const double rem = psi_kappa(ah, kappa, p) - psi_kappa(a, kappa, p) - lin;
  return std::abs(rem) / radial_power(norm(h), p);
}

struct CpEstimate {
  double sampled_sup = 0.0;
  double constant = 0.0;  // sampled_sup * safety
};

// Sampled sup over |a|, |h| <= 2 and kappa in {1e-6, 1e-3, 0.5}.
inline CpEstimate pointwise_cp_constant(double p, double safety = 1.05) {
  require_exponent(p);
  double best = 0.0;
  const int nr = 48, nt = 33;
  std::vector<double> radii{0.0};
  for (int k = 0; k < nr; ++k) radii.push_back(2.0 * std::pow(1e-4, 1.0 - k / double(nr - 1)));
  for (double kappa : {1e-6, 1e-3, 0.5}) {
    for (double ra : radii) {
      const Point a{ra, 0.0};
      for (double rh : radii) {
        if (rh == 0.0) continue;
        for (int t = 0; t < nt; ++t) {
          const double th = std::numbers::pi * t / double(nt - 1);
          const Point h{rh * std::cos(th), rh * std::sin(th)};
          best = std::max(best, pointwise_cp_quotient(a, h, kappa, p));
        }
      }
    }
  }
  return {best, best * safety};
}

// ---------------------------------------------------------------------------
// Sup/inf-convolutions: u^delta(x) = max_y u(y) - |x - y|^2 / delta over
// grid nodes. Any maximizer beating y = x satisfies |x - y|^2 <= delta osc(u),
// so a window of that radius plus one cell is exact.

struct ConvolutionResult {
  GridFunction value;
  std::vector<std::size_t> argmax;  // achieving node per node
};

namespace detail {

inline ConvolutionResult convolve_max(const GridFunction& u, double delta, double sign) {
  require(std::isfinite(delta) && delta > 0.0, "convolution: delta must be > 0");
  const std::size_t d = u.dim();
  const double radius = std::sqrt(delta * u.oscillation()) + u.max_spacing();
  std::vector<std::size_t> reach(d);
  for (std::size_t a = 0; a < d; ++a) {
    reach[a] = static_cast<std::size_t>(std::ceil(radius / u.spacing(a)));
  }
  std::vector<double> out(u.size());
  std::vector<std::size_t> arg(u.size());
  parallel_for(u.size(), [&](std::size_t k) {
    const auto ix = u.multi_index(k);
    const Point x = u.node(k);
    std::vector<std::size_t> lo(d), hi(d), iy(d);
    for (std::size_t a = 0; a < d; ++a) {
      lo[a] = ix[a] > reach[a] ? ix[a] - reach[a] : 0;
      hi[a] = std::min(u.shape(a) - 1, ix[a] + reach[a]);
    }
    iy = lo;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_k = k;
    while (true) {
      const std::size_t ky = u.flat_index(iy);
      double dist2 = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        const double diff = x[a] - u.coordinate(a, iy[a]);
        dist2 += diff * diff;
      }
      const double cand = sign * u[ky] - dist2 / delta;
      if (cand > best) {
        best = cand;
        best_k = ky;
      }
      std::size_t a = d;
      while (a-- > 0) {
        if (iy[a] < hi[a]) {
          ++iy[a];
          break;
        }
        iy[a] = lo[a];
      }
      if (a == static_cast<std::size_t>(-1)) break;
    }
    out[k] = sign * best;
    arg[k] = best_k;
  });
  return {u.with_values(std::move(out)), std::move(arg)};
}

}  // namespace detail

inline ConvolutionResult sup_convolution_with_argmax(const GridFunction& u, double delta) {
  return detail::convolve_max(u, delta, 1.0);
}

// u_delta(x) = min_y u(y) + |x - y|^2 / delta.
inline ConvolutionResult inf_convolution_with_argmax(const GridFunction& u, double delta) {
  return detail::convolve_max(u, delta, -1.0);
}

inline GridFunction sup_convolution(const GridFunction& u, double delta) {
  return sup_convolution_with_argmax(u, delta).value;
}

inline GridFunction inf_convolution(const GridFunction& u, double delta) {
  return inf_convolution_with_argmax(u, delta).value;
}

// ---------------------------------------------------------------------------
// L_mu(u, x) = sum_i w_i [u(x + z_i) - u(x) - 1{|z_i| < 1} grad . z_i].

template <class U>
double levy_op_eval(U&& u, PointView x, const DiscreteMeasure& mu, PointView grad) {
  require(mu.empty() || mu.dim() == x.size(), "levy_op_eval: dimension mismatch");
  require(grad.size() == x.size(), "levy_op_eval: gradient has the wrong dimension");
  const double ux = u(x);
  Point shifted(x.size());
  KahanSum s;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto z = mu.position(i);
    double dot = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) {
      shifted[c] = x[c] + z[c];
      dot += grad[c] * z[c];
    }
    const double comp = squared_norm(z) < 1.0 ? dot : 0.0;
    s += mu.weight(i) * (u(PointView(shifted)) - ux - comp);
  }
  return s.value();
}

// ---------------------------------------------------------------------------
// Doubling of variables: max over node pairs of
// w(x, y) = u(x) - v(y) - psi_kappa(x - y) / epsilon.

struct DoublingResult {
  std::size_t i = 0;  // node of x*
  std::size_t j = 0;  // node of y*
  Point x;
  Point y;
  double value = -std::numeric_limits<double>::infinity();
};

inline double doubling_objective(const GridFunction& u, const GridFunction& v,
                                 const PenalizationSpec& spec, PointView x, PointView y) {
  Point diff(x.begin(), x.end());
  for (std::size_t c = 0; c < diff.size(); ++c) diff[c] -= y[c];
  return u(x) - v(y) - psi_kappa(diff, spec) / spec.epsilon;
}

// Exact discrete argmax; ties go to the lexicographically smallest (i, j).
inline DoublingResult doubling_maximize(const GridFunction& u, const GridFunction& v,
                                        const PenalizationSpec& spec) {
  spec.validate();
  require(u.same_grid(v), "doubling: u and v must share a grid");
  const std::size_t n = u.size();
  std::vector<Point> nodes(n);
  for (std::size_t k = 0; k < n; ++k) nodes[k] = u.node(k);
  const std::size_t chunks = std::min<std::size_t>(n, 64);
  std::vector<DoublingResult> partial(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    DoublingResult best;
    Point diff(u.dim());
    for (std::size_t i = c * n / chunks; i < (c + 1) * n / chunks; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t a = 0; a < diff.size(); ++a) diff[a] = nodes[i][a] - nodes[j][a];
        const double w = u[i] - v[j] - psi_kappa(diff, spec) / spec.epsilon;
        if (w > best.value) {
          best.value = w;
          best.i = i;
          best.j = j;
        }
      }
    }
    partial[c] = best;
  });
  DoublingResult out;
  for (const auto& b : partial) {
    if (b.value > out.value) out = b;  // chunks are in index order
  }
  out.x = nodes[out.i];
  out.y = nodes[out.j];
  return out;
}

// ---------------------------------------------------------------------------
// Coupling inequality at a doubling maximum:
// L_mu(u, x*) - L_nu(v, y*) <= Cp (1/eps) d(mu, nu)^p, plus
// 2 max(|u|, |v|) d_TV of the parts outside B_1 for full measures.

struct CouplingCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double transport_term = 0.0;
  double tv_term = 0.0;
  double cp = 0.0;
  bool pass = false;
};

inline CouplingCheck coupling_inequality_check(const GridFunction& u, const GridFunction& v,
                                               const PenalizationSpec& spec,
                                               const DiscreteMeasure& mu,
                                               const DiscreteMeasure& nu, double cp,
                                               const DoublingResult& at, double tol = 1e-8) {
  spec.validate();
  detail::check_pair(mu, nu);
  // (x*, y*) must beat every node pair and every shifted pair the argument uses.
  const DoublingResult grid_max = doubling_maximize(u, v, spec);
  if (at.value < grid_max.value) {
    throw InvalidInput("coupling check: (x*, y*) is not a grid maximum");
  }
  const double slack = 1e-12 * (1.0 + std::abs(at.value));
  auto shifted = [](const Point& base, PointView z) {
    Point s(base);
    for (std::size_t c = 0; c < s.size(); ++c) s[c] += z[c];
    return s;
  };
  auto beaten = [&](const Point& x, const Point& y) {
    if (doubling_objective(u, v, spec, x, y) > at.value + slack) {
      throw InvalidInput("coupling check: a shifted pair exceeds the doubling maximum");
    }
  };
  for (std::size_t i = 0; i < mu.size(); ++i) {
    beaten(shifted(at.x, mu.position(i)), at.y);
    for (std::size_t j = 0; j < nu.size(); ++j) {
      beaten(shifted(at.x, mu.position(i)), shifted(at.y, nu.position(j)));
    }
  }
  for (std::size_t j = 0; j < nu.size(); ++j) beaten(at.x, shifted(at.y, nu.position(j)));

  Point diff(at.x);
  for (std::size_t c = 0; c < diff.size(); ++c) diff[c] -= at.y[c];
  Point q = psi_kappa_grad(diff, spec);
  for (auto& c : q) c /= spec.epsilon;

  const auto mu_parts = decompose(mu);
  const auto nu_parts = decompose(nu);
  CouplingCheck out;
  out.cp = cp;
  out.lhs = levy_op_eval(u, at.x, mu, q) - levy_op_eval(v, at.y, nu, q);
  out.transport_term =
      cp / spec.epsilon * solve(mu_parts.hat, nu_parts.hat, CostSpec{spec.p}).value;
  out.tv_term = 2.0 * std::max(u.sup_norm(), v.sup_norm()) *
                tv_distance(mu_parts.check, nu_parts.check);
  out.rhs = out.transport_term + out.tv_term;
  out.pass = out.lhs <= out.rhs + tol;
  return out;
}

// ---------------------------------------------------------------------------
// Linear model problem c(x) u - L_{mu_x} u = -f on a periodic grid of
// [0, 2 pi) with mu_x = delta_{m(x)}, followed by doubling of variables
// between the solution and a strict supersolution-like comparison function.

struct EquationSpec {
  double lambda = 1.0;
  double lambda1 = 1.0;
  std::function<double(double)> c = [](double) { return 1.0; };
  std::function<double(double)> f = [](double x) { return std::sin(x); };
  std::function<double(double)> m = [](double x) { return 0.5 + 0.1 * std::sin(x); };
  double m_lipschitz = 0.1;
};

struct BasicIdeaConfig {
  std::size_t nodes = 512;
  double margin = 0.5;
  double bump_center = std::numbers::pi;
  double bump_width = 0.5;
  double kappa = 1e-3;
  double distance_constant = 1.0;
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3, 1e-4};
};

struct BasicIdeaRow {
  double epsilon = 0.0;
  double kappa = 0.0;
  double x_star = 0.0;
  double y_star = 0.0;
  double gap = 0.0;            // lambda (u(x*) - v(y*))
  double penalty_term = 0.0;   // |x* - y*|^2 / epsilon
  double distance_term = 0.0;  // C d_2(mu_x*, mu_y*)^2 / epsilon
};

struct BasicIdeaReport {
  std::vector<BasicIdeaRow> rows;
  std::vector<double> grid;
  std::vector<double> u;
  std::vector<double> v;
  double residual = 0.0;  // max |A u + f|
  bool u_below_v = false;
  bool penalty_nonincreasing = false;
  double final_penalty = 0.0;
};

// Dense operator of c u - L u: the jump u(x + m) is linear interpolation on
// the periodic grid, the compensator m u' an upwind difference. Rows sum to
// c(x) and off-diagonal entries are <= 0, so the matrix is strictly
// diagonally dominant whenever c >= lambda > 0.
inline Eigen::MatrixXd periodic_levy_matrix(const EquationSpec& eq, std::size_t n) {
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = h * static_cast<double>(k);
    const double c = eq.c(x), m = eq.m(x);
    require(c >= eq.lambda && c <= eq.lambda1, "equation: c(x) outside [lambda, lambda1]");
    require(std::abs(m) < 1.0, "equation: jump size must stay inside the unit ball");
    a(k, k) += c + 1.0;
    const double t = m / h;
    const double fl = std::floor(t);
    const double theta = t - fl;
    const auto wrap = [n](long long j) { return static_cast<std::size_t>(((j % (long long)n) + n) % n); };
    const long long j0 = static_cast<long long>(k) + static_cast<long long>(fl);
    a(k, wrap(j0)) -= 1.0 - theta;
    a(k, wrap(j0 + 1)) -= theta;
    if (m > 0.0) {
      a(k, k) += m / h;
      a(k, wrap(static_cast<long long>(k) - 1)) -= m / h;
    } else {
      a(k, k) -= m / h;
      a(k, wrap(static_cast<long long>(k) + 1)) += m / h;
    }
  }
  return a;
}

inline BasicIdeaReport basic_idea_experiment(const EquationSpec& eq, const BasicIdeaConfig& cfg) {
  require(eq.lambda > 0.0, "equation: lambda must be > 0");
  require(cfg.nodes >= 8, "experiment: need at least 8 nodes");
  require(cfg.margin >= 0.0, "experiment: margin must be >= 0");
  const std::size_t n = cfg.nodes;
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  const Eigen::MatrixXd a = periodic_levy_matrix(eq, n);
  Eigen::VectorXd rhs(n);
  BasicIdeaReport rep;
  rep.grid.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    rep.grid[k] = h * static_cast<double>(k);
    rhs(k) = -eq.f(rep.grid[k]);
  }
  const Eigen::VectorXd sol = a.partialPivLu().solve(rhs);
  if (!sol.allFinite()) throw SolverFailure("experiment: linear solve failed");
  rep.residual = (a * sol - rhs).cwiseAbs().maxCoeff();
  rep.u.assign(sol.data(), sol.data() + n);
  rep.v.resize(n);
  rep.u_below_v = true;
  for (std::size_t k = 0; k < n; ++k) {
    double dx = std::abs(rep.grid[k] - cfg.bump_center);
    dx = std::min(dx, 2.0 * std::numbers::pi - dx);
    const double bump = std::exp(-dx * dx / (cfg.bump_width * cfg.bump_width));
    rep.v[k] = rep.u[k] + cfg.margin * (1.0 - bump);
    rep.u_below_v = rep.u_below_v && rep.u[k] <= rep.v[k];
  }
  const Point lo{0.0}, hi{h * static_cast<double>(n - 1)};
  const GridFunction ug = GridFunction(lo, hi, {n}).with_values(rep.u);
  const GridFunction vg = GridFunction(lo, hi, {n}).with_values(rep.v);
  for (double eps : cfg.epsilons) {
    const PenalizationSpec spec{eps, cfg.kappa, 2.0};
    const auto best = doubling_maximize(ug, vg, spec);
    BasicIdeaRow row;
    row.epsilon = eps;
    row.kappa = cfg.kappa;
    row.x_star = best.x[0];
    row.y_star = best.y[0];
    row.gap = eq.lambda * (ug[best.i] - vg[best.j]);
    const double sep = row.x_star - row.y_star;
    row.penalty_term = sep * sep / eps;
    const DiscreteMeasure mx(1, {{{eq.m(row.x_star)}, 1.0}});
    const DiscreteMeasure my(1, {{{eq.m(row.y_star)}, 1.0}});
    row.distance_term = cfg.distance_constant * solve(mx, my, CostSpec{2.0}).value / eps;
    rep.rows.push_back(row);
  }
  rep.penalty_nonincreasing = true;
  for (std::size_t k = 0; k + 1 < rep.rows.size(); ++k) {
    rep.penalty_nonincreasing =
        rep.penalty_nonincreasing && rep.rows[k + 1].penalty_term <= rep.rows[k].penalty_term;
  }
  rep.final_penalty = rep.rows.empty() ? 0.0 : rep.rows.back().penalty_term;
  return rep;
}

}  // namespace levyot

#endif  // LEVYOT_VISCOSITY_HPP_
