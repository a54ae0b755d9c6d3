#pragma once

// Adaptive composite Gauss-Legendre quadrature.
//
// Each panel carries two estimates: the n-node rule on the whole panel and
// the sum of the same rule on its two halves. The finer value is kept and
// their difference is the panel's error estimate. The panel with the
// largest estimate is bisected until the total estimate meets the
// tolerance. Panels are summed left to right, so the result does not depend
// on how (or whether) panel evaluations are distributed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dephase/error.hpp"

namespace dephase {

struct QuadratureSpec {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  std::size_t max_panels = 1u << 16;
  std::size_t nodes_per_panel = 16;
  std::size_t base_panels = 8;
};

template <class Real = double>
struct QuadratureResult {
  Real value;
  Real error;
  std::size_t panels;
};

// Nodes and weights on [-1, 1].
template <class Real = double>
class GaussLegendre {
 public:
  explicit GaussLegendre(std::size_t n) : nodes_(n), weights_(n) {
    if (n == 0) throw DomainError("Gauss-Legendre rule needs at least one node");
    const Real order = static_cast<Real>(n);
    // (P_n(x), P_n'(x)) by the three-term recurrence.
    auto legendre = [&](Real x) {
      Real p0 = 1;
      Real p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const Real kk = static_cast<Real>(k);
        const Real p2 = ((2 * kk - 1) * x * p1 - (kk - 1) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      return std::pair<Real, Real>{p1, order * (x * p1 - p0) / (x * x - 1)};
    };
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
      Real x = std::cos(std::numbers::pi_v<Real> * (static_cast<Real>(i) + Real(0.75)) /
                        (order + Real(0.5)));
      for (int iter = 0; iter < 100; ++iter) {
        const auto [p, dp] = legendre(x);
        const Real dx = p / dp;
        x -= dx;
        if (std::abs(dx) <= 2 * std::numeric_limits<Real>::epsilon()) break;
      }
      const Real dp = legendre(x).second;
      const Real w = 2 / ((1 - x * x) * dp * dp);
      nodes_[i] = -x;
      nodes_[n - 1 - i] = x;
      weights_[i] = w;
      weights_[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes_[n / 2] = 0;
  }

  std::size_t size() const { return nodes_.size(); }

  template <class F>
  Real apply(F& f, Real lo, Real hi) const {
    const Real c = (lo + hi) / 2;
    const Real h = (hi - lo) / 2;
    Real sum = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(c + h * nodes_[i]);
    return sum * h;
  }

 private:
  std::vector<Real> nodes_;
  std::vector<Real> weights_;
};

namespace detail {

template <class Real>
struct Panel {
  Real lo;
  Real hi;
  Real left;   // rule on [lo, mid]
  Real right;  // rule on [mid, hi]
  Real error;
  Real value() const { return left + right; }
};

// Neumaier-compensated running sum.
template <class Real>
class CompensatedSum {
 public:
  void add(Real x) {
    const Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Real value() const { return sum_ + comp_; }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
};

}  // namespace detail

/// Integrates f over [a, b], starting from `initial_panels` equal panels,
/// further cut at any `breaks` inside (a, b). Throws QuadratureError
/// (carrying the best value and its error estimate) when the panel budget
/// runs out before the tolerance is met.
template <class Real = double, class F>
QuadratureResult<Real> integrate(F&& f, Real a, Real b, const QuadratureSpec& spec,
                                 std::size_t initial_panels = 0, std::span<const Real> breaks = {}) {
  if (!(b > a)) {
    if (a == b) return {Real(0), Real(0), 0};
    throw DomainError("integrate requires a <= b");
  }
  const GaussLegendre<Real> rule(spec.nodes_per_panel);
  const std::size_t start = std::max<std::size_t>({initial_panels, spec.base_panels, 1});
  if (start > spec.max_panels) {
    throw QuadratureError("initial panel count " + std::to_string(start) + " exceeds max_panels",
                          0.0, INFINITY);
  }

  using detail::Panel;
  auto make_panel = [&](Real lo, Real hi, Real coarse) {
    const Real mid = (lo + hi) / 2;
    Panel<Real> p{lo, hi, rule.apply(f, lo, mid), rule.apply(f, mid, hi), 0};
    p.error = std::abs(p.value() - coarse);
    return p;
  };

  std::vector<Real> edges;
  edges.reserve(start + 1 + breaks.size());
  const Real width = (b - a) / static_cast<Real>(start);
  for (std::size_t i = 0; i < start; ++i) edges.push_back(a + width * static_cast<Real>(i));
  for (Real x : breaks) {
    if (x > a && x < b) edges.push_back(x);
  }
  std::sort(edges.begin(), edges.end());
  edges.push_back(b);
  const Real min_width = (b - a) * std::numeric_limits<Real>::epsilon() * 64;
  std::vector<Panel<Real>> panels;
  panels.reserve(edges.size() * 2);
  Real lo = edges.front();
  for (std::size_t i = 1; i < edges.size(); ++i) {
    const Real hi = edges[i];
    if (hi - lo < min_width && i + 1 < edges.size()) continue;
    panels.push_back(make_panel(lo, hi, rule.apply(f, lo, hi)));
    lo = hi;
  }
  if (panels.size() > spec.max_panels) {
    throw QuadratureError("initial panel count " + std::to_string(panels.size()) +
                              " exceeds max_panels",
                          0.0, INFINITY);
  }

  auto totals = [&]() {
    std::vector<std::size_t> order(panels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return panels[x].lo < panels[y].lo; });
    detail::CompensatedSum<Real> value;
    detail::CompensatedSum<Real> error;
    for (std::size_t i : order) {
      value.add(panels[i].value());
      error.add(panels[i].error);
    }
    return std::pair<Real, Real>{value.value(), error.value()};
  };

  // Max-heap on error; ties broken by position so refinement order is fixed.
  auto worse = [&](std::size_t x, std::size_t y) {
    if (panels[x].error != panels[y].error) return panels[x].error < panels[y].error;
    return panels[x].lo > panels[y].lo;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> heap(worse);
  for (std::size_t i = 0; i < panels.size(); ++i) heap.push(i);

  Real total_error = 0;
  for (const auto& p : panels) total_error += p.error;
  Real approx_value = 0;
  for (const auto& p : panels) approx_value += p.value();

  while (true) {
    const Real tol = std::max<Real>(static_cast<Real>(spec.abs_tol),
                                    static_cast<Real>(spec.rel_tol) * std::abs(approx_value));
    if (total_error <= tol) break;
    if (panels.size() + 1 > spec.max_panels) {
      const auto [value, error] = totals();
      if (error <= tol) return {value, error, panels.size()};
      throw QuadratureError("quadrature tolerance not met within " +
                                std::to_string(spec.max_panels) + " panels",
                            static_cast<double>(value), static_cast<double>(error));
    }
    const std::size_t idx = heap.top();
    heap.pop();
    const Panel<Real> parent = panels[idx];
    const Real mid = (parent.lo + parent.hi) / 2;
    panels[idx] = make_panel(parent.lo, mid, parent.left);
    panels.push_back(make_panel(mid, parent.hi, parent.right));
    total_error += panels[idx].error + panels.back().error - parent.error;
    approx_value += panels[idx].value() + panels.back().value() - parent.value();
    heap.push(idx);
    heap.push(panels.size() - 1);
    // The running sums drift; resynchronise them when they claim convergence.
    const Real tol2 = std::max<Real>(static_cast<Real>(spec.abs_tol),
                                     static_cast<Real>(spec.rel_tol) * std::abs(approx_value));
    if (total_error <= tol2) {
      const auto [value, error] = totals();
      total_error = error;
      approx_value = value;
    }
  }
  const auto [value, error] = totals();
  return {value, error, panels.size()};
}

/// Integral over the half-chain band k in [0, pi].
template <class F>
QuadratureResult<double> integrate_band(F&& f, const QuadratureSpec& spec,
                                        std::size_t initial_panels = 0,
                                        std::span<const double> breaks = {}) {
  return integrate<double>(std::forward<F>(f), 0.0, std::numbers::pi, spec, initial_panels, breaks);
}

/// Panels needed to give every oscillation of cos(2 g t sin^2 k) about four panels.
inline std::size_t oscillation_panels(const QuadratureSpec& spec, double g, double t) {
  const double need = std::ceil(4.0 * std::abs(g) * t);
  if (!std::isfinite(need)) return spec.max_panels;
  return std::max<std::size_t>(spec.base_panels, static_cast<std::size_t>(need));
}

}  // namespace dephase
