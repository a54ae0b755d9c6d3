#pragma once

// Special functions used by the closed-form band integrals.
//
// Accuracy contracts (checked in tests against independent series and the
// standard library's special math):
//   beta_fn      relative 1e-13 for a, b in (0, 100]
//   bessel_j     absolute 1e-12 for 0 <= n <= 256, |x| <= 256
//   bessel_i     relative 1e-12 for 0 <= n <= 256, |y| <= 256
//   chebyshev_v  absolute 1e-13 for n <= 512, |x| <= 1

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

#include "dephase/error.hpp"

namespace dephase {

inline constexpr int kMaxBesselOrder = 256;
inline constexpr double kMaxBesselArgument = 256.0;

/// Euler beta function via log-gamma.
inline double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("beta_fn requires a > 0 and b > 0");
  }
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

namespace detail {

inline void check_bessel_range(int nmax, double x) {
  if (nmax < 0) throw DomainError("Bessel order must be >= 0");
  if (nmax > kMaxBesselOrder || std::abs(x) > kMaxBesselArgument) {
    throw DomainError("Bessel order/argument beyond validated range (n=" + std::to_string(nmax) +
                      ", x=" + std::to_string(x) + ")");
  }
}

// Even start index for Miller's backward recurrence.
inline int miller_start(int nmax, double ax) {
  const int base = std::max(nmax, static_cast<int>(std::ceil(ax)));
  const int m = base + 24 + static_cast<int>(std::sqrt(60.0 * (base + 1)));
  return m + (m % 2);
}

}  // namespace detail

/// J_0(x) ... J_nmax(x) by Miller's backward recurrence normalised with
/// J_0 + 2 sum_k J_2k = 1.
inline std::vector<double> bessel_j_all(int nmax, double x) {
  detail::check_bessel_range(nmax, x);
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const double ax = std::abs(x);
  const int m = detail::miller_start(nmax, ax);
  const double two_over_x = 2.0 / ax;

  double next = 0.0;  // J_{k+1}
  double cur = 1e-300;  // J_k, arbitrary seed
  double norm = 0.0;
  for (int k = m; k >= 0; --k) {
    if (k <= nmax) out[static_cast<std::size_t>(k)] = cur;
    if (k % 2 == 0) norm += (k == 0 ? cur : 2.0 * cur);
    if (k == 0) break;
    const double prev = k * two_over_x * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      for (int j = k; j <= nmax; ++j) {
        if (j >= 0) out[static_cast<std::size_t>(j)] *= 1e-250;
      }
    }
  }
  for (int n = 0; n <= nmax; ++n) {
    double v = out[static_cast<std::size_t>(n)] / norm;
    if (x < 0.0 && (n % 2) == 1) v = -v;
    out[static_cast<std::size_t>(n)] = v;
  }
  return out;
}

/// Bessel function of the first kind, integer order.
inline double bessel_j(int n, double x) { return bessel_j_all(n, x).back(); }

/// e^{-|y|} I_0(y) ... e^{-|y|} I_nmax(y), normalised with
/// I_0 + 2 sum_k I_k = e^y.
inline std::vector<double> bessel_i_scaled_all(int nmax, double y) {
  detail::check_bessel_range(nmax, y);
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  if (y == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const double ay = std::abs(y);
  const int m = detail::miller_start(nmax, ay);
  const double two_over_y = 2.0 / ay;

  double next = 0.0;
  double cur = 1e-300;
  double norm = 0.0;
  for (int k = m; k >= 0; --k) {
    if (k <= nmax) out[static_cast<std::size_t>(k)] = cur;
    norm += (k == 0 ? cur : 2.0 * cur);
    if (k == 0) break;
    const double prev = k * two_over_y * cur + next;
    next = cur;
    cur = prev;
    if (cur > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      for (int j = k; j <= nmax; ++j) {
        if (j >= 0) out[static_cast<std::size_t>(j)] *= 1e-250;
      }
    }
  }
  for (int n = 0; n <= nmax; ++n) {
    double v = out[static_cast<std::size_t>(n)] / norm;
    if (y < 0.0 && (n % 2) == 1) v = -v;
    out[static_cast<std::size_t>(n)] = v;
  }
  return out;
}

/// Modified Bessel function of the first kind, integer order.
inline double bessel_i(int n, double y) {
  return bessel_i_scaled_all(n, y).back() * std::exp(std::abs(y));
}

/// V_0(x) ... V_nmax(x), third-kind Chebyshev polynomials,
/// V_n(cos t) = cos((n + 1/2) t) / cos(t/2).
inline std::vector<double> chebyshev_v_all(int nmax, double x) {
  if (nmax < 0) throw DomainError("Chebyshev degree must be >= 0");
  if (!(std::abs(x) <= 1.0)) throw DomainError("chebyshev_v requires |x| <= 1");
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1);
  out[0] = 1.0;
  if (nmax >= 1) out[1] = 2.0 * x - 1.0;
  for (int n = 2; n <= nmax; ++n) {
    out[static_cast<std::size_t>(n)] =
        2.0 * x * out[static_cast<std::size_t>(n - 1)] - out[static_cast<std::size_t>(n - 2)];
  }
  return out;
}

inline double chebyshev_v(int n, double x) { return chebyshev_v_all(n, x).back(); }

/// sin(m arccos x), written through neighbouring third-kind polynomials:
/// (V_{m-1}(x) - V_m(x)) (1 + x) / (2 sqrt(1 - x^2)).
/// This is the partial-band integral m * int_0^{arccos x} cos(m k) dk.
inline double band_sine(int m, const std::vector<double>& v, double x) {
  if (m == 0 || std::abs(x) == 1.0) return 0.0;
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  return (v[static_cast<std::size_t>(m - 1)] - v[static_cast<std::size_t>(m)]) * (1.0 + x) /
         (2.0 * s);
}

// Bessel J, modified Bessel I and Chebyshev V values for one fixed argument
// each, computed once.
class SpecialFnTable {
 public:
  SpecialFnTable(double bessel_arg, int bessel_orders, double cheb_arg, int cheb_degrees,
                 double modified_arg = 0.0, int modified_orders = 0)
      : bessel_arg_(bessel_arg),
        cheb_arg_(cheb_arg),
        j_(bessel_j_all(bessel_orders, bessel_arg)),
        i_(bessel_i_scaled_all(modified_orders, modified_arg)),
        v_(chebyshev_v_all(cheb_degrees, cheb_arg)) {
    const double scale = std::exp(std::abs(modified_arg));
    for (double& x : i_) x *= scale;
  }

  double bessel_arg() const { return bessel_arg_; }
  double cheb_arg() const { return cheb_arg_; }
  int bessel_orders() const { return static_cast<int>(j_.size()) - 1; }
  int cheb_degrees() const { return static_cast<int>(v_.size()) - 1; }

  double j(int n) const { return j_.at(static_cast<std::size_t>(n)); }
  double i(int n) const { return i_.at(static_cast<std::size_t>(n)); }
  double v(int n) const { return v_.at(static_cast<std::size_t>(n)); }
  double band_sine(int m) const { return dephase::band_sine(m, v_, cheb_arg_); }

 private:
  double bessel_arg_;
  double cheb_arg_;
  std::vector<double> j_;
  std::vector<double> i_;
  std::vector<double> v_;
};

/// Upper bound on |J_n(z)| valid for all real z: (|z|/2)^n / n!.
inline double bessel_j_bound(int n, double z) {
  if (z == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(n * std::log(std::abs(z) / 2.0) - std::lgamma(n + 1.0));
}

}  // namespace dephase
