#pragma once

// Closed forms for the band integrals.
//
// omega_nu(x, y) = (1/pi) int_0^pi cos^nu(z) e^{y cos z} cos(x sin^2 z) dz
// is evaluated from its double power series
//   sum_{n,m} (-1)^n x^{2n}/(2n)! y^{2m+i}/(2m+i)! B(2n + 1/2, (nu + 2m + 1 + i)/2) / pi,
// i = nu mod 2, accumulated in extended precision. When cancellation in
// the alternating n-sum would eat the requested tolerance the defining
// integral is integrated directly instead.
//
// With Boltzmann statistics the band integrals are exact in omega and I_nu.
// With Fermi-Dirac statistics a Sommerfeld expansion to O(T^2) gives a
// Bessel series (Jacobi-Anger expansion of cos(gt - gt cos 2k)) in which the
// partial-band integrals sin(m k_F) appear, k_F = arccos(-mu/2).

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>

#include "dephase/error.hpp"
#include "dephase/lattice.hpp"
#include "dephase/quadrature.hpp"
#include "dephase/special_functions.hpp"
#include "dephase/transport.hpp"

namespace dephase {

struct SeriesResult {
  double value = 0.0;
  double trunc_error_est = 0.0;
  std::size_t terms_used = 0;
  bool converged = false;
  // Set when omega fell back to direct quadrature.
  bool used_quadrature = false;
};

// Series are only attempted while the largest term stays modest.
inline constexpr double kOmegaSeriesLimit = 60.0;
inline constexpr int kOmegaMaxTerms = 400;

namespace detail {

using Wide = long double;

inline SeriesResult omega_quadrature(int nu, Wide x, Wide y, double tol) {
  QuadratureSpec spec;
  spec.abs_tol = tol / 4.0;
  spec.rel_tol = 0.0;
  spec.nodes_per_panel = 20;
  spec.base_panels = 8;
  spec.max_panels = 1u << 15;
  auto f = [&](Wide z) {
    const Wide c = std::cos(z);
    const Wide s = std::sin(z);
    return std::pow(c, nu) * std::exp(y * c) * std::cos(x * s * s);
  };
  const std::size_t panels = std::max<std::size_t>(
      spec.base_panels, static_cast<std::size_t>(std::ceil(2.0 * static_cast<double>(x))));
  QuadratureResult<Wide> r{};
  try {
    r = integrate<Wide>(f, Wide(0), std::numbers::pi_v<Wide>, spec, panels);
  } catch (const QuadratureError& e) {
    throw ConvergenceError(std::string("omega quadrature fallback failed: ") + e.what());
  }
  const Wide pi = std::numbers::pi_v<Wide>;
  // Rounding floor of the quadrature sum, scaled by the envelope e^{y}.
  const Wide rounding = 64 * std::numeric_limits<Wide>::epsilon() * std::exp(y);
  SeriesResult out;
  out.value = static_cast<double>(r.value / pi);
  out.trunc_error_est = static_cast<double>((r.error + rounding) / pi) +
                        std::numeric_limits<double>::epsilon() * std::abs(out.value);
  out.terms_used = r.panels;
  out.used_quadrature = true;
  out.converged = out.trunc_error_est <= tol;
  return out;
}

}  // namespace detail

/// omega_nu(x, y) for integer nu >= 0 and y >= 0, to absolute tolerance tol.
inline SeriesResult omega(int nu, double x, double y, double tol) {
  using detail::Wide;
  if (nu < 0) throw DomainError("omega requires nu >= 0");
  if (!(y >= 0.0)) throw DomainError("omega requires y >= 0");
  if (!(tol > 0.0)) throw DomainError("omega requires tol > 0");
  const Wide ax = std::abs(static_cast<Wide>(x));
  const Wide wy = y;
  if (ax > kOmegaSeriesLimit || wy > kOmegaSeriesLimit) {
    return detail::omega_quadrature(nu, ax, wy, tol);
  }

  const int parity = nu % 2;
  const Wide pi = std::numbers::pi_v<Wide>;
  const Wide x2 = ax * ax;
  const Wide y2 = wy * wy;
  const Wide a0 = 0.5L;
  const Wide b0 = (nu + 1 + parity) / Wide(2);
  // term(0, 0) = y^i / i! B(1/2, b0) / pi
  Wide head = std::exp(std::lgamma(a0) + std::lgamma(b0) - std::lgamma(a0 + b0)) / pi;
  if (parity == 1) head *= wy;

  const Wide eps = std::numeric_limits<Wide>::epsilon();
  Wide sum = 0;
  Wide abs_sum = 0;
  Wide tail_inner = 0;
  std::size_t terms = 0;
  bool done = false;
  Wide prev_abs = std::numeric_limits<Wide>::infinity();
  Wide tail_outer = std::numeric_limits<Wide>::infinity();

  for (int n = 0; n < kOmegaMaxTerms && !done; ++n) {
    const Wide a = 2 * n + 0.5L;
    // Inner positive series over m.
    Wide term = head;
    Wide inner = 0;
    for (int m = 0; m < 4 * kOmegaMaxTerms; ++m) {
      inner += term;
      ++terms;
      const Wide b = (nu + 2 * m + 1 + parity) / Wide(2);
      const Wide r = y2 / ((2 * m + parity + 1) * Wide(2 * m + parity + 2));
      const Wide next = term * r * b / (a + b);
      if (r < 0.5L) {
        const Wide bound = next / (1 - r);
        if (bound <= eps * inner || next == 0) {
          tail_inner += bound;
          break;
        }
      }
      term = next;
    }
    const Wide signed_term = (n % 2 == 0) ? inner : -inner;
    sum += signed_term;
    abs_sum += inner;

    // |S_{n+1}| <= q_n |S_n| with q_n = x^2 / ((2n+1)(2n+2)).
    const Wide q = x2 / ((2 * n + 1) * Wide(2 * n + 2));
    const Wide next_bound = q * inner;
    if (q < 1) {
      tail_outer = next_bound;
      if (inner < tol / 10.0 && prev_abs < tol / 10.0 && next_bound <= tol / 10.0) done = true;
      if (inner == 0) done = true;
    }
    prev_abs = inner;
    // Next row's head: B(a + 2, b0) / B(a, b0) = a (a + 1) / ((a + b0)(a + b0 + 1)).
    head *= x2 / ((2 * n + 1) * Wide(2 * n + 2)) * a * (a + 1) / ((a + b0) * (a + b0 + 1));
  }

  SeriesResult out;
  out.value = static_cast<double>(sum);
  out.terms_used = terms;
  const Wide rounding = 16 * eps * abs_sum;
  out.trunc_error_est = static_cast<double>(tail_outer + tail_inner + rounding) +
                        std::numeric_limits<double>::epsilon() * std::abs(out.value);
  out.converged = done && out.trunc_error_est <= tol;
  if (!done || out.trunc_error_est > tol) {
    // Cancellation or a short term budget: integrate the definition instead.
    return detail::omega_quadrature(nu, ax, wy, tol);
  }
  return out;
}

namespace detail {

// omega tolerance expressed relative to its envelope I_0(y) >= |omega_nu|.
inline double omega_tolerance(double y) { return 1e-13 * std::max(1.0, bessel_i(0, y)); }

inline SeriesResult checked_omega(int nu, double x, double y) {
  SeriesResult r = omega(nu, x, y, omega_tolerance(y));
  if (!r.converged) {
    throw ConvergenceError("omega_" + std::to_string(nu) + "(" + std::to_string(x) + ", " +
                           std::to_string(y) + ") did not reach tolerance");
  }
  return r;
}

inline double damped(double t, double lambda) {
  if (std::isnan(t) || t < 0.0) throw DomainError("time must be >= 0");
  if (!(lambda >= 0.0)) throw DomainError("dephasing rate must be >= 0");
  if (std::isinf(t)) {
    if (lambda == 0.0) {
      throw EquilibriumUndefinedError("damped limit undefined for lambda = 0");
    }
    return 0.0;
  }
  return lambda == 0.0 ? 1.0 : std::exp(-lambda * t);
}

}  // namespace detail

/// Boltzmann-statistics Nbar: e^{beta mu} (e^{-lambda t} omega_0(2gt, 2 beta) - I_0(2 beta)).
inline double nbar_boltzmann_closed(double t, const ReservoirParams& res, double lambda, double g) {
  validate(res);
  const double damping = detail::damped(t, lambda);
  const double y = 2.0 * res.beta();
  const double prefactor = std::exp(res.beta() * res.chemical_potential);
  double osc = 0.0;
  if (damping > 0.0) osc = damping * detail::checked_omega(0, 2.0 * g * t, y).value;
  return prefactor * (osc - bessel_i(0, y));
}

/// Boltzmann-statistics Ebar: -2 e^{beta mu} (e^{-lambda t} omega_1(2gt, 2 beta) - I_1(2 beta)).
inline double ebar_boltzmann_closed(double t, const ReservoirParams& res, double lambda, double g) {
  validate(res);
  const double damping = detail::damped(t, lambda);
  const double y = 2.0 * res.beta();
  const double prefactor = std::exp(res.beta() * res.chemical_potential);
  double osc = 0.0;
  if (damping > 0.0) osc = damping * detail::checked_omega(1, 2.0 * g * t, y).value;
  return -2.0 * prefactor * (osc - bessel_i(1, y));
}

inline constexpr int kDefaultSommerfeldTerms = 100;

namespace detail {

struct SommerfeldSetup {
  double damping;
  double z;        // g t
  double k_fermi;  // arccos(-mu/2)
  double x;        // -mu/2
};

inline SommerfeldSetup sommerfeld_setup(double t, const ReservoirParams& res, double lambda,
                                        double g, int n_max) {
  validate(res);
  if (!(std::abs(res.chemical_potential) < 2.0)) {
    throw DomainError("Sommerfeld forms need |mu| < 2 (Fermi level inside the band)");
  }
  if (n_max < 1 || 2 * n_max > kMaxBesselOrder) {
    throw DomainError("n_max must lie in [1, " + std::to_string(kMaxBesselOrder / 2) + "]");
  }
  double damping = damped(t, lambda);
  // Same cut as the numerical band integrals: the oscillating part is gone.
  if (damping < kNegligibleDamping) damping = 0.0;
  const double z = std::isinf(t) ? 0.0 : g * t;
  const double x = -res.chemical_potential / 2.0;
  return {damping, z, std::acos(x), x};
}

// Sum over n > last of the Bessel bound on |J_{2n}| + |J_{2n-1}|.
inline double bessel_tail(int last, double z) {
  double tail = 0.0;
  for (int m = 2 * last + 1; m <= 2 * last + 400; ++m) {
    const double b = bessel_j_bound(m, z);
    tail += b;
    if (m > std::abs(z) && b < 1e-30 * (tail + 1e-300)) break;
  }
  return tail;
}

// d/de of (e^{-lambda t} cos(2gt(1 - e^2/4)) - 1) / sqrt(4 - e^2), and of e times it.
struct SommerfeldSlopes {
  double number;
  double energy;
};

inline SommerfeldSlopes sommerfeld_slopes(double eps, double damping, double g, double t) {
  const double s2 = 4.0 - eps * eps;
  const double s = std::sqrt(s2);
  double d = -1.0;
  double dd = 0.0;
  if (damping > 0.0) {
    const double phase = 2.0 * g * t * (1.0 - eps * eps / 4.0);
    d = damping * std::cos(phase) - 1.0;
    dd = damping * std::sin(phase) * g * t * eps;
  }
  const double f = d / s;
  const double fp = dd / s + d * eps / (s2 * s);
  return {fp, f + eps * fp};
}

template <class Term>
SeriesResult sum_bessel_series(const SommerfeldSetup& st, int n_max, double tol, Term&& term) {
  SeriesResult out;
  double sum = term(0);
  double prev = std::abs(sum);
  out.terms_used = 1;
  for (int n = 1; n <= n_max; ++n) {
    const double tn = ((n % 2 == 0) ? 1.0 : -1.0) * term(n);
    sum += tn;
    out.terms_used = static_cast<std::size_t>(n) + 1;
    const double tail = bessel_tail(n, st.z);
    if (std::abs(tn) < tol / 10.0 && prev < tol / 10.0 && tail < tol) {
      out.value = sum;
      out.trunc_error_est = tail;
      out.converged = true;
      return out;
    }
    prev = std::abs(tn);
  }
  out.value = sum;
  out.trunc_error_est = bessel_tail(n_max, st.z);
  out.converged = false;
  return out;
}

inline constexpr double kSommerfeldSeriesTol = 1e-15;

}  // namespace detail

/// Low-temperature Fermi-Dirac Nbar:
///   (1/pi) [ e^{-lambda t} sum_n (-1)^n f_n - k_F ] + (pi T^2 / 6) F'(mu),
///   f_0 = cos(gt) J_0(gt) k_F,
///   f_n = cos(gt) J_2n(gt) sin(4n k_F)/(2n) - sin(gt) J_{2n-1}(gt) sin((4n-2) k_F)/(2n-1).
/// trunc_error_est bounds the Bessel-series tail only, not the O(T^4)
/// remainder of the expansion itself.
inline SeriesResult nbar_fd_sommerfeld(double t, const ReservoirParams& res, double lambda, double g,
                                       int n_max = kDefaultSommerfeldTerms) {
  const auto st = detail::sommerfeld_setup(t, res, lambda, g, n_max);
  const double pi = std::numbers::pi;
  SeriesResult series{0.0, 0.0, 0, true, false};
  if (st.damping > 0.0) {
    const SpecialFnTable table(st.z, 2 * n_max, st.x, 4 * n_max + 1);
    const double c = std::cos(st.z);
    const double s = std::sin(st.z);
    series = detail::sum_bessel_series(st, n_max, detail::kSommerfeldSeriesTol / st.damping, [&](int n) {
      if (n == 0) return c * table.j(0) * st.k_fermi;
      return c * table.j(2 * n) * table.band_sine(4 * n) / (2.0 * n) -
             s * table.j(2 * n - 1) * table.band_sine(4 * n - 2) / (2.0 * n - 1.0);
    });
  }
  const auto slopes = detail::sommerfeld_slopes(res.chemical_potential, st.damping, g,
                                                std::isinf(t) ? 0.0 : t);
  const double temp = res.temperature;
  SeriesResult out = series;
  out.value = (st.damping * series.value - st.k_fermi) / pi + pi * temp * temp / 6.0 * slopes.number;
  out.trunc_error_est = st.damping * series.trunc_error_est / pi;
  if (!out.converged) {
    throw ConvergenceError("Nbar Sommerfeld series exceeded its term budget");
  }
  return out;
}

/// Low-temperature Fermi-Dirac Ebar:
///   (1/pi) [ -2 e^{-lambda t} sum_n (-1)^n h_n + 2 sin k_F ] + (pi T^2 / 6) G'(mu),
///   h_0 = cos(gt) J_0(gt) sin k_F,
///   h_n = cos(gt) J_2n [s_{4n+1}/(4n+1) + s_{4n-1}/(4n-1)]
///       - sin(gt) J_{2n-1} [s_{4n-1}/(4n-1) + s_{4n-3}/(4n-3)],   s_m = sin(m k_F).
inline SeriesResult ebar_fd_sommerfeld(double t, const ReservoirParams& res, double lambda, double g,
                                       int n_max = kDefaultSommerfeldTerms) {
  const auto st = detail::sommerfeld_setup(t, res, lambda, g, n_max);
  const double pi = std::numbers::pi;
  SeriesResult series{0.0, 0.0, 0, true, false};
  if (st.damping > 0.0) {
    const SpecialFnTable table(st.z, 2 * n_max, st.x, 4 * n_max + 1);
    const double c = std::cos(st.z);
    const double s = std::sin(st.z);
    auto part = [&](int m) { return table.band_sine(m) / m; };
    series = detail::sum_bessel_series(st, n_max, detail::kSommerfeldSeriesTol / st.damping, [&](int n) {
      if (n == 0) return c * table.j(0) * std::sin(st.k_fermi);
      return c * table.j(2 * n) * (part(4 * n + 1) + part(4 * n - 1)) -
             s * table.j(2 * n - 1) * (part(4 * n - 1) + part(4 * n - 3));
    });
  }
  const auto slopes = detail::sommerfeld_slopes(res.chemical_potential, st.damping, g,
                                                std::isinf(t) ? 0.0 : t);
  const double temp = res.temperature;
  SeriesResult out = series;
  out.value = (-2.0 * st.damping * series.value + 2.0 * std::sin(st.k_fermi)) / pi +
              pi * temp * temp / 6.0 * slopes.energy;
  out.trunc_error_est = 2.0 * st.damping * series.trunc_error_est / pi;
  if (!out.converged) {
    throw ConvergenceError("Ebar Sommerfeld series exceeded its term budget");
  }
  return out;
}

/// Onsager block from the Sommerfeld forms. Temperature derivatives are
/// exact (T enters only through the T^2 term); mu derivatives are central
/// differences of the series.
inline OnsagerBlock onsager_sommerfeld(double t, const ReservoirParams& res, double lambda, double g,
                                       int n_max = kDefaultSommerfeldTerms) {
  validate(res);
  const double temp = res.temperature;
  const double mu = res.chemical_potential;
  const double h = 1e-5;
  auto n_at = [&](double m, double tt) { return nbar_fd_sommerfeld(t, {tt, m}, lambda, g, n_max).value; };
  auto e_at = [&](double m, double tt) { return ebar_fd_sommerfeld(t, {tt, m}, lambda, g, n_max).value; };
  const double dn_dmu = (n_at(mu + h, temp) - n_at(mu - h, temp)) / (2.0 * h);
  const double de_dmu = (e_at(mu + h, temp) - e_at(mu - h, temp)) / (2.0 * h);
  // T enters only through (pi T^2 / 6) x slope, so d/dT = (pi T / 3) x slope.
  const double damping = detail::damped(t, lambda);
  const auto slopes = detail::sommerfeld_slopes(mu, damping, g, std::isinf(t) ? 0.0 : t);
  const double dn_dt = std::numbers::pi * temp / 3.0 * slopes.number;
  const double de_dt = std::numbers::pi * temp / 3.0 * slopes.energy;
  OnsagerBlock block{};
  block.evaluated_at = {temp, mu, lambda, g, t};
  block.j_n_mu = 0.5 * temp * dn_dmu;
  block.j_n_t = 0.5 * temp * temp * dn_dt;
  block.j_q_mu = 0.5 * temp * (de_dmu - mu * dn_dmu);
  block.j_q_t = 0.5 * temp * temp * (de_dt - mu * dn_dt);
  return block;
}

}  // namespace dephase
