#pragma once

// Accumulated particle and heat transfer between the halves in the
// continuum limit, per site, and the linear-response (Onsager) block.
//
//   Nbar = (1/pi) int_0^pi n(k) (e^{-lambda t} cos(2 g sin^2(k) t) - 1) dk
//   Ebar = same with weight eps_k,  Qbar = Ebar - mu Nbar
//
// Times are t >= 0 or +infinity, the latter meaning the damped limit,
// which only exists for lambda > 0.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "dephase/error.hpp"
#include "dephase/lattice.hpp"
#include "dephase/quadrature.hpp"

namespace dephase {

enum class Statistics { fermi_dirac, boltzmann };

inline constexpr double kEquilibrium = std::numeric_limits<double>::infinity();

struct BandValue {
  double value;
  double error;
};

struct EvaluationPoint {
  double temperature;
  double chemical_potential;
  double dephasing;
  double coupling;
  double time;
};

struct OnsagerBlock {
  double j_n_mu;  // dimensionless
  double j_n_t;   // alpha
  double j_q_mu;  // alpha
  double j_q_t;   // alpha^2
  EvaluationPoint evaluated_at;
  // Quadrature error estimates in the same order.
  std::array<double, 4> errors{};
};

struct FluxPair {
  double j_particle;
  double j_heat;
};

namespace detail {

// Envelope of the exchange factor e^{-lambda t} cos(2 g sin^2 k t) - 1.
struct Evolution {
  double damping;
  double phase_rate;  // 2 g t
  bool oscillates;
  std::size_t panels;

  double factor(double k) const {
    if (!oscillates) return -1.0;
    const double s = std::sin(k);
    return damping * std::cos(phase_rate * s * s) - 1.0;
  }
};

// Below this the oscillating term cannot change a double next to the -1.
inline constexpr double kNegligibleDamping = 1e-17;

inline Evolution evolution(double t, double lambda, double g, const QuadratureSpec& quad) {
  if (std::isnan(t) || t < 0.0) throw DomainError("time must be >= 0");
  if (!(lambda >= 0.0)) throw DomainError("dephasing rate must be >= 0");
  if (std::isinf(t)) {
    if (lambda == 0.0) {
      throw EquilibriumUndefinedError(
          "the t -> infinity limit is undefined for a closed (lambda = 0) evolution");
    }
    return {0.0, 0.0, false, quad.base_panels};
  }
  const double damping = lambda == 0.0 ? 1.0 : std::exp(-lambda * t);
  if (damping < kNegligibleDamping) return {0.0, 0.0, false, quad.base_panels};
  return {damping, 2.0 * g * t, true, oscillation_panels(quad, g, t)};
}

// Occupation and its thermal derivatives at one band energy.
struct Kernel {
  double n;
  double dn_dmu;
  double dn_dt;
};

inline Kernel kernel(double eps, const ReservoirParams& res, Statistics stats) {
  const double x = (eps - res.chemical_potential) / res.temperature;
  if (stats == Statistics::fermi_dirac) {
    const double e = std::exp(-std::abs(x));
    const double lo = e / (1.0 + e);        // occupation of the far side
    const double hi = 1.0 / (1.0 + e);
    const double n = x >= 0.0 ? lo : hi;
    const double nh = lo * hi;              // n (1 - n)
    return {n, nh / res.temperature, x * nh / res.temperature};
  }
  const double n = std::exp(-x);
  if (!(n <= kDefaultBoltzmannCap)) {
    throw DomainError("Boltzmann occupation exceeds cap; invalid Boltzmann regime");
  }
  return {n, n / res.temperature, x * n / res.temperature};
}

// At low temperature the Fermi-Dirac kernel is a step of width ~T; cut the
// band where eps = mu + c T so no initial panel straddles it blindly.
inline std::vector<double> thermal_breaks(const ReservoirParams& res, Statistics stats) {
  std::vector<double> out;
  if (stats != Statistics::fermi_dirac) return out;
  for (double c : {-32.0, -8.0, -2.0, 0.0, 2.0, 8.0, 32.0}) {
    const double eps = res.chemical_potential + c * res.temperature;
    if (eps > -2.0 && eps < 2.0) out.push_back(std::acos(-eps / 2.0));
  }
  return out;
}

template <class Weight>
BandValue band_integral(const Evolution& ev, const QuadratureSpec& quad,
                        const std::vector<double>& breaks, Weight&& weight) {
  auto integrand = [&](double k) { return weight(k) * ev.factor(k); };
  const auto r = integrate_band(integrand, quad, ev.panels, breaks);
  return {r.value / std::numbers::pi, r.error / std::numbers::pi};
}

}  // namespace detail

/// Nbar: particles (per site) transferred into A per unit occupation imbalance.
inline BandValue nbar(double t, const ReservoirParams& res, double lambda, double g,
                      const QuadratureSpec& quad, Statistics stats) {
  validate(res);
  const auto ev = detail::evolution(t, lambda, g, quad);
  if (ev.oscillates && ev.damping == 1.0 && ev.phase_rate == 0.0) return {0.0, 0.0};
  return detail::band_integral(ev, quad, detail::thermal_breaks(res, stats), [&](double k) {
    return detail::kernel(-2.0 * std::cos(k), res, stats).n;
  });
}

/// Ebar: the energy-weighted counterpart of nbar.
inline BandValue ebar(double t, const ReservoirParams& res, double lambda, double g,
                      const QuadratureSpec& quad, Statistics stats) {
  validate(res);
  const auto ev = detail::evolution(t, lambda, g, quad);
  if (ev.oscillates && ev.damping == 1.0 && ev.phase_rate == 0.0) return {0.0, 0.0};
  return detail::band_integral(ev, quad, detail::thermal_breaks(res, stats), [&](double k) {
    const double eps = -2.0 * std::cos(k);
    return eps * detail::kernel(eps, res, stats).n;
  });
}

/// Qbar = Ebar - mu Nbar.
inline BandValue qbar(double t, const ReservoirParams& res, double lambda, double g,
                      const QuadratureSpec& quad, Statistics stats) {
  const BandValue e = ebar(t, res, lambda, g, quad, stats);
  const BandValue n = nbar(t, res, lambda, g, quad, stats);
  const double mu = res.chemical_potential;
  return {e.value - mu * n.value, e.error + std::abs(mu) * n.error};
}

/// Onsager coefficients, differentiating under the integral with exact
/// kernel derivatives:
///   J_N,mu = (T/2)   dNbar/dmu      J_N,T = (T^2/2) dNbar/dT
///   J_Q,mu = (T/2)   dQbar/dmu      J_Q,T = (T^2/2) dQbar/dT
/// The heat derivatives act on the occupation only, with the mu in
/// Qbar = Ebar - mu Nbar held at the reference value, which is what the
/// first-order expansion of the heat transferred into A produces.
inline OnsagerBlock onsager(double t, const ReservoirParams& res, double lambda, double g,
                            const QuadratureSpec& quad, Statistics stats) {
  validate(res);
  const auto ev = detail::evolution(t, lambda, g, quad);
  const double temp = res.temperature;
  const double mu = res.chemical_potential;
  OnsagerBlock block{0.0, 0.0, 0.0, 0.0, {temp, mu, lambda, g, t}, {}};
  if (ev.oscillates && ev.damping == 1.0 && ev.phase_rate == 0.0) return block;
  const auto breaks = detail::thermal_breaks(res, stats);

  const BandValue dn_dmu = detail::band_integral(ev, quad, breaks, [&](double k) {
    return detail::kernel(-2.0 * std::cos(k), res, stats).dn_dmu;
  });
  const BandValue dn_dt = detail::band_integral(ev, quad, breaks, [&](double k) {
    return detail::kernel(-2.0 * std::cos(k), res, stats).dn_dt;
  });
  const BandValue dq_dmu = detail::band_integral(ev, quad, breaks, [&](double k) {
    const double eps = -2.0 * std::cos(k);
    return (eps - mu) * detail::kernel(eps, res, stats).dn_dmu;
  });
  const BandValue dq_dt = detail::band_integral(ev, quad, breaks, [&](double k) {
    const double eps = -2.0 * std::cos(k);
    return (eps - mu) * detail::kernel(eps, res, stats).dn_dt;
  });
  block.j_n_mu = 0.5 * temp * dn_dmu.value;
  block.j_n_t = 0.5 * temp * temp * dn_dt.value;
  block.j_q_mu = 0.5 * temp * dq_dmu.value;
  block.j_q_t = 0.5 * temp * temp * dq_dt.value;
  block.errors = {0.5 * temp * dn_dmu.error, 0.5 * temp * temp * dn_dt.error,
                  0.5 * temp * dq_dmu.error, 0.5 * temp * temp * dq_dt.error};
  return block;
}

/// Linear-response fluxes for affinities (dmu/T, dT/T^2).
inline FluxPair fluxes(const OnsagerBlock& block, double delta_mu, double delta_t) {
  const double temp = block.evaluated_at.temperature;
  const double f_mu = delta_mu / temp;
  const double f_t = delta_t / (temp * temp);
  return {block.j_n_mu * f_mu + block.j_n_t * f_t, block.j_q_mu * f_mu + block.j_q_t * f_t};
}

}  // namespace dephase
