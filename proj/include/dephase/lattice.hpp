#pragma once

// Lattice-level building blocks: dispersion of each half-chain, the
// effective inter-chain coupling per momentum mode, and the equilibrium
// occupation statistics of the two reservoirs.
//
// Internally every quantity is expressed with the hopping amplitude,
// Boltzmann's constant and hbar set to one.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dephase/error.hpp"

namespace dephase {

struct UnitSystem {
  static constexpr double energy_scale_alpha = 1.0;
  static constexpr double k_boltzmann = 1.0;
  static constexpr double hbar = 1.0;
  // CODATA 2018, exact.
  static constexpr double k_boltzmann_ev_per_kelvin = 8.617333262e-5;
};

struct ReservoirParams {
  double temperature;
  double chemical_potential;

  double beta() const { return 1.0 / temperature; }
};

inline void validate(const ReservoirParams& res) {
  if (!(res.temperature > 0.0) || !std::isfinite(res.temperature)) {
    throw DomainError("reservoir temperature must be finite and > 0, got " +
                      std::to_string(res.temperature));
  }
  if (!std::isfinite(res.chemical_potential)) {
    throw DomainError("reservoir chemical potential must be finite");
  }
}

// Two halves prepared around a common (T, mu) with a small splitting.
struct BipartitePreparation {
  ReservoirParams base;
  double delta_t = 0.0;
  double delta_mu = 0.0;
  double linear_response_threshold = 0.05;

  ReservoirParams half_a() const {
    return {base.temperature + 0.5 * delta_t, base.chemical_potential + 0.5 * delta_mu};
  }
  ReservoirParams half_b() const {
    return {base.temperature - 0.5 * delta_t, base.chemical_potential - 0.5 * delta_mu};
  }

  // True when |dT/T| and |dmu/mu| are both within the threshold. A zero
  // mu with nonzero dmu counts as outside linear response.
  bool linear_response_valid() const {
    const double rel_t = std::abs(delta_t / base.temperature);
    double rel_mu = 0.0;
    if (delta_mu != 0.0) {
      rel_mu = base.chemical_potential == 0.0
                   ? std::numeric_limits<double>::infinity()
                   : std::abs(delta_mu / base.chemical_potential);
    }
    return rel_t <= linear_response_threshold && rel_mu <= linear_response_threshold;
  }
};

struct ModeSpec {
  double momentum;
  double energy;
  double coupling;
  double dephasing;
  double bare_coupling;
};

inline void check_momentum(double k) {
  if (!(k >= 0.0 && k <= std::numbers::pi)) {
    throw DomainError("momentum must lie in [0, pi], got " + std::to_string(k));
  }
}

/// Band energy of the open tight-binding half-chain, -2 cos(k).
inline double dispersion(double k) {
  check_momentum(k);
  return -2.0 * std::cos(k);
}

/// Magnitude of the RWA inter-chain coupling at momentum k, g sin^2(k).
///
/// At the allowed momenta k = j pi/(N+1) one has sin(Nk) = (-1)^(j+1) sin(k),
/// so g sin(Nk) sin(k) = +-g sin^2(k). Observables only see the coupling
/// through cos(2 g_k t) and sin^2(2 g_k t), so the sign is dropped.
inline double effective_coupling(double k, double g) {
  check_momentum(k);
  const double s = std::sin(k);
  return g * s * s;
}

/// Builds a mode from its momentum, the bare coupling and the dephasing rate.
inline ModeSpec make_mode(double k, double g, double dephasing) {
  if (!(dephasing >= 0.0)) throw DomainError("dephasing rate must be >= 0");
  return {k, dispersion(k), effective_coupling(k, g), dephasing, g};
}

namespace detail {

// log(1 + e^x) without overflow.
inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace detail

/// Fermi-Dirac occupation 1/(e^x + 1), x = (eps - mu)/T; never exponentiates
/// a large positive argument.
inline double occupation_fd(double eps, const ReservoirParams& res) {
  validate(res);
  const double x = (eps - res.chemical_potential) / res.temperature;
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

/// 1 - occupation_fd, computed without cancellation.
inline double hole_fd(double eps, const ReservoirParams& res) {
  return occupation_fd(-eps, {res.temperature, -res.chemical_potential});
}

/// log of the Fermi-Dirac occupation, finite for any finite argument.
inline double log_occupation_fd(double eps, const ReservoirParams& res) {
  validate(res);
  return -detail::softplus((eps - res.chemical_potential) / res.temperature);
}

inline double log_hole_fd(double eps, const ReservoirParams& res) {
  validate(res);
  return -detail::softplus(-(eps - res.chemical_potential) / res.temperature);
}

inline constexpr double kDefaultBoltzmannCap = 1e300;

/// Boltzmann occupation e^{-(eps - mu)/T}. Values above `cap` mean the
/// classical approximation has been pushed far outside its regime.
inline double occupation_boltzmann(double eps, const ReservoirParams& res,
                                   double cap = kDefaultBoltzmannCap) {
  validate(res);
  const double value = std::exp(-(eps - res.chemical_potential) / res.temperature);
  if (!(value <= cap)) {
    throw DomainError("Boltzmann occupation exceeds cap; invalid Boltzmann regime");
  }
  return value;
}

struct BoltzmannValidity {
  double mu_bound;
  bool satisfied;
  // m T ln(10) / 2 in internal energy units.
  double e_gap;
};

/// Upper bound on mu for which |n_FD - n_B| < 10^-m holds at every band
/// energy (the worst case being the band bottom eps = -2).
inline BoltzmannValidity boltzmann_validity(double m, const ReservoirParams& res) {
  validate(res);
  if (!(m > 0.0)) throw DomainError("accuracy exponent m must be > 0");
  const double e_gap = m * res.temperature * std::numbers::ln10 / 2.0;
  const double bound = -e_gap - 2.0 * UnitSystem::energy_scale_alpha;
  return {bound, res.chemical_potential < bound, e_gap};
}

/// The same gap expressed in eV for a temperature given in kelvin.
inline double e_gap_ev(double m, double temperature_kelvin) {
  if (!(m > 0.0) || !(temperature_kelvin > 0.0)) {
    throw DomainError("e_gap_ev needs m > 0 and T > 0");
  }
  return m * UnitSystem::k_boltzmann_ev_per_kelvin * temperature_kelvin * std::numbers::ln10 / 2.0;
}

}  // namespace dephase
