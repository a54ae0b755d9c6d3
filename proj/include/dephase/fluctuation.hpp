#pragma once

// Particle exchange between the halves for a single mode and the
// energy-and-matter fluctuation theorem it satisfies.

#include <cmath>
#include <span>
#include <string>

#include "dephase/error.hpp"
#include "dephase/lattice.hpp"

namespace dephase {

enum class Direction { a_to_b, b_to_a };

inline Direction reversed(Direction d) {
  return d == Direction::a_to_b ? Direction::b_to_a : Direction::a_to_b;
}

struct ExchangeProbability {
  double value;
  // The factor (1 - e^{-lambda t} cos 2 g_k t) exceeds 1 (possible when the
  // coherent oscillation overshoots); value is then a transition weight
  // rather than a probability bounded by n (1 - n).
  bool transition_weight;
};

namespace detail {

inline double exchange_factor(const ModeSpec& mode, double t) {
  if (!(t >= 0.0) || std::isinf(t)) throw DomainError("time must be finite and >= 0");
  const double damping = mode.dephasing == 0.0 ? 1.0 : std::exp(-mode.dephasing * t);
  return 1.0 - damping * std::cos(2.0 * mode.coupling * t);
}

}  // namespace detail

/// P_{A->B} = n_A (1 - n_B) (1 - e^{-lambda t} cos 2 g_k t); B->A swaps the roles.
inline ExchangeProbability exchange_prob(Direction dir, const ModeSpec& mode,
                                         const ReservoirParams& res_a, const ReservoirParams& res_b,
                                         double t) {
  const double factor = detail::exchange_factor(mode, t);
  const double n_a = occupation_fd(mode.energy, res_a);
  const double n_b = occupation_fd(mode.energy, res_b);
  const double occupied_empty = dir == Direction::a_to_b
                                    ? n_a * hole_fd(mode.energy, res_b)
                                    : n_b * hole_fd(mode.energy, res_a);
  return {occupied_empty * factor, factor > 1.0};
}

/// Two-point-measurement weight of the same exchange: start in the one-particle
/// state, measure the other one-particle state at t. Equals half the closed form
/// above, so the factor remains a probability in [0, 1].
inline double exchange_prob_tpm(Direction dir, const ModeSpec& mode, const ReservoirParams& res_a,
                                 const ReservoirParams& res_b, double t) {
  return 0.5 * exchange_prob(dir, mode, res_a, res_b, t).value;
}

struct Affinities {
  double f_h;  // beta_B - beta_A
  double f_m;  // beta_A mu_A - beta_B mu_B
};

inline Affinities affinities(const ReservoirParams& res_a, const ReservoirParams& res_b) {
  validate(res_a);
  validate(res_b);
  return {res_b.beta() - res_a.beta(),
          res_a.beta() * res_a.chemical_potential - res_b.beta() * res_b.chemical_potential};
}

// Orientation of the exponent. `algebraic` is what the exchange probabilities
// imply: ln[P_{A->B}/P_{B->A}] = eps_k F_H + F_M. `as_printed` uses
// Delta E_A F_H + Delta N_A F_M with Delta N_A = -1, Delta E_A = -eps_k for an
// A->B exchange, which is the negative of the former.
enum class FtConvention { algebraic, as_printed };

struct FtCheck {
  double lhs;
  double rhs;
  double residual;
};

// One particle of mode `mode` leaving (delta_n_a = -1) or entering (+1) A.
struct ExchangeEvent {
  ModeSpec mode;
  int delta_n_a;

  double delta_e_a() const { return delta_n_a * mode.energy; }
  Direction direction() const { return delta_n_a < 0 ? Direction::a_to_b : Direction::b_to_a; }
};

namespace detail {

inline double log_exchange(Direction dir, const ModeSpec& mode, const ReservoirParams& res_a,
                           const ReservoirParams& res_b, double log_factor) {
  const double eps = mode.energy;
  const double value = dir == Direction::a_to_b
                           ? log_occupation_fd(eps, res_a) + log_hole_fd(eps, res_b) + log_factor
                           : log_occupation_fd(eps, res_b) + log_hole_fd(eps, res_a) + log_factor;
  if (!std::isfinite(value)) {
    throw ZeroProbabilityError(std::string(dir == Direction::a_to_b ? "A->B" : "B->A") +
                               " exchange has zero probability");
  }
  return value;
}

inline double log_factor(const ModeSpec& mode, double t) {
  const double factor = exchange_factor(mode, t);
  if (!(factor > 0.0)) {
    throw ZeroProbabilityError("exchange factor vanishes at t = " + std::to_string(t) +
                               "; both directions have zero weight");
  }
  return std::log(factor);
}

inline double affinity_exponent(const ExchangeEvent& ev, const Affinities& f, FtConvention conv) {
  const double printed = ev.delta_e_a() * f.f_h + ev.delta_n_a * f.f_m;
  return conv == FtConvention::as_printed ? printed : -printed;
}

}  // namespace detail

/// Log-ratio of forward (A->B) to backward exchange for one mode, against
/// the affinity prediction. The time/dephasing factor is common to both
/// directions and cancels.
inline FtCheck ft_log_ratio(const ModeSpec& mode, const ReservoirParams& res_a,
                            const ReservoirParams& res_b, double t,
                            FtConvention conv = FtConvention::algebraic) {
  const double lf = detail::log_factor(mode, t);
  const double lhs = detail::log_exchange(Direction::a_to_b, mode, res_a, res_b, lf) -
                     detail::log_exchange(Direction::b_to_a, mode, res_a, res_b, lf);
  const double rhs = detail::affinity_exponent({mode, -1}, affinities(res_a, res_b), conv);
  return {lhs, rhs, lhs - rhs};
}

/// Composite event, one exchange per listed mode, modes independent. An
/// empty list is the trivial event with ratio 1.
inline FtCheck multi_mode_ft(std::span<const ExchangeEvent> events, const ReservoirParams& res_a,
                             const ReservoirParams& res_b, double t,
                             FtConvention conv = FtConvention::algebraic) {
  const Affinities f = affinities(res_a, res_b);
  double lhs = 0.0;
  double rhs = 0.0;
  for (const ExchangeEvent& ev : events) {
    if (ev.delta_n_a != 1 && ev.delta_n_a != -1) throw DomainError("delta_n_a must be +-1");
    const double lf = detail::log_factor(ev.mode, t);
    lhs += detail::log_exchange(ev.direction(), ev.mode, res_a, res_b, lf) -
           detail::log_exchange(reversed(ev.direction()), ev.mode, res_a, res_b, lf);
    rhs += detail::affinity_exponent(ev, f, conv);
  }
  return {lhs, rhs, lhs - rhs};
}

}  // namespace dephase
