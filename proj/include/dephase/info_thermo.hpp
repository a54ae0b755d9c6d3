#pragma once

// Entropies of a single momentum mode prepared around an equilibrium
// occupation n with imbalance dn (n_A = n + dn/2, n_B = n - dn/2), both
// exactly (eigen-decomposition of the mode state) and to second order in dn.

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "dephase/error.hpp"
#include "dephase/lattice.hpp"
#include "dephase/mode_dynamics.hpp"

namespace dephase {

inline constexpr double kDensityTolerance = 1e-12;

/// -sum p ln p over the eigenvalues of a Hermitian, unit-trace, PSD matrix.
template <class Derived>
double von_neumann(const Eigen::MatrixBase<Derived>& rho) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  const Mat m = rho;
  if (m.rows() != m.cols() || (m.rows() != 2 && m.rows() != 4)) {
    throw DomainError("von_neumann expects a 2x2 or 4x4 density matrix");
  }
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kDensityTolerance) {
    throw DomainError("density matrix is not Hermitian");
  }
  if (std::abs(m.trace() - Scalar(1)) > 1e-10) throw DomainError("density matrix trace != 1");
  const Mat h = (m + m.adjoint()) / 2.0;
  const auto evals = Eigen::SelfAdjointEigenSolver<Mat>(h, Eigen::EigenvaluesOnly).eigenvalues();
  double s = 0.0;
  for (int i = 0; i < evals.size(); ++i) {
    const double p = evals(i);
    if (p < -kDensityTolerance) {
      throw DomainError("density matrix has eigenvalue " + std::to_string(p) + " < 0");
    }
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

struct EquilibriumModePrep {
  double n_eq;
  double delta_n;
  double coupling;   // g_k
  double dephasing;  // lambda

  double n_a() const { return n_eq + 0.5 * delta_n; }
  double n_b() const { return n_eq - 0.5 * delta_n; }
  ModeSpec mode() const { return {0.0, 0.0, coupling, dephasing, coupling}; }
};

inline void validate(const EquilibriumModePrep& prep) {
  if (!(prep.n_eq > 0.0 && prep.n_eq < 1.0)) {
    throw DomainError("n_eq must lie strictly inside (0, 1)");
  }
  if (!(prep.n_a() >= 0.0 && prep.n_a() <= 1.0 && prep.n_b() >= 0.0 && prep.n_b() <= 1.0)) {
    throw DomainError("n_eq +- delta_n/2 must lie in [0, 1]");
  }
  if (!(prep.dephasing >= 0.0)) throw DomainError("dephasing rate must be >= 0");
}

struct ModeEntropyBreakdown {
  double s0;
  double s1;
  double s2;
  double delta_n;

  double s_a() const { return s0 + s1 * delta_n + s2 * delta_n * delta_n; }
  double s_b() const { return s0 - s1 * delta_n + s2 * delta_n * delta_n; }
};

namespace detail {

inline double envelope_cos(const EquilibriumModePrep& p, double t) {
  return std::exp(-p.dephasing * t) * std::cos(2.0 * p.coupling * t);
}

inline double curvature(const EquilibriumModePrep& p) { return 1.0 / (4.0 * p.n_eq * (1.0 - p.n_eq)); }

}  // namespace detail

/// Coefficients of the second-order expansion of S_A, S_B in dn.
inline ModeEntropyBreakdown entropy_coeffs(const EquilibriumModePrep& prep, double t) {
  validate(prep);
  const double n = prep.n_eq;
  const double c = detail::envelope_cos(prep, t);
  const double s0 = -(1.0 - n) * std::log(1.0 - n) - n * std::log(n);
  const double s1 = 0.5 * c * (std::log(1.0 - n) - std::log(n));
  const double s2 = c * c / (8.0 * (n - 1.0) * n);
  return {s0, s1, s2, prep.delta_n};
}

/// I_k(t) = e^{-2 lambda t} sin^2(2 g_k t) dn^2 / (4 n (1 - n)).
inline double mutual_information_mode(const EquilibriumModePrep& prep, double t) {
  validate(prep);
  const double s = std::sin(2.0 * prep.coupling * t);
  return std::exp(-2.0 * prep.dephasing * t) * s * s * prep.delta_n * prep.delta_n *
         detail::curvature(prep);
}

/// Pi_k(t) = (1/2) lambda e^{-2 lambda t} dn^2 / ((1 - n) n).
inline double entropy_production_mode(const EquilibriumModePrep& prep, double t) {
  validate(prep);
  if (prep.dephasing == 0.0 || prep.delta_n == 0.0) return 0.0;
  return 0.5 * prep.dephasing * std::exp(-2.0 * prep.dephasing * t) * prep.delta_n * prep.delta_n /
         ((1.0 - prep.n_eq) * prep.n_eq);
}

/// S_AB = S_A + S_B - I in the expansion: 2 s0 - e^{-2 lambda t} dn^2 / (4 n (1 - n)).
inline double total_entropy_mode(const EquilibriumModePrep& prep, double t) {
  const ModeEntropyBreakdown b = entropy_coeffs(prep, t);
  return b.s_a() + b.s_b() - mutual_information_mode(prep, t);
}

/// dI/dt of the closed-form mutual information.
inline double mutual_information_rate(const EquilibriumModePrep& prep, double t) {
  validate(prep);
  const double phase = 2.0 * prep.coupling * t;
  const double s = std::sin(phase);
  const double c = std::cos(phase);
  return prep.delta_n * prep.delta_n * detail::curvature(prep) * std::exp(-2.0 * prep.dephasing * t) *
         (-2.0 * prep.dephasing * s * s + 4.0 * prep.coupling * s * c);
}

/// d(S_A + S_B)/dt of the expansion; the odd terms cancel.
inline double local_entropy_rate(const EquilibriumModePrep& prep, double t) {
  validate(prep);
  const double phase = 2.0 * prep.coupling * t;
  const double e = std::exp(-prep.dephasing * t);
  const double c = e * std::cos(phase);
  const double dc = -prep.dephasing * c - 2.0 * prep.coupling * e * std::sin(phase);
  // 2 s2 dn^2 with s2 = c^2 / (8 (n - 1) n)
  return -prep.delta_n * prep.delta_n * detail::curvature(prep) * 2.0 * c * dc;
}

struct ExactModeEntropies {
  double s_a;
  double s_b;
  double s_ab;

  double mutual_information() const { return s_a + s_b - s_ab; }
};

/// Entropies from the eigenvalues of the mode state and its reductions.
inline ExactModeEntropies exact_entropies(const EquilibriumModePrep& prep, double t) {
  validate(prep);
  const ModeSpec mode = prep.mode();
  const FourLevelDensityMatrix rho = density_matrix_from_occupations(mode, prep.n_a(), prep.n_b(), t);
  return {von_neumann(rho.reduced(Half::a)), von_neumann(rho.reduced(Half::b)),
          von_neumann(rho.matrix())};
}

}  // namespace dephase
