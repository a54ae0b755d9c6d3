#pragma once

// Per-mode evolution of the two-site occupation state under the RWA
// Hamiltonian plus energy-conserving dephasing.
//
// Ordered Fock basis: {|0>, a^dag|0>, b^dag|0>, a^dag b^dag|0>}, i.e. the
// index of a basis state is n_a + 2 n_b.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dephase/error.hpp"
#include "dephase/lattice.hpp"

namespace dephase {

using Complex = std::complex<double>;
using Matrix4c = Eigen::Matrix<Complex, 4, 4>;
using Matrix2c = Eigen::Matrix<Complex, 2, 2>;

enum class Half { a, b };

struct ModeObservables {
  double occ_a;
  double occ_b;
  Complex coherence_ab;
};

namespace detail {

inline void check_occupations(double n_a, double n_b) {
  if (!(n_a >= 0.0 && n_a <= 1.0 && n_b >= 0.0 && n_b <= 1.0)) {
    throw DomainError("occupations must lie in [0, 1]");
  }
}

inline void check_time(double t) {
  if (!(t >= 0.0) || std::isinf(t)) throw DomainError("time must be finite and >= 0");
}

// e^{-lambda t} with 0 * inf guarded for lambda = 0.
inline double envelope(double lambda, double t) { return lambda == 0.0 ? 1.0 : std::exp(-lambda * t); }

}  // namespace detail

/// <a^dag a>_t for initial occupations n_a, n_b.
inline double occ_a(const ModeSpec& mode, double n_a, double n_b, double t) {
  detail::check_occupations(n_a, n_b);
  detail::check_time(t);
  return 0.5 * (n_a + n_b) +
         0.5 * (n_a - n_b) * detail::envelope(mode.dephasing, t) * std::cos(2.0 * mode.coupling * t);
}

/// <b^dag b>_t; mirror of occ_a.
inline double occ_b(const ModeSpec& mode, double n_a, double n_b, double t) {
  detail::check_occupations(n_a, n_b);
  detail::check_time(t);
  return 0.5 * (n_a + n_b) -
         0.5 * (n_a - n_b) * detail::envelope(mode.dephasing, t) * std::cos(2.0 * mode.coupling * t);
}

/// <a^dag b>_t, purely imaginary.
inline Complex coherence_ab(const ModeSpec& mode, double n_a, double n_b, double t) {
  detail::check_occupations(n_a, n_b);
  detail::check_time(t);
  return {0.0, 0.5 * (n_a - n_b) * detail::envelope(mode.dephasing, t) *
                   std::sin(2.0 * mode.coupling * t)};
}

inline ModeObservables observables(const ModeSpec& mode, double n_a, double n_b, double t) {
  return {occ_a(mode, n_a, n_b, t), occ_b(mode, n_a, n_b, t), coherence_ab(mode, n_a, n_b, t)};
}

class FourLevelDensityMatrix {
 public:
  FourLevelDensityMatrix() : m_(Matrix4c::Zero()) {}
  explicit FourLevelDensityMatrix(const Matrix4c& m) : m_(m) {}

  const Matrix4c& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  Complex trace() const { return m_.trace(); }

  double hermiticity_defect() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }

  Eigen::Vector4d eigenvalues() const {
    const Matrix4c h = 0.5 * (m_ + m_.adjoint());
    return Eigen::SelfAdjointEigenSolver<Matrix4c>(h, Eigen::EigenvaluesOnly).eigenvalues();
  }

  double purity() const { return (m_ * m_).trace().real(); }

  // Partial trace onto one half; index n_a + 2 n_b.
  Matrix2c reduced(Half which) const {
    Matrix2c r = Matrix2c::Zero();
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        for (int other = 0; other < 2; ++other) {
          r(i, j) += which == Half::a ? m_(i + 2 * other, j + 2 * other)
                                      : m_(other + 2 * i, other + 2 * j);
        }
      }
    }
    return r;
  }

  double max_abs_deviation(const FourLevelDensityMatrix& other) const {
    return (m_ - other.m_).cwiseAbs().maxCoeff();
  }

 private:
  Matrix4c m_;
};

/// Assembles the mode state from explicit initial occupations.
inline FourLevelDensityMatrix density_matrix_from_occupations(const ModeSpec& mode, double n_a,
                                                              double n_b, double t) {
  const ModeObservables obs = observables(mode, n_a, n_b, t);
  const double both = n_a * n_b;
  Matrix4c m = Matrix4c::Zero();
  m(0, 0) = (1.0 - n_a) * (1.0 - n_b);
  m(1, 1) = obs.occ_a - both;
  m(2, 2) = obs.occ_b - both;
  m(3, 3) = both;
  m(2, 1) = obs.coherence_ab;             // <a^dag b>
  m(1, 2) = std::conj(obs.coherence_ab);  // <b^dag a>
  return FourLevelDensityMatrix(m);
}

/// Mode state at time t for halves prepared in equilibrium with resA / resB.
inline FourLevelDensityMatrix density_matrix(const ModeSpec& mode, const ReservoirParams& res_a,
                                             const ReservoirParams& res_b, double t) {
  return density_matrix_from_occupations(mode, occupation_fd(mode.energy, res_a),
                                         occupation_fd(mode.energy, res_b), t);
}

inline Eigen::Matrix2d reduced_density_from_occupations(Half which, const ModeSpec& mode,
                                                        double n_a, double n_b, double t) {
  const double occ = which == Half::a ? occ_a(mode, n_a, n_b, t) : occ_b(mode, n_a, n_b, t);
  Eigen::Matrix2d r = Eigen::Matrix2d::Zero();
  r(0, 0) = 1.0 - occ;
  r(1, 1) = occ;
  return r;
}

/// diag(1 - <n>, <n>) for the chosen half.
inline Eigen::Matrix2d reduced_density(Half which, const ModeSpec& mode,
                                       const ReservoirParams& res_a, const ReservoirParams& res_b,
                                       double t) {
  return reduced_density_from_occupations(which, mode, occupation_fd(mode.energy, res_a),
                                          occupation_fd(mode.energy, res_b), t);
}

// ---------------------------------------------------------------------------
// Numerical master-equation integration, independent of the closed forms.

namespace lindblad {

using Super = Eigen::Matrix<Complex, 16, 16>;
using Vec16 = Eigen::Matrix<Complex, 16, 1>;

// Annihilation operators with the Jordan-Wigner sign for b (a is ordered first).
inline Matrix4c annihilate_a() {
  Matrix4c op = Matrix4c::Zero();
  op(0, 1) = 1.0;  // |10> -> |00>
  op(2, 3) = 1.0;  // |11> -> |01>
  return op;
}

inline Matrix4c annihilate_b() {
  Matrix4c op = Matrix4c::Zero();
  op(0, 2) = 1.0;   // |01> -> |00>
  op(1, 3) = -1.0;  // a^dag b^dag|0> -> -a^dag|0>
  return op;
}

/// H_k = eps (n_a + n_b) - g_k (a^dag b + b^dag a).
///
/// The hopping sign follows the chain's -alpha (c^dag c + h.c.) convention;
/// with it the coherence is +(i/2)(n_a - n_b) e^{-lambda t} sin(2 g_k t).
inline Matrix4c hamiltonian(const ModeSpec& mode) {
  const Matrix4c a = annihilate_a();
  const Matrix4c b = annihilate_b();
  const Matrix4c hop = a.adjoint() * b + b.adjoint() * a;
  return mode.energy * (a.adjoint() * a + b.adjoint() * b) - mode.coupling * hop;
}

// Site-basis coordinates of the eta basis {|0>, eta_+^dag|0>, eta_-^dag|0>,
// eta_+^dag eta_-^dag|0>}, eta_s = (a + s b)/sqrt(2).
inline Matrix4c eta_rotation() {
  const double r = 1.0 / std::sqrt(2.0);
  Matrix4c rot = Matrix4c::Zero();
  rot(0, 0) = 1.0;
  rot(1, 1) = r;
  rot(2, 1) = r;
  rot(1, 2) = r;
  rot(2, 2) = -r;
  rot(3, 3) = -1.0;  // eta_+^dag eta_-^dag = -a^dag b^dag
  return rot;
}

/// Dephasing generators eta_s^dag eta_s, diagonal in the eta basis and
/// rotated to the site basis.
inline std::array<Matrix4c, 2> generators() {
  const Matrix4c rot = eta_rotation();
  Matrix4c plus = Matrix4c::Zero();
  plus(1, 1) = 1.0;
  plus(3, 3) = 1.0;
  Matrix4c minus = Matrix4c::Zero();
  minus(2, 2) = 1.0;
  minus(3, 3) = 1.0;
  return {rot * plus * rot.adjoint(), rot * minus * rot.adjoint()};
}

// Kronecker product for the column-major vec identity vec(A X B) = (B^T (x) A) vec(X).
inline Super kron(const Matrix4c& left, const Matrix4c& right) {
  Super out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = left(i, j) * right;
  }
  return out;
}

inline Super generator(const ModeSpec& mode) {
  const Matrix4c id = Matrix4c::Identity();
  const Matrix4c h = hamiltonian(mode);
  const Complex i(0.0, 1.0);
  Super l = -i * (kron(id, h) - kron(h.transpose(), id));
  for (const Matrix4c& op : generators()) {
    const Matrix4c ldl = op.adjoint() * op;
    l += mode.dephasing * (kron(op.conjugate(), op) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id));
  }
  return l;
}

inline Vec16 vec(const Matrix4c& m) {
  Vec16 v;
  for (int c = 0; c < 4; ++c) {
    for (int r = 0; r < 4; ++r) v(4 * c + r) = m(r, c);
  }
  return v;
}

inline Matrix4c unvec(const Vec16& v) {
  Matrix4c m;
  for (int c = 0; c < 4; ++c) {
    for (int r = 0; r < 4; ++r) m(r, c) = v(4 * c + r);
  }
  return m;
}

// Classical RK4 applied to a constant linear generator collapses to the
// degree-4 Taylor propagator of h L.
inline Super rk4_step(const Super& l, double h) {
  const Super hl = h * l;
  Super term = Super::Identity();
  Super step = Super::Identity();
  for (int k = 1; k <= 4; ++k) {
    term = term * hl / static_cast<double>(k);
    step += term;
  }
  return step;
}

// Largest step for which |h z| stays inside RK4's stability region for every
// eigenvalue z bounded by the induced infinity norm.
inline constexpr double kStabilityRadius = 2.5;

}  // namespace lindblad

/// Integrates the master equation from the product state diag(h_a h_b,
/// n_a h_b, h_a n_b, n_a n_b) with fixed RK4 steps no longer than dt_max.
inline FourLevelDensityMatrix lindblad_oracle_from_occupations(const ModeSpec& mode, double n_a,
                                                               double n_b, double t,
                                                               double dt_max) {
  detail::check_occupations(n_a, n_b);
  detail::check_time(t);
  if (!(dt_max > 0.0)) throw StepSizeError("dt_max must be > 0");
  const lindblad::Super l = lindblad::generator(mode);
  const double norm = l.cwiseAbs().rowwise().sum().maxCoeff();
  if (dt_max * norm > lindblad::kStabilityRadius) {
    throw StepSizeError("dt_max " + std::to_string(dt_max) +
                        " exceeds the RK4 stability limit for this mode");
  }
  Matrix4c rho0 = Matrix4c::Zero();
  rho0(0, 0) = (1.0 - n_a) * (1.0 - n_b);
  rho0(1, 1) = n_a * (1.0 - n_b);
  rho0(2, 2) = (1.0 - n_a) * n_b;
  rho0(3, 3) = n_a * n_b;
  if (t == 0.0) return FourLevelDensityMatrix(rho0);

  const auto steps = static_cast<long long>(std::ceil(t / dt_max));
  const lindblad::Super prop = lindblad::rk4_step(l, t / static_cast<double>(steps));
  lindblad::Vec16 v = lindblad::vec(rho0);
  for (long long s = 0; s < steps; ++s) v = prop * v;
  return FourLevelDensityMatrix(lindblad::unvec(v));
}

inline FourLevelDensityMatrix lindblad_oracle(const ModeSpec& mode, const ReservoirParams& res_a,
                                              const ReservoirParams& res_b, double t,
                                              double dt_max) {
  return lindblad_oracle_from_occupations(mode, occupation_fd(mode.energy, res_a),
                                          occupation_fd(mode.energy, res_b), t, dt_max);
}

/// Oracle states at every time in `times` (non-decreasing), integrating a
/// single trajectory segment by segment.
inline std::vector<FourLevelDensityMatrix> lindblad_trajectory(const ModeSpec& mode, double n_a,
                                                               double n_b,
                                                               const std::vector<double>& times,
                                                               double dt_max) {
  detail::check_occupations(n_a, n_b);
  if (!(dt_max > 0.0)) throw StepSizeError("dt_max must be > 0");
  const lindblad::Super l = lindblad::generator(mode);
  const double norm = l.cwiseAbs().rowwise().sum().maxCoeff();
  if (dt_max * norm > lindblad::kStabilityRadius) {
    throw StepSizeError("dt_max exceeds the RK4 stability limit for this mode");
  }
  lindblad::Vec16 v = lindblad::vec(lindblad_oracle_from_occupations(mode, n_a, n_b, 0.0, dt_max).matrix());
  std::vector<FourLevelDensityMatrix> out;
  out.reserve(times.size());
  double now = 0.0;
  for (double target : times) {
    detail::check_time(target);
    if (target < now) throw DomainError("lindblad_trajectory needs non-decreasing times");
    if (target > now) {
      const auto steps = static_cast<long long>(std::ceil((target - now) / dt_max));
      const lindblad::Super prop = lindblad::rk4_step(l, (target - now) / static_cast<double>(steps));
      for (long long s = 0; s < steps; ++s) v = prop * v;
      now = target;
    }
    out.emplace_back(lindblad::unvec(v));
  }
  return out;
}

}  // namespace dephase
