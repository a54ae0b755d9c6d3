#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dephase/mode_dynamics.hpp"

using namespace dephase;

namespace {

ModeSpec mode_with(double gk, double lambda, double eps = 0.3) { return {1.0, eps, gk, lambda, gk}; }

// exp(-iHt) rho exp(iHt) from the spectral decomposition of H.
Matrix4c unitary_evolve(const ModeSpec& m, const Matrix4c& rho, double t) {
  const Eigen::SelfAdjointEigenSolver<Matrix4c> es(lindblad::hamiltonian(m));
  Eigen::Matrix<Complex, 4, 1> phases;
  for (int i = 0; i < 4; ++i) phases(i) = std::exp(Complex(0.0, -es.eigenvalues()(i) * t));
  const Matrix4c u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return u * rho * u.adjoint();
}

Matrix4c product_state(double na, double nb) {
  Matrix4c r = Matrix4c::Zero();
  r(0, 0) = (1 - na) * (1 - nb);
  r(1, 1) = na * (1 - nb);
  r(2, 2) = (1 - na) * nb;
  r(3, 3) = na * nb;
  return r;
}

}  // namespace

TEST(ModeObservables, Examples) {
  const ModeSpec m = mode_with(1.0, 0.0);
  EXPECT_DOUBLE_EQ(occ_a(m, 1.0, 0.0, 0.0), 1.0);
  EXPECT_NEAR(occ_a(m, 1.0, 0.0, std::numbers::pi / 4), 0.5, 1e-15);
  EXPECT_NEAR(occ_b(m, 1.0, 0.0, std::numbers::pi / 2), 1.0, 1e-15);
  EXPECT_NEAR(coherence_ab(m, 1.0, 0.0, std::numbers::pi / 4).imag(), 0.5, 1e-15);
  EXPECT_EQ(coherence_ab(m, 1.0, 0.0, 0.7).real(), 0.0);
  const ModeSpec damped = mode_with(1.0, 0.5);
  EXPECT_NEAR(occ_a(damped, 0.8, 0.2, 2.0), 0.5 + 0.3 * std::exp(-1.0) * std::cos(4.0), 1e-15);
}

TEST(ModeObservables, RejectsBadArguments) {
  const ModeSpec m = mode_with(1.0, 0.1);
  EXPECT_THROW(occ_a(m, 1.2, 0.0, 1.0), DomainError);
  EXPECT_THROW(occ_b(m, 0.5, -0.1, 1.0), DomainError);
  EXPECT_THROW(coherence_ab(m, 0.5, 0.5, -1.0), DomainError);
}

TEST(ModeObservables, ConservationAndEnvelopeProperty) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> occ(0.0, 1.0), g(-2.0, 2.0), lam(0.0, 1.0), time(0.0, 50.0);
  for (int i = 0; i < 20000; ++i) {
    const ModeSpec m = mode_with(g(rng), lam(rng));
    const double na = occ(rng), nb = occ(rng), t = time(rng);
    const double a = occ_a(m, na, nb, t), b = occ_b(m, na, nb, t);
    EXPECT_NEAR(a + b, na + nb, 1e-15);
    const double env = 0.5 * std::abs(na - nb) * std::exp(-m.dephasing * t);
    EXPECT_LE(std::abs(a - 0.5 * (na + nb)), env + 1e-15);
    EXPECT_LE(std::abs(coherence_ab(m, na, nb, t)), env + 1e-15);
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
  }
}

TEST(DensityMatrix, ProductStateAtTimeZero) {
  const ModeSpec m = mode_with(0.8, 0.2);
  const auto rho = density_matrix_from_occupations(m, 0.7, 0.25, 0.0);
  EXPECT_LT((rho.matrix() - product_state(0.7, 0.25)).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(DensityMatrix, FixedCorners) {
  const ModeSpec m = mode_with(1.3, 0.4);
  for (double t : {0.0, 0.9, 12.0}) {
    const auto full = density_matrix_from_occupations(m, 1.0, 1.0, t);
    Matrix4c expect = Matrix4c::Zero();
    expect(3, 3) = 1.0;
    EXPECT_EQ((full.matrix() - expect).cwiseAbs().maxCoeff(), 0.0);
    const auto empty = density_matrix_from_occupations(m, 0.0, 0.0, t);
    expect = Matrix4c::Zero();
    expect(0, 0) = 1.0;
    EXPECT_EQ((empty.matrix() - expect).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(DensityMatrix, ValidStateAtReferencePoint) {
  const ModeSpec m = make_mode(1.2, 1.0 / std::pow(std::sin(1.2), 2), 0.1);
  ASSERT_NEAR(m.coupling, 1.0, 1e-15);
  const ReservoirParams ra{0.5, 0.3}, rb{0.5, -0.3};
  const auto rho = density_matrix(m, ra, rb, 2.3);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-15);
  EXPECT_EQ(rho.trace().imag(), 0.0);
  EXPECT_LT(rho.hermiticity_defect(), 1e-16);
  for (int i = 0; i < 4; ++i) EXPECT_GE(rho.eigenvalues()(i), -1e-15);
  EXPECT_LE(rho.purity(), 1.0 + 1e-15);
}

TEST(DensityMatrix, PartialTraceMatchesReducedDensity) {
  const ModeSpec m = make_mode(0.9, 1.0, 0.1);
  const ReservoirParams ra{0.5, 0.3}, rb{0.4, -0.2};
  for (double t : {0.0, 0.4, 2.3, 9.0}) {
    const auto rho = density_matrix(m, ra, rb, t);
    for (Half h : {Half::a, Half::b}) {
      const Matrix2c traced = rho.reduced(h);
      const Eigen::Matrix2d direct = reduced_density(h, m, ra, rb, t);
      EXPECT_LT((traced - direct.cast<Complex>()).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(DensityMatrix, HalfBIsHalfAWithOccupationsSwapped) {
  const ModeSpec m = mode_with(0.6, 0.15);
  for (double t : {0.0, 1.1, 4.5}) {
    const auto b = reduced_density_from_occupations(Half::b, m, 0.9, 0.2, t);
    const auto a_swapped = reduced_density_from_occupations(Half::a, m, 0.2, 0.9, t);
    EXPECT_LT((b - a_swapped).cwiseAbs().maxCoeff(), 1e-16);
  }
}

TEST(DensityMatrix, PositiveAcrossRandomParametersProperty) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> occ(0.0, 1.0), g(0.0, 2.0), lam(0.0, 1.0), time(0.0, 30.0);
  for (int i = 0; i < 2000; ++i) {
    const auto rho = density_matrix_from_occupations(mode_with(g(rng), lam(rng)), occ(rng), occ(rng), time(rng));
    EXPECT_GE(rho.eigenvalues().minCoeff(), -1e-14);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
  }
}

TEST(DensityMatrix, PurityNonIncreasingUnderDephasing) {
  const ModeSpec m = mode_with(1.0, 0.3);
  double prev = density_matrix_from_occupations(m, 0.9, 0.1, 0.0).purity();
  for (int i = 1; i <= 400; ++i) {
    const double p = density_matrix_from_occupations(m, 0.9, 0.1, 0.05 * i).purity();
    EXPECT_LE(p, prev + 1e-15);
    prev = p;
  }
}

TEST(Lindblad, ClosedEvolutionMatchesExactUnitary) {
  const ModeSpec m = mode_with(0.8, 0.0, -0.7);
  for (double t : {0.5, 3.0, 7.25}) {
    const auto oracle = lindblad_oracle_from_occupations(m, 0.85, 0.3, t, 1e-3);
    const Matrix4c exact = unitary_evolve(m, product_state(0.85, 0.3), t);
    EXPECT_LT((oracle.matrix() - exact).cwiseAbs().maxCoeff(), 1e-10);
    const auto closed = density_matrix_from_occupations(m, 0.85, 0.3, t);
    EXPECT_LT((closed.matrix() - exact).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Lindblad, MatchesClosedFormWithDephasing) {
  const ModeSpec m = mode_with(1.0, 0.3);
  const auto oracle = lindblad_oracle_from_occupations(m, 0.9, 0.2, 5.0, 1e-4);
  const auto closed = density_matrix_from_occupations(m, 0.9, 0.2, 5.0);
  EXPECT_LT(oracle.max_abs_deviation(closed), 1e-8);
}

TEST(Lindblad, TrajectoryAgreesWithPointwiseOracle) {
  const ModeSpec m = make_mode(1.4, 1.2, 0.25);
  const ReservoirParams ra{0.3, 0.5}, rb{0.2, -0.4};
  const double na = occupation_fd(m.energy, ra), nb = occupation_fd(m.energy, rb);
  const std::vector<double> times = {0.0, 0.5, 0.5, 2.0, 6.0};
  const auto traj = lindblad_trajectory(m, na, nb, times, 1e-3);
  ASSERT_EQ(traj.size(), times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_LT(traj[i].max_abs_deviation(density_matrix(m, ra, rb, times[i])), 1e-9) << times[i];
  }
  EXPECT_THROW(lindblad_trajectory(m, na, nb, {1.0, 0.5}, 1e-3), DomainError);
}

TEST(Lindblad, StepSizeChecked) {
  const ModeSpec m = mode_with(1.0, 0.3);
  EXPECT_THROW(lindblad_oracle_from_occupations(m, 0.5, 0.5, 1.0, 0.0), StepSizeError);
  EXPECT_THROW(lindblad_oracle_from_occupations(m, 0.5, 0.5, 1.0, 10.0), StepSizeError);
}
