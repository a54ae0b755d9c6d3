#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dephase/info_thermo.hpp"

using namespace dephase;

namespace {

double binary_entropy(double p) { return -p * std::log(p) - (1 - p) * std::log(1 - p); }

}  // namespace

TEST(VonNeumann, Examples) {
  Eigen::Matrix2d pure = Eigen::Matrix2d::Zero();
  pure(0, 0) = 1.0;
  EXPECT_EQ(von_neumann(pure), 0.0);
  EXPECT_NEAR(von_neumann(Eigen::Matrix2d::Identity() / 2.0), std::numbers::ln2, 1e-15);
  EXPECT_NEAR(von_neumann(Matrix4c(Matrix4c::Identity() / 4.0)), 2 * std::numbers::ln2, 1e-15);
  // Product of two thermal qubits: entropies add.
  const ModeSpec m{1.0, 0.0, 1.0, 0.0, 1.0};
  const auto rho = density_matrix_from_occupations(m, 0.3, 0.8, 0.0);
  EXPECT_NEAR(von_neumann(rho.matrix()), binary_entropy(0.3) + binary_entropy(0.8), 1e-14);
}

TEST(VonNeumann, RejectsInvalidStates) {
  Eigen::Matrix2d bad;
  bad << 0.5, 0.1, 0.0, 0.5;
  EXPECT_THROW(von_neumann(bad), DomainError);
  EXPECT_THROW(von_neumann(Eigen::Matrix2d(Eigen::Matrix2d::Identity())), DomainError);
  Eigen::Matrix2d negative;
  negative << 1.2, 0.0, 0.0, -0.2;
  EXPECT_THROW(von_neumann(negative), DomainError);
  EXPECT_THROW(von_neumann(Eigen::Matrix3d(Eigen::Matrix3d::Identity() / 3.0)), DomainError);
}

TEST(EntropyCoeffs, Examples) {
  const auto b = entropy_coeffs({0.5, 0.1, 1.0, 0.2}, 0.0);
  EXPECT_NEAR(b.s0, std::numbers::ln2, 1e-15);
  EXPECT_NEAR(b.s1, 0.0, 1e-16);
  EXPECT_NEAR(b.s2, -0.5, 1e-15);
  const auto c = entropy_coeffs({0.1, 0.01, 1.0, 0.2}, 0.0);
  EXPECT_NEAR(c.s1, 0.5 * std::log(9.0), 1e-14);
  EXPECT_NEAR(c.s2, 1.0 / (8 * 0.1 * -0.9), 1e-14);
  // At a quarter period the cosine vanishes and only s0 is left.
  const auto q = entropy_coeffs({0.3, 0.05, 1.0, 0.0}, std::numbers::pi / 4);
  EXPECT_NEAR(q.s1, 0.0, 1e-16);
  EXPECT_NEAR(q.s2, 0.0, 1e-16);
}

TEST(EntropyCoeffs, ThirdOrderRemainderProperty) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> neq(0.1, 0.9), time(0.0, 10.0), lam(0.0, 0.5);
  for (int i = 0; i < 200; ++i) {
    const double n = neq(rng), t = time(rng), l = lam(rng);
    double prev = 0.0;
    for (double dn : {0.04, 0.02, 0.01}) {
      const EquilibriumModePrep prep{n, dn, 1.0, l};
      const auto exact = exact_entropies(prep, t);
      const auto b = entropy_coeffs(prep, t);
      const double err = std::max(std::abs(exact.s_a - b.s_a()), std::abs(exact.s_b - b.s_b()));
      // |S''' dn^3| with S''' bounded by the binary-entropy derivative at the edges.
      const double bound = dn * dn * dn / (3 * std::pow(std::min(n, 1 - n) - dn, 2));
      EXPECT_LE(err, bound) << n << " " << dn << " " << t;
      if (prev > 1e-14) {
        EXPECT_LT(err, prev / 6);
      }
      prev = err;
    }
  }
}

TEST(MutualInformation, Examples) {
  EXPECT_EQ(mutual_information_mode({0.5, 0.1, 1.0, 0.2}, 0.0), 0.0);
  EXPECT_NEAR(mutual_information_mode({0.5, 0.1, 1.0, 0.0}, std::numbers::pi / 4), 0.01, 1e-16);
  EXPECT_NEAR(mutual_information_mode({0.5, 0.1, 1.0, 0.2}, std::numbers::pi / 4),
              0.01 * std::exp(-0.1 * std::numbers::pi), 1e-16);
}

TEST(MutualInformation, AgreesWithExactEntropies) {
  const EquilibriumModePrep p{0.5, 0.1, 1.0, 0.2};
  const auto exact = exact_entropies(p, 0.7);
  EXPECT_NEAR(exact.mutual_information(), mutual_information_mode(p, 0.7), 1e-4);
  EXPECT_NEAR(exact.s_ab, total_entropy_mode(p, 0.7), 1e-4);
}

TEST(MutualInformation, NonNegativeAndSubadditiveProperty) {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> neq(0.05, 0.95), time(0.0, 20.0), lam(0.0, 1.0), g(0.0, 2.0);
  for (int i = 0; i < 2000; ++i) {
    const double n = neq(rng);
    const double dn = std::uniform_real_distribution<double>(0.0, 2 * std::min(n, 1 - n))(rng);
    const EquilibriumModePrep prep{n, dn, g(rng), lam(rng)};
    const double t = time(rng);
    EXPECT_GE(mutual_information_mode(prep, t), 0.0);
    EXPECT_GE(exact_entropies(prep, t).mutual_information(), -1e-12);
  }
}

TEST(EntropyProduction, Examples) {
  EXPECT_EQ(entropy_production_mode({0.5, 0.1, 1.0, 0.0}, 3.0), 0.0);
  EXPECT_NEAR(entropy_production_mode({0.5, 0.1, 1.0, 0.2}, 0.0), 0.5 * 0.2 * 0.01 / 0.25, 1e-16);
  EXPECT_NEAR(entropy_production_mode({0.5, 0.1, 1.0, 0.2}, 5.0), 0.004 * std::exp(-2.0), 1e-16);
}

TEST(EntropyProduction, IntegratesToInitialDeficit) {
  // int_0^inf Pi dt = dn^2 / (4 n (1 - n)), trapezoid on a dense grid.
  const EquilibriumModePrep prep{0.3, 0.08, 1.0, 0.4};
  const double h = 1e-3;
  long double sum = 0.5L * entropy_production_mode(prep, 0.0);
  for (int i = 1; i < 100000; ++i) sum += entropy_production_mode(prep, h * i);
  EXPECT_NEAR(static_cast<double>(sum * h), 0.08 * 0.08 / (4 * 0.3 * 0.7), 1e-8);
}

TEST(EntropyProduction, IsRateOfTotalEntropy) {
  const EquilibriumModePrep prep{0.4, 0.1, 0.9, 0.3};
  for (double t : {0.1, 1.3, 4.0}) {
    const double h = 1e-4;
    const double d = (total_entropy_mode(prep, t + h) - total_entropy_mode(prep, t - h)) / (2 * h);
    EXPECT_NEAR(d, entropy_production_mode(prep, t), 1e-7);
  }
  const EquilibriumModePrep closed{0.4, 0.1, 0.9, 0.0};
  for (double t : {0.0, 2.0, 17.0}) EXPECT_NEAR(total_entropy_mode(closed, t), total_entropy_mode(closed, 0.0), 1e-15);
}

TEST(EntropyProduction, BalanceIdentityProperty) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> neq(0.05, 0.95), time(0.0, 20.0), lam(0.0, 1.0), g(0.0, 2.0);
  for (int i = 0; i < 5000; ++i) {
    const double n = neq(rng);
    const EquilibriumModePrep prep{n, 0.5 * std::min(n, 1 - n), g(rng), lam(rng)};
    const double t = time(rng);
    const double pi = entropy_production_mode(prep, t);
    EXPECT_GE(pi, 0.0);
    EXPECT_NEAR(pi, -mutual_information_rate(prep, t) + local_entropy_rate(prep, t), 1e-12);
  }
}

TEST(ExactEntropies, SecondLawAndClosedConstancy) {
  const EquilibriumModePrep open{0.35, 0.2, 1.0, 0.25};
  double prev = exact_entropies(open, 0.0).s_ab;
  for (int i = 1; i <= 200; ++i) {
    const double s = exact_entropies(open, 0.05 * i).s_ab;
    EXPECT_GE(s, prev - 1e-14);
    prev = s;
  }
  const EquilibriumModePrep closed{0.35, 0.2, 1.0, 0.0};
  const double s0 = exact_entropies(closed, 0.0).s_ab;
  for (double t : {0.3, 2.0, 11.0}) EXPECT_NEAR(exact_entropies(closed, t).s_ab, s0, 1e-13);
}

TEST(EquilibriumModePrep, Validation) {
  EXPECT_THROW(entropy_coeffs({0.0, 0.0, 1.0, 0.1}, 1.0), DomainError);
  EXPECT_THROW(entropy_coeffs({1.0, 0.0, 1.0, 0.1}, 1.0), DomainError);
  EXPECT_THROW(mutual_information_mode({0.1, 0.3, 1.0, 0.1}, 1.0), DomainError);
  EXPECT_THROW(entropy_production_mode({0.5, 0.1, 1.0, -0.1}, 1.0), DomainError);
}
