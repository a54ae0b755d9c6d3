#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "dephase/quadrature.hpp"

using namespace dephase;

namespace {

// Composite trapezoid on [0, pi]; spectrally accurate for smooth pi-periodic f.
template <class F>
long double trapezoid(F f, long nodes) {
  const long double h = std::numbers::pi_v<long double> / nodes;
  long double sum = 0.5L * (f(0.0L) + f(std::numbers::pi_v<long double>));
  for (long i = 1; i < nodes; ++i) sum += f(h * i);
  return sum * h;
}

}  // namespace

TEST(GaussLegendre, ExactForPolynomialsUpToDegree2nMinus1) {
  for (std::size_t n : {1u, 2u, 5u, 8u, 16u, 33u}) {
    const GaussLegendre<double> rule(n);
    for (std::size_t d = 0; d <= 2 * n - 1; ++d) {
      auto f = [d](double x) { return std::pow(x, static_cast<double>(d)); };
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1.0);
      EXPECT_NEAR(rule.apply(f, -1.0, 1.0), exact, 1e-14) << "n=" << n << " d=" << d;
    }
  }
  EXPECT_THROW(GaussLegendre<double>(0), DomainError);
}

TEST(IntegrateBand, Constant) {
  const auto r = integrate_band([](double) { return 1.0; }, QuadratureSpec{});
  EXPECT_NEAR(r.value, std::numbers::pi, 1e-15);
}

TEST(IntegrateBand, CosineVanishes) {
  const auto r = integrate_band([](double k) { return std::cos(k); }, QuadratureSpec{});
  EXPECT_NEAR(r.value, 0.0, 1e-14);
}

TEST(IntegrateBand, OscillatoryFactorAgainstDenseGrid) {
  const double t = 50.0;
  const QuadratureSpec spec;
  const auto r = integrate_band([t](double k) { return std::cos(2 * t * std::sin(k) * std::sin(k)); }, spec,
                                oscillation_panels(spec, 1.0, t));
  const long double ref = trapezoid([t](long double k) { return std::cos(2 * t * std::sin(k) * std::sin(k)); }, 1000000);
  EXPECT_NEAR(r.value, static_cast<double>(ref), 1e-10);
  // cos(2 t sin^2 k) = cos(t - t cos 2k): the band integral is pi cos(t) J_0(t).
  EXPECT_NEAR(r.value, std::numbers::pi * std::cos(t) * std::cyl_bessel_j(0.0, t), 1e-10);
}

TEST(Integrate, ReportsErrorBelowTolerance) {
  QuadratureSpec spec;
  spec.abs_tol = 1e-12;
  spec.rel_tol = 0.0;
  const auto r = integrate<double>([](double x) { return std::exp(x) * std::sin(3 * x); }, -1.0, 3.0, spec);
  auto anti = [](double x) { return std::exp(x) * (std::sin(3 * x) - 3 * std::cos(3 * x)) / 10; };
  EXPECT_LE(r.error, spec.abs_tol);
  EXPECT_NEAR(r.value, anti(3.0) - anti(-1.0), 1e-12);
}

TEST(Integrate, BudgetExhaustionCarriesAchievedError) {
  QuadratureSpec spec;
  spec.max_panels = 12;
  spec.abs_tol = 1e-15;
  spec.rel_tol = 0.0;
  try {
    integrate<double>([](double x) { return std::sqrt(std::abs(x - 0.3137)); }, 0.0, 1.0, spec);
    FAIL() << "expected QuadratureError";
  } catch (const QuadratureError& e) {
    EXPECT_GT(e.achieved_error(), 1e-15);
    EXPECT_NEAR(e.value(), (2.0 / 3.0) * (std::pow(0.3137, 1.5) + std::pow(1 - 0.3137, 1.5)), 1e-3);
  }
}

TEST(Integrate, EmptyAndReversedIntervals) {
  EXPECT_EQ(integrate<double>([](double) { return 1.0; }, 1.0, 1.0, QuadratureSpec{}).value, 0.0);
  EXPECT_THROW(integrate<double>([](double) { return 1.0; }, 1.0, 0.0, QuadratureSpec{}), DomainError);
}

TEST(Integrate, BreakpointsResolveNarrowFeature) {
  // A logistic step of width 1e-4 that the initial panels would straddle.
  auto f = [](double k) { return 1.0 / (1.0 + std::exp((k - 1.234567) / 1e-4)); };
  const std::vector<double> breaks = {1.234567 - 0.01, 1.234567, 1.234567 + 0.01};
  const auto r = integrate_band(f, QuadratureSpec{}, 0, breaks);
  EXPECT_NEAR(r.value, 1.234567, 1e-11);
}

TEST(Integrate, DeterministicAcrossCalls) {
  auto f = [](double k) { return std::cos(30 * std::sin(k) * std::sin(k)) * std::exp(-k); };
  const auto a = integrate_band(f, QuadratureSpec{}, 40);
  const auto b = integrate_band(f, QuadratureSpec{}, 40);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.error, b.error);
  EXPECT_EQ(a.panels, b.panels);
}

TEST(Integrate, DoublingNodesStaysWithinErrorEstimate) {
  for (double t : {0.5, 5.0, 40.0}) {
    auto f = [t](double k) { return std::exp(std::cos(k)) * std::cos(2 * t * std::sin(k) * std::sin(k)); };
    QuadratureSpec coarse;
    QuadratureSpec fine = coarse;
    fine.nodes_per_panel *= 2;
    const auto a = integrate_band(f, coarse, oscillation_panels(coarse, 1.0, t));
    const auto b = integrate_band(f, fine, oscillation_panels(fine, 1.0, t));
    EXPECT_LE(std::abs(a.value - b.value), std::max(a.error, 1e-15)) << t;
  }
}

TEST(Integrate, LongDoubleInstantiation) {
  const auto r = integrate<long double>([](long double x) { return std::exp(x); }, 0.0L, 1.0L, QuadratureSpec{});
  EXPECT_NEAR(static_cast<double>(r.value - (std::exp(1.0L) - 1.0L)), 0.0, 1e-17);
}

TEST(OscillationPanels, AtLeastFourPerOscillationProperty) {
  QuadratureSpec spec;
  EXPECT_EQ(oscillation_panels(spec, 1.0, 0.0), spec.base_panels);
  for (double g : {0.1, 1.0, 3.0}) {
    for (double t : {0.5, 10.0, 100.0, 1000.0}) {
      const auto p = oscillation_panels(spec, g, t);
      EXPECT_GE(p, spec.base_panels);
      EXPECT_GE(static_cast<double>(p), std::ceil(4 * g * t));
      EXPECT_EQ(oscillation_panels(spec, -g, t), p);
    }
  }
}
