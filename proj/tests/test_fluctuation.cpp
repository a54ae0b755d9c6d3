#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dephase/fluctuation.hpp"
#include "dephase/mode_dynamics.hpp"

using namespace dephase;

TEST(ExchangeProb, Examples) {
  const ModeSpec m = make_mode(std::numbers::pi / 2, 1.0, 0.0);
  const ReservoirParams a{0.5, 0.2}, b{0.5, -0.2};
  const double na = occupation_fd(0.0, a), nb = occupation_fd(0.0, b);
  const auto p = exchange_prob(Direction::a_to_b, m, a, b, std::numbers::pi / 4);
  EXPECT_NEAR(p.value, na * (1 - nb), 1e-15);
  EXPECT_FALSE(p.transition_weight);
  const auto q = exchange_prob(Direction::b_to_a, m, a, b, std::numbers::pi / 2);
  EXPECT_NEAR(q.value, 2 * nb * (1 - na), 1e-15);
  EXPECT_TRUE(q.transition_weight);
  EXPECT_EQ(exchange_prob(Direction::a_to_b, m, a, b, 0.0).value, 0.0);
}

TEST(ExchangeProb, TwoPointMeasurementFromStateEvolution) {
  // Prepare |10>, evolve, and read the |01> population; weight by the
  // initial probability of |10>.
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> k(0.1, 3.0), temp(0.1, 1.0), mu(-1.0, 1.0), time(0.0, 6.0), lam(0.0, 0.5);
  for (int i = 0; i < 30; ++i) {
    const ModeSpec m = make_mode(k(rng), 1.0, lam(rng));
    const ReservoirParams a{temp(rng), mu(rng)}, b{temp(rng), mu(rng)};
    const double t = time(rng);
    const double na = occupation_fd(m.energy, a), nb = occupation_fd(m.energy, b);
    const auto from_10 = lindblad_oracle_from_occupations(m, 1.0, 0.0, t, 1e-3);
    const auto from_01 = lindblad_oracle_from_occupations(m, 0.0, 1.0, t, 1e-3);
    EXPECT_NEAR(exchange_prob_tpm(Direction::a_to_b, m, a, b, t), na * (1 - nb) * from_10(2, 2).real(), 1e-10);
    EXPECT_NEAR(exchange_prob_tpm(Direction::b_to_a, m, a, b, t), nb * (1 - na) * from_01(1, 1).real(), 1e-10);
    EXPECT_NEAR(exchange_prob(Direction::a_to_b, m, a, b, t).value,
                2 * exchange_prob_tpm(Direction::a_to_b, m, a, b, t), 1e-15);
  }
}

TEST(Affinities, Examples) {
  const auto f = affinities({0.5, 0.2}, {0.25, -0.1});
  EXPECT_NEAR(f.f_h, 4.0 - 2.0, 1e-15);
  EXPECT_NEAR(f.f_m, 2.0 * 0.2 - 4.0 * -0.1, 1e-15);
  const auto z = affinities({0.3, 0.7}, {0.3, 0.7});
  EXPECT_EQ(z.f_h, 0.0);
  EXPECT_EQ(z.f_m, 0.0);
  EXPECT_THROW(affinities({0.0, 0.0}, {0.3, 0.0}), DomainError);
}

TEST(FluctuationTheorem, EqualReservoirsGiveUnitRatio) {
  const ModeSpec m = make_mode(1.1, 1.0, 0.1);
  const auto c = ft_log_ratio(m, {0.4, 0.3}, {0.4, 0.3}, 1.5);
  EXPECT_NEAR(c.lhs, 0.0, 1e-15);
  EXPECT_EQ(c.rhs, 0.0);
}

TEST(FluctuationTheorem, HoldsOnParameterGridProperty) {
  const std::vector<double> ks = {0.2, 0.9, 1.6, 2.3, 3.0};
  const std::vector<double> temps = {0.1, 0.3, 0.6, 1.0, 2.0};
  const std::vector<double> mus = {-1.5, -0.5, 0.0, 0.7, 1.8};
  for (double k : ks) {
    for (double ta : temps) {
      for (double tb : temps) {
        for (double ma : mus) {
          for (double mb : mus) {
            for (double lam : {0.0, 0.3}) {
              const ModeSpec m = make_mode(k, 1.0, lam);
              const auto c = ft_log_ratio(m, {ta, ma}, {tb, mb}, 0.8);
              EXPECT_LE(std::abs(c.residual), 1e-12 * std::max(1.0, std::abs(c.rhs)));
            }
          }
        }
      }
    }
  }
}

TEST(FluctuationTheorem, RatioIndependentOfTime) {
  const ModeSpec m = make_mode(0.7, 1.3, 0.2);
  const ReservoirParams a{0.2, 0.5}, b{0.6, -0.4};
  const double ref = ft_log_ratio(m, a, b, 0.3).lhs;
  for (double t : {0.9, 2.5, 40.0}) EXPECT_NEAR(ft_log_ratio(m, a, b, t).lhs, ref, 1e-13);
}

TEST(FluctuationTheorem, AsPrintedIsNegation) {
  const ModeSpec m = make_mode(2.0, 1.0, 0.1);
  const ReservoirParams a{0.2, 0.5}, b{0.6, -0.4};
  const auto alg = ft_log_ratio(m, a, b, 1.0, FtConvention::algebraic);
  const auto pr = ft_log_ratio(m, a, b, 1.0, FtConvention::as_printed);
  EXPECT_EQ(alg.lhs, pr.lhs);
  EXPECT_EQ(pr.rhs, -alg.rhs);
  EXPECT_NEAR(alg.residual, 0.0, 1e-13);
  EXPECT_GT(std::abs(pr.residual), 1e-3);
}

TEST(FluctuationTheorem, SignFollowsGradients) {
  // Hotter, fuller A pushes particles toward B.
  const ModeSpec m = make_mode(1.0, 1.0, 0.1);
  EXPECT_GT(ft_log_ratio(m, {0.3, 0.8}, {0.3, -0.8}, 1.0).lhs, 0.0);
  EXPECT_LT(ft_log_ratio(m, {0.3, -0.8}, {0.3, 0.8}, 1.0).lhs, 0.0);
}

TEST(MultiModeFt, SingleEventMatchesSingleMode) {
  const ModeSpec m = make_mode(1.4, 1.0, 0.2);
  const ReservoirParams a{0.25, 0.3}, b{0.5, -0.2};
  const std::vector<ExchangeEvent> one = {{m, -1}};
  const auto multi = multi_mode_ft(one, a, b, 2.0);
  const auto single = ft_log_ratio(m, a, b, 2.0);
  EXPECT_NEAR(multi.lhs, single.lhs, 1e-15);
  EXPECT_NEAR(multi.rhs, single.rhs, 1e-15);
}

TEST(MultiModeFt, OppositeDirectionsAgainstBruteForce) {
  const ReservoirParams a{0.25, 0.3}, b{0.5, -0.2};
  const double t = 1.7;
  const std::vector<ExchangeEvent> events = {
      {make_mode(0.5, 1.0, 0.1), -1}, {make_mode(1.9, 1.0, 0.1), +1}, {make_mode(2.6, 1.0, 0.1), -1}};
  double forward = 1.0, backward = 1.0;
  for (const auto& ev : events) {
    forward *= exchange_prob(ev.direction(), ev.mode, a, b, t).value;
    backward *= exchange_prob(reversed(ev.direction()), ev.mode, a, b, t).value;
  }
  const auto c = multi_mode_ft(events, a, b, t);
  EXPECT_NEAR(c.lhs, std::log(forward / backward), 1e-12);
  EXPECT_NEAR(c.residual, 0.0, 1e-12);
}

TEST(MultiModeFt, EmptyEventIsTrivial) {
  const auto c = multi_mode_ft({}, {0.2, 0.0}, {0.4, 0.1}, 1.0);
  EXPECT_EQ(c.lhs, 0.0);
  EXPECT_EQ(c.rhs, 0.0);
  const std::vector<ExchangeEvent> bad = {{make_mode(1.0, 1.0, 0.1), 2}};
  EXPECT_THROW(multi_mode_ft(bad, {0.2, 0.0}, {0.4, 0.1}, 1.0), DomainError);
}

TEST(FluctuationTheorem, ZeroProbabilityReported) {
  const ModeSpec m = make_mode(1.0, 1.0, 0.1);
  EXPECT_THROW(ft_log_ratio(m, {0.2, 0.0}, {0.4, 0.1}, 0.0), ZeroProbabilityError);
  const ModeSpec closed = make_mode(std::numbers::pi / 2, 1.0, 0.0);
  EXPECT_THROW(ft_log_ratio(closed, {0.2, 0.0}, {0.4, 0.1}, std::numbers::pi), ZeroProbabilityError);
}
