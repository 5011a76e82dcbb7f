#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "tpm/error.hpp"
#include "tpm/mechanism.hpp"

using namespace tpm;

namespace {

double total(const Vector& x) { return std::accumulate(x.begin(), x.end(), 0.0); }

Errc error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::InvalidConfig;
}

}  // namespace

TEST(SplittingRule, Validation) {
  EXPECT_EQ(error_of([] { SplittingRule(Matrix::from_rows({{-0.1, 0}, {0, 1}})); }),
            Errc::ParameterOutOfRange);
  EXPECT_EQ(error_of([] { SplittingRule(Matrix::from_rows({{0.7, 0}, {0.7, 1}})); }),
            Errc::ParameterOutOfRange);
  EXPECT_NO_THROW(SplittingRule(Matrix::from_rows({{0.5, 0}, {0.2, 1}})));
}

TEST(SplittingRule, NonWasteful) {
  const Economy e = Economy::validate(Matrix::from_rows({{1, 1}, {1, 0}}));
  EXPECT_TRUE(SplittingRule(Matrix::from_rows({{0.5, 1}, {0.5, 0}})).is_non_wasteful(e));
  EXPECT_FALSE(SplittingRule(Matrix::from_rows({{0.5, 0.5}, {0.5, 0.5}})).is_non_wasteful(e));
  EXPECT_FALSE(SplittingRule(Matrix::from_rows({{0.5, 1}, {0.4, 0}})).is_non_wasteful(e));
}

TEST(ApplyRule, DimensionMismatch) {
  const Economy e = Economy::validate(Matrix::from_rows({{1.0}}));
  EXPECT_EQ(error_of([&] { apply_rule(e, {1, 2}, self_rule(1)); }), Errc::DimensionMismatch);
  EXPECT_EQ(error_of([&] { apply_rule(e, {1}, self_rule(2)); }), Errc::DimensionMismatch);
}

TEST(TwoPlayerRules, KeepOwnGrowsOnTheSelfLoop) {
  const Economy e = Economy::from_coefficients(Matrix::from_rows({{1.1, 0}, {0.2, 0}}));
  const auto xs = run_schedule(e, {1, 1}, constant_schedule(self_rule(2)), 3);
  ASSERT_EQ(xs.size(), 4u);
  EXPECT_NEAR(xs[3][0], 1.331, 1e-12);
  EXPECT_DOUBLE_EQ(xs[3][1], 0.0);
}

TEST(TwoPlayerRules, EqualSplitDecays) {
  const Economy e = Economy::from_coefficients(Matrix::from_rows({{1.1, 0}, {0.2, 0}}));
  const auto xs = run_schedule(e, {1, 1}, constant_schedule(equal_split_rule(2)), 3);
  EXPECT_NEAR(xs[1][0], 0.55, 1e-15);
  EXPECT_NEAR(xs[1][1], 0.1, 1e-15);
  EXPECT_NEAR(xs[2][0], 0.3025, 1e-15);
  EXPECT_NEAR(xs[2][1], 0.055, 1e-15);
  for (std::size_t t = 0; t < 3; ++t) EXPECT_LT(total(xs[t + 1]), total(xs[t]));
}

TEST(CycleRouting, FollowsTheCycle) {
  const Economy e = Economy::validate(Matrix::from_rows({{0.99, 0.1}, {10.2, 0.99}}));
  const Cycle c = Cycle::make(e, {0, 1});
  const auto xs = run_schedule(e, {1, 0}, cycle_routing_rule(e, c), 4);
  EXPECT_NEAR(xs[1][1], 10.2, 1e-12);
  EXPECT_DOUBLE_EQ(xs[1][0], 0.0);
  EXPECT_NEAR(xs[2][0], 1.02, 1e-12);
  EXPECT_DOUBLE_EQ(xs[2][1], 0.0);
  EXPECT_NEAR(xs[4][0], 1.02 * 1.02, 1e-12);
}

TEST(CycleRouting, RejectsForeignCycles) {
  const Economy e = Economy::validate(Matrix::from_rows({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}));
  Cycle fake;
  fake.vertices = {0, 1, 2};
  EXPECT_EQ(error_of([&] { cycle_routing_rule(e, fake); }), Errc::InvalidCycle);
}

TEST(PeriodicBadSplit, ClosedFormOnPlayerOne) {
  for (double gamma : {0.0, 0.3, 0.9})
    for (double eps : {0.1, 0.5, 0.95}) {
      const ScheduledExample ex = example_e1_schedule(gamma, eps);
      const auto xs = run_schedule(ex.economy, ex.x0, ex.schedule, 60);
      const double q = gamma + (1 - gamma) * (1 - eps);
      for (std::size_t k = 0; k <= 20; ++k)
        EXPECT_NEAR(xs[3 * k][0], std::pow(q, static_cast<double>(k)), 1e-12)
            << "gamma " << gamma << " eps " << eps << " k " << k;
      for (const Vector& x : xs) EXPECT_GT(total(x), 0.0);
    }
}

TEST(PeriodicBadSplit, ParameterRanges) {
  EXPECT_EQ(error_of([] { example_e1_schedule(1.0, 0.5); }), Errc::ParameterOutOfRange);
  EXPECT_EQ(error_of([] { example_e1_schedule(0.5, 0.0); }), Errc::ParameterOutOfRange);
  EXPECT_EQ(error_of([] { example_e1_schedule(0.5, 1.0); }), Errc::ParameterOutOfRange);
}

TEST(RandomRule, RespectsTheContract) {
  oracle::Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const Economy e = Economy::validate(oracle::random_connected(rng, 2 + trial % 5, 0.4));
    EXPECT_TRUE(random_rule(e, rng, true).is_non_wasteful(e));
    const SplittingRule r = random_rule(e, rng, false);
    for (std::size_t j = 0; j < e.size(); ++j) EXPECT_LE(r.beta().col_sum(j), 1.0 + 1e-12);
  }
}

TEST(RandomSchedules, AllBadCyclesDecayUnderAnyRule) {
  oracle::Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = oracle::with_best_mean(oracle::random_connected(rng, 2 + trial % 5, 0.4), 0.9);
    const Economy e = Economy::validate(a);
    const bool nw = trial % 2 == 0;
    auto seed = rng();
    RuleSchedule sched = [&, seed](std::size_t t) {
      std::mt19937_64 r(seed + t);
      return random_rule(e, r, nw);
    };
    const auto xs = run_schedule(e, Vector(e.size(), 1.0), sched, 400);
    EXPECT_LT(total(xs.back()), 1e-6 * total(xs.front()));
  }
}

TEST(RandomSchedules, AllGoodCyclesGrowUnderNonWastefulRules) {
  oracle::Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a = oracle::random_connected(rng, 2 + trial % 5, 0.4, 0.5, 2.0);
    a = a.scaled(1.2 / oracle::worst_geo_mean(a));
    const Economy e = Economy::validate(a);
    auto seed = rng();
    RuleSchedule sched = [&, seed](std::size_t t) {
      std::mt19937_64 r(seed + t);
      return random_rule(e, r, true);
    };
    const auto xs = run_schedule(e, Vector(e.size(), 1.0), sched, 400);
    EXPECT_GT(total(xs.back()), 1e6 * total(xs.front()));
  }
}
