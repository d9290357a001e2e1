#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "normdyn/bass.hpp"
#include "normdyn/metrics.hpp"
#include "normdyn/random.hpp"

using namespace normdyn;
using bass::BassParams;

TEST(BassParams, Domain) {
  EXPECT_NO_THROW(BassParams(0.0, 0.0));
  EXPECT_NO_THROW(BassParams(0.5, 0.5));
  EXPECT_THROW(BassParams(-0.01, 0.1), DomainError);
  EXPECT_THROW(BassParams(0.1, -0.01), DomainError);
  EXPECT_THROW(BassParams(0.6, 0.5), DomainError);
}

TEST(BassStep, Examples) {
  EXPECT_EQ(bass::step(1.0, BassParams(0.3, 0.4)), 1.0);
  EXPECT_DOUBLE_EQ(bass::step(0.0, BassParams(0.001, 0.1)), 0.001);
  EXPECT_NEAR(bass::step(0.5, BassParams(0.001, 0.01)), 0.503, 1e-15);
  EXPECT_THROW(bass::step(1.2, BassParams(0.001, 0.01)), DomainError);
  EXPECT_THROW(bass::step(-0.1, BassParams(0.001, 0.01)), DomainError);
}

TEST(BassStep, MonotoneAndBounded) {
  Rng rng(4);
  for (int i = 0; i < 20000; ++i) {
    const double p = rng.uniform() * 0.5;
    const double q = rng.uniform() * (1.0 - p);
    const double z = rng.uniform();
    const double next = bass::step(z, BassParams(p, q));
    EXPECT_GE(next, z);
    EXPECT_LE(next, 1.0);
  }
}

TEST(BassTrajectory, LengthAndFixedPoint) {
  const auto ones = bass::trajectory(1.0, BassParams(0.2, 0.3), 10);
  ASSERT_EQ(ones.size(), 11u);
  for (double z : ones) EXPECT_EQ(z, 1.0);
  EXPECT_EQ(bass::trajectory(0.2, BassParams(0.2, 0.3), 0).size(), 1u);
}

TEST(BassTrajectory, SCurves) {
  const auto slow = bass::trajectory(0.0, BassParams(0.001, 0.01), 3000);
  const auto fast = bass::trajectory(0.0, BassParams(0.001, 0.1), 3000);
  auto first_at_least = [](const std::vector<double>& z, double level) {
    for (std::size_t t = 0; t < z.size(); ++t)
      if (z[t] >= level) return t;
    return z.size();
  };
  for (const auto* z : {&slow, &fast}) {
    const auto shape = metrics::s_shape_check(*z);
    EXPECT_TRUE(shape.monotone);
    EXPECT_EQ(shape.inflections, 1u);
    EXPECT_LT(first_at_least(*z, 0.99), z->size());
  }
  EXPECT_LT(first_at_least(fast, 0.5), first_at_least(slow, 0.5));
}

TEST(BassTrajectory, RawSecondDifferenceChangesSignOnce) {
  const auto z = bass::trajectory(0.0, BassParams(0.001, 0.1), 400);
  int changes = 0, last = 0;
  for (std::size_t t = 1; t + 1 < z.size(); ++t) {
    const double d2 = z[t + 1] - 2 * z[t] + z[t - 1];
    if (std::fabs(d2) < 1e-15) continue;
    const int s = d2 > 0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  EXPECT_EQ(changes, 1);
}

TEST(BassFit, NoiselessRoundtrip) {
  const auto z = bass::trajectory(0.01, BassParams(0.001, 0.1), 200);
  const auto fit = bass::fit(z);
  EXPECT_NEAR(fit.p, 0.001, 1e-9);
  EXPECT_NEAR(fit.q, 0.1, 1e-9);
  EXPECT_LT(fit.rss, 1e-20);
  EXPECT_EQ(fit.increments, 200u);
}

TEST(BassFit, PureInnovation) {
  const auto fit = bass::fit(bass::trajectory(0.0, BassParams(0.02, 0.0), 100));
  EXPECT_NEAR(fit.p, 0.02, 1e-9);
  EXPECT_NEAR(fit.q, 0.0, 1e-9);
}

TEST(BassFit, RoundtripOverRandomParameters) {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    const double p = 0.0005 + rng.uniform() * 0.05;
    const double q = rng.uniform() * 0.5;
    const double z0 = rng.uniform() * 0.2;
    const auto fit = bass::fit(bass::trajectory(z0, BassParams(p, q), 60));
    EXPECT_NEAR(fit.p, p, 1e-9);
    EXPECT_NEAR(fit.q, q, 1e-9);
  }
}

// Residuals of the least-squares solution are orthogonal to both regressors,
// and the estimate matches a Cramer's-rule solve of the normal equations.
TEST(BassFit, NoisyMatchesIndependentLeastSquares) {
  Rng rng(7);
  auto z = bass::trajectory(0.0, BassParams(0.001, 0.1), 150);
  for (std::size_t t = 1; t < z.size(); ++t) z[t] = std::clamp(z[t] + (rng.uniform() * 2 - 1) * 1e-3, 0.0, 1.0);
  const auto fit = bass::fit(z);

  long double a = 0, b = 0, c = 0, u = 0, v = 0;
  for (std::size_t t = 0; t + 1 < z.size(); ++t) {
    const long double x1 = 1.0L - z[t], x2 = z[t] * (1.0L - z[t]), y = z[t + 1] - z[t];
    a += x1 * x1, b += x1 * x2, c += x2 * x2, u += x1 * y, v += x2 * y;
  }
  const long double det = a * c - b * b;
  EXPECT_NEAR(fit.p, static_cast<double>((u * c - b * v) / det), 1e-9);
  EXPECT_NEAR(fit.q, static_cast<double>((a * v - b * u) / det), 1e-9);
  EXPECT_NEAR(fit.p, 0.001, 1e-2);
  EXPECT_NEAR(fit.q, 0.1, 1e-2);

  double g1 = 0, g2 = 0;
  for (std::size_t t = 0; t + 1 < z.size(); ++t) {
    const double r = (z[t + 1] - z[t]) - (fit.p * (1 - z[t]) + fit.q * z[t] * (1 - z[t]));
    g1 += r * (1 - z[t]);
    g2 += r * z[t] * (1 - z[t]);
  }
  EXPECT_NEAR(g1, 0.0, 1e-12);
  EXPECT_NEAR(g2, 0.0, 1e-12);
}

TEST(BassFit, Identifiability) {
  EXPECT_THROW(bass::fit({0.5, 0.5, 0.5, 0.5}), IdentifiabilityError);
  EXPECT_THROW(bass::fit({0.0, 0.0, 1.0, 1.0}), IdentifiabilityError);
  EXPECT_THROW(bass::fit({0.1, 0.2, 0.3}), IdentifiabilityError);
  EXPECT_THROW(bass::fit({0.1, 0.2, 1.3, 1.0}), DomainError);
}
