#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "normdyn/error.hpp"

namespace normdyn::bass {

/// Innovation rate p and imitation rate q of the discrete-time Bass recursion.
/// Construction enforces p, q >= 0 and p + q <= 1, which keeps every iterate
/// of a trajectory inside [0, 1].
class BassParams {
 public:
  BassParams(double p, double q) : p_(p), q_(q) {
    if (!(p >= 0.0 && q >= 0.0)) throw DomainError("bass: p and q must be non-negative");
    if (!(p + q <= 1.0)) throw DomainError("bass: p + q must not exceed 1");
  }

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }

 private:
  double p_;
  double q_;
};

using AdoptionSeries = std::vector<double>;

inline void check_fraction(double z, const char* what) {
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError(std::string(what) + ": fraction must lie in [0,1]");
}

// z + p(1-z) + q z (1-z)
inline double step(double z, const BassParams& params) {
  check_fraction(z, "bass_step");
  const double rest = 1.0 - z;
  return z + params.p() * rest + params.q() * z * rest;
}

inline AdoptionSeries trajectory(double z0, const BassParams& params, std::size_t steps) {
  check_fraction(z0, "bass_trajectory");
  AdoptionSeries z;
  z.reserve(steps + 1);
  z.push_back(z0);
  for (std::size_t t = 0; t < steps; ++t) z.push_back(step(z.back(), params));
  return z;
}

struct BassFit {
  // Raw least-squares estimates; not forced into the BassParams domain since
  // noisy data can legitimately land outside it.
  double p = 0.0;
  double q = 0.0;
  double rss = 0.0;
  std::size_t increments = 0;
};

/// Least-squares fit of the one-step increment model
///   z(t+1) - z(t) = p (1 - z(t)) + q z(t) (1 - z(t)).
/// The increment is linear in (p, q), so the normal equations are 2x2 and are
/// solved by Gaussian elimination with partial pivoting.
inline BassFit fit(const AdoptionSeries& series) {
  if (series.size() < 4) throw IdentifiabilityError("fit_bass: need at least 4 observations");
  for (double z : series) check_fraction(z, "fit_bass");

  std::set<double> interior;
  for (std::size_t t = 0; t + 1 < series.size(); ++t) {
    if (series[t] > 0.0 && series[t] < 1.0) interior.insert(series[t]);
  }
  if (interior.size() < 2) {
    throw IdentifiabilityError("fit_bass: need at least two distinct interior values of z");
  }

  // Accumulate X^T X and X^T y for columns x1 = 1-z, x2 = z(1-z).
  double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
  for (std::size_t t = 0; t + 1 < series.size(); ++t) {
    const double z = series[t];
    const double x1 = 1.0 - z;
    const double x2 = z * x1;
    const double y = series[t + 1] - z;
    s11 += x1 * x1;
    s12 += x1 * x2;
    s22 += x2 * x2;
    r1 += x1 * y;
    r2 += x2 * y;
  }

  double a[2][3] = {{s11, s12, r1}, {s12, s22, r2}};
  if (std::fabs(a[1][0]) > std::fabs(a[0][0])) std::swap(a[0], a[1]);
  if (a[0][0] == 0.0) throw IdentifiabilityError("fit_bass: singular normal equations");
  const double factor = a[1][0] / a[0][0];
  for (int c = 0; c < 3; ++c) a[1][c] -= factor * a[0][c];
  const double scale = std::max({std::fabs(s11), std::fabs(s12), std::fabs(s22)});
  if (std::fabs(a[1][1]) <= 1e-14 * scale) throw IdentifiabilityError("fit_bass: regressors are collinear");

  BassFit out;
  out.q = a[1][2] / a[1][1];
  out.p = (a[0][2] - a[0][1] * out.q) / a[0][0];
  out.increments = series.size() - 1;
  for (std::size_t t = 0; t + 1 < series.size(); ++t) {
    const double z = series[t];
    const double resid = (series[t + 1] - z) - (out.p * (1.0 - z) + out.q * z * (1.0 - z));
    out.rss += resid * resid;
  }
  return out;
}

}  // namespace normdyn::bass
