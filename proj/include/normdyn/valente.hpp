#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "normdyn/error.hpp"

namespace normdyn::cascade {

// Ordered by value. For time of adoption these read as early adopters,
// early majority, late majority, laggards.
enum class SigmaCategory { very_low = 0, low = 1, high = 2, very_high = 3 };

inline const char* to_string(SigmaCategory c) {
  switch (c) {
    case SigmaCategory::very_low: return "very_low";
    case SigmaCategory::low: return "low";
    case SigmaCategory::high: return "high";
    case SigmaCategory::very_high: return "very_high";
  }
  return "very_low";
}

struct SigmaBands {
  double mean = 0.0;
  double sd = 0.0;  // population standard deviation
};

inline SigmaBands sigma_bands(std::span<const double> values) {
  if (values.size() < 2) throw AnalysisError("classify: need at least two values");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(values.size()));
  if (!(sd > 0.0)) throw AnalysisError("classify: zero variance");
  return {mean, sd};
}

/// Intervals (-inf, mu-sd), [mu-sd, mu), [mu, mu+sd), [mu+sd, inf).
inline std::vector<SigmaCategory> classify_sigma_categories(std::span<const double> values) {
  const auto [mu, sd] = sigma_bands(values);
  std::vector<SigmaCategory> out;
  out.reserve(values.size());
  for (double v : values) {
    if (v < mu - sd) out.push_back(SigmaCategory::very_low);
    else if (v < mu) out.push_back(SigmaCategory::low);
    else if (v < mu + sd) out.push_back(SigmaCategory::high);
    else out.push_back(SigmaCategory::very_high);
  }
  return out;
}

struct Contingency {
  // counts[time_category][threshold_category]
  std::array<std::array<std::size_t, 4>, 4> counts{};
  double agreement = 0.0;  // diagonal share
};

inline Contingency cross_tabulate(std::span<const SigmaCategory> by_time, std::span<const SigmaCategory> by_threshold) {
  if (by_time.size() != by_threshold.size()) throw InputError("cross_tabulate: length mismatch");
  if (by_time.empty()) throw InputError("cross_tabulate: no items");
  Contingency out;
  std::size_t diagonal = 0;
  for (std::size_t i = 0; i < by_time.size(); ++i) {
    const auto a = static_cast<std::size_t>(by_time[i]);
    const auto b = static_cast<std::size_t>(by_threshold[i]);
    ++out.counts[a][b];
    diagonal += (a == b);
  }
  out.agreement = static_cast<double>(diagonal) / static_cast<double>(by_time.size());
  return out;
}

}  // namespace normdyn::cascade
