// Prints Bass adoption curves for a few imitation rates and the step at
// which each one crosses half adoption.
#include <cstdio>

#include "normdyn/bass.hpp"
#include "normdyn/metrics.hpp"

int main() {
  using namespace normdyn;
  const double qs[] = {0.01, 0.05, 0.1, 0.3};
  for (double q : qs) {
    const bass::BassParams params(0.001, q);
    const auto z = bass::trajectory(0.0, params, 2000);
    std::size_t half = 0;
    while (half < z.size() && z[half] < 0.5) ++half;
    const auto shape = metrics::s_shape_check(z);
    std::printf("p=0.001 q=%.2f  z(100)=%.4f  half at t=%zu  inflections=%zu\n", q, z[100], half, shape.inflections);
  }
}
