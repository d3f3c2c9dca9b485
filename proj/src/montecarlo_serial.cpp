// Single-threaded reference estimators. They go through the public
// sampling and collapse primitives one draw at a time, with the same block
// and stream layout as the parallel kernels.

#include <algorithm>

#include "collapse_gauge/montecarlo.hpp"

namespace collapse_gauge::serial {

EstimateWithCI estimate_positive_fraction(const HermitianOperator& a, std::int64_t n,
                                          std::uint64_t seed) {
  if (n < 1) throw ValidationError("estimator: n must be at least 1");
  std::int64_t hits = 0;
  for (std::int64_t b = 0; b * kBlockSize < n; ++b) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(b));
    const std::int64_t count = std::min(kBlockSize, n - b * kBlockSize);
    for (std::int64_t s = 0; s < count; ++s) {
      const PureState psi = sample_uniform_state(a.dim(), rng);
      if (psi.expectation(a) > 0.0) ++hits;
    }
  }
  return bernoulli_estimate(hits, n, seed);
}

EstimateWithCI estimate_lambda(const Effect& e, const CollapseParams& params, std::int64_t n,
                               std::uint64_t seed) {
  return serial::estimate_positive_fraction(collapse_indicator_operator(e, params), n, seed);
}

EstimateWithCI estimate_reliability(const PureState& psi, const CollapseParams& params,
                                    const Effect& e, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("estimator: n must be at least 1");
  std::int64_t correct = 0;
  for (std::int64_t b = 0; b * kBlockSize < n; ++b) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(b));
    const std::int64_t count = std::min(kBlockSize, n - b * kBlockSize);
    for (std::int64_t s = 0; s < count; ++s) {
      const CollapseDraw draw = collapse_draw(psi, params, rng);
      const bool yes = uniform01(rng) < draw.state.expectation(e.op());
      if (yes == draw.collapsed()) ++correct;
    }
  }
  return bernoulli_estimate(correct, n, seed);
}

}  // namespace collapse_gauge::serial
