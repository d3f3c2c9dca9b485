#pragma once

// Numerical exploration of sup_E Λ_p(E).

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "collapse_gauge/core.hpp"
#include "collapse_gauge/lambda.hpp"

namespace collapse_gauge {

enum class SearchStrategy {
  uniform_projector,
  rank_k_projectors,
  spectrum_parametrized,
  random_restart_local,
};

std::string_view to_string(SearchStrategy s);
/// Throws ValidationError on an unknown name.
SearchStrategy parse_strategy(std::string_view name);

struct SearchReport {
  Effect best_effect;
  double best_lambda;
  double p;
  int d;
  std::int64_t evaluations;
  SearchStrategy strategy;
  bool violated_conjecture;  // best_lambda > conjecture_bound(d) + 1e-7
};

/// Builds a report, recomputing best_lambda from the effect.
SearchReport make_search_report(Effect best, double p, std::int64_t evaluations,
                                SearchStrategy strategy);

/// |φ⟩⟨φ| with φ_k = 1/√d.
Effect uniform_projector_effect(int d);

/// Λ_p of the uniform projector in closed form:
///   p ≤ 1/2:              1 - (1 - p / (d(1-p)))^{d-1}
///   1/2 < p < d/(2d-1):   1 - (p(d-1) / (d(1-p)))^{d-1}
///   otherwise:            0
double uniform_projector_lambda(int d, double p);

/// Restart length (evaluations) of the random_restart_local strategy.
inline constexpr std::int64_t kLocalRestartLength = 1000;

/// Best Λ_p(E) over at most `budget` candidate effects.
///
/// Candidate 0 is always the uniform projector. The remaining candidates
/// depend on the strategy:
///   rank_k_projectors      projectors onto the first k columns of a Haar
///                          unitary, k cycling through 1..d-1;
///   spectrum_parametrized  U diag(μ) U† with U Haar, μ uniform in [0,1]^d;
///   random_restart_local   restarts of kLocalRestartLength evaluations,
///                          each a coordinate search over (μ, U) from a
///                          start point (restart 0: the uniform projector;
///                          odd restarts: random projector; even: random
///                          spectrum). A coordinate move tries ±step; the
///                          step halves after 50 evaluations without strict
///                          improvement.
///   uniform_projector      candidate 0 only.
/// Candidate i draws from make_stream(seed, i) (restart r of the local
/// strategy from make_stream(seed, r)), so the report is a deterministic
/// function of the arguments and never gets worse as the budget grows.
/// Ties within 1e-12 keep the earlier candidate. Evaluations run in
/// parallel and are reduced in candidate order.
SearchReport maximize_lambda(int d, double p, std::int64_t budget, SearchStrategy strategy,
                             std::uint64_t seed);

namespace serial {
SearchReport maximize_lambda(int d, double p, std::int64_t budget, SearchStrategy strategy,
                             std::uint64_t seed);
}  // namespace serial

struct SweepPoint {
  double p;
  LambdaResult lambda;
};

/// Λ_p(E) over an ascending grid of p values in (0, 1).
std::vector<SweepPoint> p_sweep(const Effect& e, std::span<const double> p_grid);

/// {step, 2·step, ...} strictly inside (0, 1).
std::vector<double> uniform_p_grid(double step);

}  // namespace collapse_gauge
