#include "collapse_gauge/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "collapse_gauge/random.hpp"

namespace collapse_gauge {

std::string_view to_string(SearchStrategy s) {
  switch (s) {
    case SearchStrategy::uniform_projector:
      return "uniform_projector";
    case SearchStrategy::rank_k_projectors:
      return "rank_k_projectors";
    case SearchStrategy::spectrum_parametrized:
      return "spectrum_parametrized";
    case SearchStrategy::random_restart_local:
      return "random_restart_local";
  }
  return "unknown";
}

SearchStrategy parse_strategy(std::string_view name) {
  for (SearchStrategy s :
       {SearchStrategy::uniform_projector, SearchStrategy::rank_k_projectors,
        SearchStrategy::spectrum_parametrized, SearchStrategy::random_restart_local}) {
    if (name == to_string(s)) return s;
  }
  throw ValidationError("unknown search strategy '" + std::string(name) + "'");
}

SearchReport make_search_report(Effect best, double p, std::int64_t evaluations,
                                SearchStrategy strategy) {
  const int d = best.dim();
  const double value = lambda_p(best, CollapseParams(p, d)).value;
  const bool violated = value > conjecture_bound(d) + 1e-7;
  return {std::move(best), value, p, d, evaluations, strategy, violated};
}

Effect uniform_projector_effect(int d) {
  if (d < 2) throw ValidationError("uniform_projector_effect: d must be at least 2");
  const CVector phi = CVector::Constant(d, Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
  return Effect::projector(phi);
}

double uniform_projector_lambda(int d, double p) {
  if (d < 2) throw ValidationError("uniform_projector_lambda: d must be at least 2");
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("uniform_projector_lambda: p in (0, 1)");
  if (p <= 0.5) return 1.0 - std::pow(1.0 - p / (d * (1.0 - p)), d - 1);
  if (p < static_cast<double>(d) / (2.0 * d - 1.0)) {
    return 1.0 - std::pow(p * (d - 1) / (d * (1.0 - p)), d - 1);
  }
  return 0.0;
}

namespace {

constexpr double kTieTol = 1e-12;
constexpr std::int64_t kChunk = 4096;
constexpr int kStallLimit = 50;
constexpr double kInitialStep = 0.25;

double evaluate(const Effect& e, const CollapseParams& params) {
  try {
    return lambda_p(e, params).value;
  } catch (const NumericalError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

Effect candidate(SearchStrategy strategy, int d, std::uint64_t seed, std::int64_t index) {
  if (index == 0) return uniform_projector_effect(d);
  Rng rng = make_stream(seed, static_cast<std::uint64_t>(index));
  if (strategy == SearchStrategy::rank_k_projectors) {
    const int k = 1 + static_cast<int>((index - 1) % (d - 1));
    return random_projector(d, k, rng);
  }
  return random_effect(d, rng);
}

struct Best {
  double value = -std::numeric_limits<double>::infinity();
  std::int64_t index = -1;
};

void offer(Best& best, double value, std::int64_t index) {
  if (best.index < 0 || value > best.value + kTieTol) best = {value, index};
}

SearchReport sample_candidates(int d, double p, std::int64_t budget, SearchStrategy strategy,
                               std::uint64_t seed, bool parallel) {
  const CollapseParams params(p, d);
  Best best;
  offer(best, evaluate(uniform_projector_effect(d), params), 0);
  std::vector<double> values;
  for (std::int64_t start = 1; start < budget; start += kChunk) {
    const std::int64_t len = std::min(kChunk, budget - start);
    values.assign(static_cast<std::size_t>(len), 0.0);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (std::int64_t j = 0; j < len; ++j) {
      values[static_cast<std::size_t>(j)] =
          evaluate(candidate(strategy, d, seed, start + j), params);
    }
    for (std::int64_t j = 0; j < len; ++j) offer(best, values[static_cast<std::size_t>(j)], start + j);
  }
  return make_search_report(candidate(strategy, d, seed, best.index), p, budget, strategy);
}

// E = U diag(μ) U†, explored one coordinate at a time.
struct LocalPoint {
  RVector mu;
  CMatrix u;

  Effect effect() const {
    return Effect(HermitianOperator(CMatrix(u * mu.cast<Complex>().asDiagonal() * u.adjoint())));
  }
};

CMatrix fourier_matrix(int d) {
  CMatrix f(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      f(j, k) = std::polar(norm, 2.0 * std::numbers::pi * j * k / d);
    }
  }
  return f;
}

LocalPoint restart_point(int d, std::int64_t restart, Rng& rng) {
  if (restart == 0) {
    RVector mu = RVector::Zero(d);
    mu[0] = 1.0;
    return {mu, fourier_matrix(d)};
  }
  CMatrix u = haar_unitary(d, rng);
  RVector mu(d);
  if (restart % 2 == 1) {
    const int k = 1 + static_cast<int>(restart % (d - 1));
    for (int i = 0; i < d; ++i) mu[i] = i < k ? 1.0 : 0.0;
  } else {
    for (int i = 0; i < d; ++i) mu[i] = uniform01(rng);
  }
  return {mu, u};
}

// Coordinates 0..d-1 move μ; the rest are left Givens rotations, two per
// index pair (real and imaginary generator).
LocalPoint perturb(const LocalPoint& x, int coord, double delta) {
  LocalPoint y = x;
  const int d = static_cast<int>(x.mu.size());
  if (coord < d) {
    y.mu[coord] = std::clamp(y.mu[coord] + delta, 0.0, 1.0);
    return y;
  }
  const int idx = coord - d;
  int pair = idx / 2;
  int j = 0;
  while (pair >= d - 1 - j) {
    pair -= d - 1 - j;
    ++j;
  }
  const int l = j + 1 + pair;
  const double c = std::cos(delta);
  const double s = std::sin(delta);
  const Eigen::RowVectorXcd rj = x.u.row(j);
  const Eigen::RowVectorXcd rl = x.u.row(l);
  if (idx % 2 == 0) {
    y.u.row(j) = c * rj + s * rl;
    y.u.row(l) = -s * rj + c * rl;
  } else {
    const Complex is(0.0, s);
    y.u.row(j) = c * rj + is * rl;
    y.u.row(l) = is * rj + c * rl;
  }
  return y;
}

struct RestartResult {
  double value;
  std::int64_t index;  // global evaluation index of the best point
  LocalPoint point;
};

RestartResult run_restart(int d, const CollapseParams& params, std::uint64_t seed,
                          std::int64_t restart, std::int64_t first_index, std::int64_t length) {
  Rng rng = make_stream(seed, static_cast<std::uint64_t>(restart));
  LocalPoint cur = restart_point(d, restart, rng);
  double cur_value = evaluate(cur.effect(), params);
  std::int64_t cur_index = first_index;
  std::int64_t used = 1;

  const int coords = d + d * (d - 1);
  double step = kInitialStep;
  int stall = 0;
  int coord = 0;
  while (used < length) {
    for (double sign : {1.0, -1.0}) {
      if (used >= length) break;
      LocalPoint trial = perturb(cur, coord, sign * step);
      const double v = evaluate(trial.effect(), params);
      const std::int64_t index = first_index + used;
      ++used;
      if (v > cur_value) {
        cur = std::move(trial);
        cur_value = v;
        cur_index = index;
        stall = 0;
        break;
      }
      if (++stall >= kStallLimit) {
        step *= 0.5;
        stall = 0;
      }
    }
    coord = (coord + 1) % coords;
  }
  return {cur_value, cur_index, std::move(cur)};
}

SearchReport local_search(int d, double p, std::int64_t budget, std::uint64_t seed,
                          bool parallel) {
  const CollapseParams params(p, d);
  const Effect uniform = uniform_projector_effect(d);
  Best best;
  offer(best, evaluate(uniform, params), 0);
  std::optional<Effect> best_effect;

  const std::int64_t restarts = (budget - 1 + kLocalRestartLength - 1) / kLocalRestartLength;
  std::vector<std::optional<RestartResult>> results(static_cast<std::size_t>(restarts));
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (std::int64_t r = 0; r < restarts; ++r) {
    const std::int64_t first = 1 + r * kLocalRestartLength;
    const std::int64_t len = std::min(kLocalRestartLength, budget - first);
    results[static_cast<std::size_t>(r)] = run_restart(d, params, seed, r, first, len);
  }
  for (const auto& res : results) {
    const std::int64_t before = best.index;
    offer(best, res->value, res->index);
    if (best.index != before) best_effect = res->point.effect();
  }
  return make_search_report(best_effect ? *best_effect : uniform, p, budget,
                            SearchStrategy::random_restart_local);
}

SearchReport run_search(int d, double p, std::int64_t budget, SearchStrategy strategy,
                        std::uint64_t seed, bool parallel) {
  if (d < 2) throw ValidationError("maximize_lambda: d must be at least 2");
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("maximize_lambda: p must lie in (0, 1)");
  if (budget < 1) throw ValidationError("maximize_lambda: budget must be at least 1");
  switch (strategy) {
    case SearchStrategy::uniform_projector:
      return make_search_report(uniform_projector_effect(d), p, 1, strategy);
    case SearchStrategy::rank_k_projectors:
    case SearchStrategy::spectrum_parametrized:
      return sample_candidates(d, p, budget, strategy, seed, parallel);
    case SearchStrategy::random_restart_local:
      return local_search(d, p, budget, seed, parallel);
  }
  throw ValidationError("maximize_lambda: invalid strategy");
}

}  // namespace

SearchReport maximize_lambda(int d, double p, std::int64_t budget, SearchStrategy strategy,
                             std::uint64_t seed) {
  return run_search(d, p, budget, strategy, seed, true);
}

namespace serial {
SearchReport maximize_lambda(int d, double p, std::int64_t budget, SearchStrategy strategy,
                             std::uint64_t seed) {
  return run_search(d, p, budget, strategy, seed, false);
}
}  // namespace serial

std::vector<SweepPoint> p_sweep(const Effect& e, std::span<const double> p_grid) {
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] > 0.0 && p_grid[i] < 1.0)) {
      throw ValidationError("p_sweep: grid values must lie in (0, 1)");
    }
    if (i > 0 && p_grid[i] < p_grid[i - 1]) {
      throw ValidationError("p_sweep: grid must be sorted ascending");
    }
  }
  std::vector<SweepPoint> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) out.push_back({p, lambda_p(e, CollapseParams(p, e.dim()))});
  return out;
}

std::vector<double> uniform_p_grid(double step) {
  if (!(step > 0.0 && step < 1.0)) throw ValidationError("uniform_p_grid: step in (0, 1)");
  std::vector<double> grid;
  for (int k = 1;; ++k) {
    const double p = k * step;
    if (p >= 1.0 - 1e-12) break;
    grid.push_back(p);
  }
  return grid;
}

}  // namespace collapse_gauge
