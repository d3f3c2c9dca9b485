#include "collapse_gauge/lambda.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

namespace collapse_gauge {

std::string_view to_string(LambdaMethod m) {
  switch (m) {
    case LambdaMethod::exact:
      return "exact";
    case LambdaMethod::complemented:
      return "complemented";
    case LambdaMethod::confluent:
      return "confluent";
  }
  return "unknown";
}

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Descending input; true if two neighbours are within the relative gap.
bool has_repeats(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double scale = std::max(std::abs(v[i - 1]), std::abs(v[i]));
    if (v[i - 1] - v[i] <= kEigenGapTol * scale) return true;
  }
  return false;
}

struct DistinctSum {
  double value;
  double magnitude;  // Σ |term|; the rounding error is a small multiple of eps times this
};

// Direct formula; alphas must be pairwise distinct.
DistinctSum distinct_sum(const std::vector<double>& alphas, const std::vector<double>& betas) {
  const int d = static_cast<int>(alphas.size() + betas.size());
  CompensatedSum sum;
  double magnitude = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double a = alphas[i];
    double log_mag = (d - 1) * std::log(a);
    for (double b : betas) log_mag -= std::log(a - b);
    // α sorted descending: α_i - α_j < 0 exactly for the i earlier entries.
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      if (j != i) log_mag -= std::log(std::abs(a - alphas[j]));
    }
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    const double term = std::exp(log_mag);
    magnitude += term;
    sum.add(sign * term);
  }
  return {sum.value(), magnitude};
}

// Truncated power series in t (coefficients of t^0..t^{n-1}).
using Series = std::vector<double>;

Series series_mul(const Series& a, const Series& b) {
  Series out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; i + j < a.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// 1 / (x0 + t)^power.
Series inverse_power_series(double x0, int power, std::size_t order) {
  Series base(order, 0.0);
  double c = 1.0 / x0;
  for (std::size_t r = 0; r < order; ++r) {
    base[r] = c;
    c *= -1.0 / x0;
  }
  Series out(order, 0.0);
  out[0] = 1.0;
  for (int p = 0; p < power; ++p) out = series_mul(out, base);
  return out;
}

struct Cluster {
  double center;
  int multiplicity;
};

std::vector<Cluster> cluster_descending(const std::vector<double>& v) {
  std::vector<Cluster> out;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i + 1;
    double sum = v[i];
    while (j < v.size() &&
           v[j - 1] - v[j] <= kEigenGapTol * std::max(std::abs(v[j - 1]), std::abs(v[j]))) {
      sum += v[j];
      ++j;
    }
    out.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
    i = j;
  }
  return out;
}

// Σ over α clusters of Res_{x=a} x^{d-1} / [Π_h (x-β_h) Π_c (x-a_c)^{m_c}].
double confluent_sum(const std::vector<double>& alphas, const std::vector<double>& betas) {
  const int d = static_cast<int>(alphas.size() + betas.size());
  const std::vector<Cluster> clusters = cluster_descending(alphas);
  CompensatedSum sum;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const double a = clusters[c].center;
    const std::size_t order = static_cast<std::size_t>(clusters[c].multiplicity);
    // (a + t)^{d-1}
    Series g(order, 0.0);
    double binom = 1.0;
    for (std::size_t r = 0; r < order && static_cast<int>(r) <= d - 1; ++r) {
      g[r] = binom * std::pow(a, d - 1 - static_cast<int>(r));
      binom *= static_cast<double>(d - 1 - static_cast<int>(r)) / static_cast<double>(r + 1);
    }
    for (double b : betas) g = series_mul(g, inverse_power_series(a - b, 1, order));
    for (std::size_t o = 0; o < clusters.size(); ++o) {
      if (o == c) continue;
      g = series_mul(g, inverse_power_series(a - clusters[o].center, clusters[o].multiplicity,
                                             order));
    }
    sum.add(g[order - 1]);
  }
  return sum.value();
}

double finish(double v) {
  if (!std::isfinite(v) || v < -1e-8 || v > 1.0 + 1e-8) {
    std::ostringstream os;
    os.precision(17);
    os << "measure_positive_form: value " << v
       << " outside [0, 1] beyond round-off; spectrum too ill-conditioned";
    throw NumericalError(os.str());
  }
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace

LambdaResult measure_positive_form(const SignedSpectrum& spec) {
  if (spec.dim() == 0) throw ValidationError("measure_positive_form: empty spectrum");
  if (spec.dim() > kMaxExactDim) {
    throw ValidationError("measure_positive_form: dimension above supported limit of 64; "
                          "use the Monte Carlo estimator");
  }
  if (spec.k() == 0) return {0.0, LambdaMethod::exact};
  if (spec.m() == 0) return {1.0, LambdaMethod::exact};

  // Both sides give the same number in exact arithmetic. Evaluate the one
  // whose terms cancel less; clustered eigenvalues inflate the terms.
  const SignedSpectrum neg = spec.negated();
  std::optional<DistinctSum> direct;
  std::optional<DistinctSum> other;
  if (!has_repeats(spec.alphas())) direct = distinct_sum(spec.alphas(), spec.betas());
  if (!has_repeats(neg.alphas())) {
    other = neg.k() == 0 ? DistinctSum{0.0, 0.0} : distinct_sum(neg.alphas(), neg.betas());
  }
  if (direct && (!other || direct->magnitude <= other->magnitude)) {
    return {finish(direct->value), LambdaMethod::exact};
  }
  if (other) return {finish(1.0 - other->value), LambdaMethod::complemented};
  return {finish(confluent_sum(spec.alphas(), spec.betas())), LambdaMethod::confluent};
}

LambdaResult lambda_p(const Effect& e, const CollapseParams& params) {
  if (!(params.p() > 0.0 && params.p() < 1.0)) {
    throw ValidationError("lambda_p: p must lie strictly between 0 and 1");
  }
  const HermitianOperator a = collapse_indicator_operator(e, params);
  return measure_positive_form(SignedSpectrum::of(a));
}

double markov_bound(const Effect& e, const CollapseParams& params) {
  const double p = params.p();
  const double mean = (1.0 - p) + (2.0 * p - 1.0) * e.trace() / e.dim();
  return mean / ((1.0 - p) + std::max(0.0, 2.0 * p - 1.0));
}

double chernoff_bound(double p) { return 4.0 * p * (1.0 - p); }

double conjecture_bound(int d) {
  if (d < 2) throw ValidationError("conjecture_bound: d must be at least 2");
  return 1.0 - std::pow(1.0 - 1.0 / d, d - 1);
}

double good_p_threshold(int d) {
  if (d < 3) throw ValidationError("good_p_threshold: requires d >= 3");
  // 1 - 2^{-1/(d-1)} without cancellation for large d.
  const double gap = -std::expm1(-std::numbers::ln2 / (d - 1));
  return 1.0 - 1.0 / (1.0 + d * gap);
}

double good_p_threshold_limit() { return std::numbers::ln2 / (1.0 + std::numbers::ln2); }

bool single_negative_regime(double p) {
  return p < std::numbers::ln2 / (1.0 + std::numbers::ln2) ||
         p > 1.0 / (1.0 + std::numbers::ln2);
}

}  // namespace collapse_gauge
