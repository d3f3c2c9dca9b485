#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "collapse_gauge/montecarlo.hpp"

namespace collapse_gauge {

namespace {

class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void require_positive(std::span<const double> lams, const char* what) {
  if (lams.empty()) throw ValidationError(std::string(what) + ": empty rate list");
  for (double l : lams) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw ValidationError(std::string(what) + ": weights must be finite and positive");
    }
  }
}

bool pairwise_distinct(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double scale = std::max(std::abs(s[i]), std::abs(s[i - 1]));
    if (s[i] - s[i - 1] <= 1e-7 * scale) return false;
  }
  return true;
}

double prod_except(std::span<const double> v, std::size_t i, double x) {
  double prod = 1.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j != i) prod *= x - v[j];
  }
  return prod;
}

// Values of Σ a_k T_k on the Chebyshev-Lobatto grid x_j = cos(πj/N), plus
// coefficient extraction and indefinite integration.
class ChebyshevGrid {
 public:
  explicit ChebyshevGrid(int n) : n_(n), cos_table_(static_cast<std::size_t>(2 * n + 2)) {
    for (std::size_t i = 0; i < cos_table_.size(); ++i) {
      cos_table_[i] = std::cos(std::numbers::pi * static_cast<double>(i) / n_);
    }
  }

  int size() const { return n_ + 1; }
  double node(int j) const { return cos_table_[static_cast<std::size_t>(j)]; }

  // cos(π j k / N) via the periodic table.
  double cos_jk(int j, int k) const {
    const int idx = (j * k) % (2 * n_);
    return cos_table_[static_cast<std::size_t>(idx)];
  }

  // Coefficients a_k of the interpolant Σ_{k=0}^{N} a_k T_k.
  std::vector<double> coefficients(const std::vector<double>& values) const {
    std::vector<double> a(static_cast<std::size_t>(n_ + 1), 0.0);
    for (int k = 0; k <= n_; ++k) {
      double s = 0.0;
      for (int j = 0; j <= n_; ++j) {
        const double w = (j == 0 || j == n_) ? 0.5 : 1.0;
        s += w * values[static_cast<std::size_t>(j)] * cos_jk(j, k);
      }
      a[static_cast<std::size_t>(k)] = 2.0 * s / n_;
    }
    a.front() *= 0.5;
    a.back() *= 0.5;
    return a;
  }

  // F(x_j) - F(1) negated, i.e. ∫_{x_j}^{1} Σ a_k T_k dx.
  std::vector<double> integral_from_right(const std::vector<double>& a) const {
    // Antiderivative coefficients (degree N+1).
    std::vector<double> b(static_cast<std::size_t>(n_ + 2), 0.0);
    for (int k = 0; k <= n_; ++k) {
      const double ak = a[static_cast<std::size_t>(k)];
      if (k == 0) {
        b[1] += ak;
      } else if (k == 1) {
        b[2] += ak / 4.0;
      } else {
        b[static_cast<std::size_t>(k + 1)] += ak / (2.0 * (k + 1));
        b[static_cast<std::size_t>(k - 1)] -= ak / (2.0 * (k - 1));
      }
    }
    double at_one = 0.0;
    for (double bk : b) at_one += bk;
    std::vector<double> out(static_cast<std::size_t>(n_ + 1));
    for (int j = 0; j <= n_; ++j) {
      double f = 0.0;
      for (int k = 0; k <= n_ + 1; ++k) f += b[static_cast<std::size_t>(k)] * cos_jk(j, k);
      out[static_cast<std::size_t>(j)] = at_one - f;
    }
    return out;
  }

 private:
  int n_;
  std::vector<double> cos_table_;
};

}  // namespace

double hypoexp_density_recursive(std::span<const double> lams, double c) {
  require_positive(lams, "hypoexp_density_recursive");
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw ValidationError("hypoexp_density_recursive: c must be finite and non-negative");
  }
  const double first = 1.0 / (2.0 * lams[0]);
  if (c == 0.0) return lams.size() == 1 ? first : 0.0;

  const double lmin = *std::min_element(lams.begin(), lams.end());
  const int n = std::clamp(48 + 2 * static_cast<int>(std::ceil(c / (2.0 * lmin))), 64, 2048);
  const ChebyshevGrid grid(n);
  // s = (c/2)(1 - x): x = 1 ↔ s = 0, x = -1 ↔ s = c.
  std::vector<double> s(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) s[static_cast<std::size_t>(j)] = 0.5 * c * (1.0 - grid.node(j));

  std::vector<double> f(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) {
    f[static_cast<std::size_t>(j)] = first * std::exp(-s[static_cast<std::size_t>(j)] * first);
  }
  for (std::size_t step = 1; step < lams.size(); ++step) {
    const double rate = 1.0 / (2.0 * lams[step]);
    // Integrand shifted by e^{-c·rate} so the exponent stays ≤ 0.
    std::vector<double> h(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) h[j] = f[j] * std::exp((s[j] - c) * rate);
    const std::vector<double> integral = grid.integral_from_right(grid.coefficients(h));
    for (std::size_t j = 0; j < f.size(); ++j) {
      // ∫_0^{s_j} = (c/2) ∫_{x_j}^{1}
      f[j] = rate * std::exp((c - s[j]) * rate) * 0.5 * c * integral[j];
    }
  }
  return std::max(0.0, f.back());
}

double hypoexp_density(std::span<const double> lams, double c) {
  require_positive(lams, "hypoexp_density");
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw ValidationError("hypoexp_density: c must be finite and non-negative");
  }
  if (!pairwise_distinct(lams)) {
    throw ValidationError("hypoexp_density: weights must be pairwise distinct");
  }
  const std::size_t n = lams.size();
  if (n > 20) return hypoexp_density_recursive(lams, c);
  CompensatedSum sum;
  for (std::size_t i = 0; i < n; ++i) {
    const double l = lams[i];
    sum.add(std::exp(-c / (2.0 * l)) * std::pow(l, static_cast<double>(n) - 2.0) /
            (2.0 * prod_except(lams, i, l)));
  }
  return std::max(0.0, sum.value());
}

double lagrange_identity_sum(std::span<const double> lams) {
  const std::size_t n = lams.size();
  CompensatedSum sum;
  for (std::size_t i = 0; i < n; ++i) {
    sum.add(std::pow(lams[i], static_cast<double>(n) - 2.0) / prod_except(lams, i, lams[i]));
  }
  return sum.value();
}

namespace {

void require_split(std::span<const double> alphas, std::span<const double> betas,
                   const char* what) {
  for (double a : alphas) {
    if (!(a > 0.0)) throw ValidationError(std::string(what) + ": alphas must be positive");
  }
  for (double b : betas) {
    if (!(b <= 0.0)) throw ValidationError(std::string(what) + ": betas must be non-positive");
  }
  if (!pairwise_distinct(alphas)) {
    throw ValidationError(std::string(what) + ": alphas must be pairwise distinct");
  }
}

}  // namespace

double prob_positive_double_sum(std::span<const double> alphas, std::span<const double> betas) {
  require_split(alphas, betas, "prob_positive_double_sum");
  if (!pairwise_distinct(betas)) {
    throw ValidationError("prob_positive_double_sum: betas must be pairwise distinct");
  }
  if (alphas.empty()) return 0.0;
  if (betas.empty()) return 1.0;
  const double k = static_cast<double>(alphas.size());
  const double m = static_cast<double>(betas.size());
  CompensatedSum sum;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double a = alphas[i];
    const double pa = prod_except(alphas, i, a);
    for (std::size_t h = 0; h < betas.size(); ++h) {
      const double b = betas[h];
      // Π_{ℓ≠h} (β_ℓ - β_h) = (-1)^{m-1} Π_{ℓ≠h} (β_h - β_ℓ)
      const double pb = prod_except(betas, h, b) * (betas.size() % 2 == 1 ? 1.0 : -1.0);
      sum.add(std::pow(a, k) * std::pow(-b, m - 1.0) / ((a - b) * pa * pb));
    }
  }
  return sum.value();
}

double prob_positive_single_sum(std::span<const double> alphas, std::span<const double> betas) {
  require_split(alphas, betas, "prob_positive_single_sum");
  if (alphas.empty()) return 0.0;
  if (betas.empty()) return 1.0;
  const double power = static_cast<double>(alphas.size() + betas.size()) - 1.0;
  CompensatedSum sum;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double a = alphas[i];
    double denom = prod_except(alphas, i, a);
    for (double b : betas) denom *= a - b;
    sum.add(std::pow(a, power) / denom);
  }
  return sum.value();
}

double prob_positive_combination(std::span<const double> alphas, std::span<const double> betas) {
  const double single = prob_positive_single_sum(alphas, betas);
  if (!pairwise_distinct(betas)) return single;
  const double twofold = prob_positive_double_sum(alphas, betas);
  if (std::abs(twofold - single) > 1e-9) {
    std::ostringstream os;
    os.precision(17);
    os << "prob_positive_combination: double sum " << twofold << " and single sum " << single
       << " disagree";
    throw NumericalError(os.str());
  }
  return twofold;
}

}  // namespace collapse_gauge
