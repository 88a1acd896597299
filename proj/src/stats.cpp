#include "provkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "provkit/rng.hpp"

namespace provkit {

namespace {

struct Moments {
  double mean;
  double variance;  // sample variance (n-1)
};

Moments moments(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    ss += d * d;
  }
  return {mean, xs.size() > 1 ? ss / (n - 1.0) : 0.0};
}

// Continued fraction for the regularized incomplete beta function
// (modified Lentz), as in Numerical Recipes' betacf.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 300;
  constexpr double kEpsilon = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEpsilon) break;
  }
  return h;
}

// Regularized incomplete beta I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  // Use the continued fraction directly where it converges fast, else the
  // symmetry relation I_x(a,b) = 1 - I_{1-x}(b,a).
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

TTestResult t_test_impl(std::span<const double> a, std::span<const double> b,
                        VarianceModel model) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("t-test needs at least 2 values per sample");
  }
  const auto ma = moments(a);
  const auto mb = moments(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());

  TTestResult result;
  result.mean_a = ma.mean;
  result.mean_b = mb.mean;
  result.n_a = a.size();
  result.n_b = b.size();

  if (ma.variance == 0.0 && mb.variance == 0.0) {
    if (ma.mean == mb.mean) {
      result.t_statistic = 0.0;
      result.p_value = 1.0;
      result.df = na + nb - 2.0;
      return result;
    }
    throw std::invalid_argument(
        "degenerate t-test: zero variance in both samples with unequal "
        "means");
  }

  double denom = 0.0;
  if (model == VarianceModel::Unequal) {
    const double ra = ma.variance / na;
    const double rb = mb.variance / nb;
    denom = std::sqrt(ra + rb);
    result.df = (ra + rb) * (ra + rb) /
                (ra * ra / (na - 1.0) + rb * rb / (nb - 1.0));
  } else {
    const double pooled = ((na - 1.0) * ma.variance + (nb - 1.0) * mb.variance) /
                          (na + nb - 2.0);
    denom = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    result.df = na + nb - 2.0;
  }
  result.t_statistic = (ma.mean - mb.mean) / denom;
  result.p_value = student_t_two_tailed_p(result.t_statistic, result.df);
  return result;
}

}  // namespace

void BootstrapSpec::validate() const {
  if (rounds < 2) throw std::invalid_argument("bootstrap needs >= 2 rounds");
  if (sample_size < 2) {
    throw std::invalid_argument("bootstrap needs sample_size >= 2");
  }
}

std::vector<double> bootstrap_means(std::span<const double> values,
                                    const BootstrapSpec& spec) {
  spec.validate();
  if (values.empty()) {
    throw std::invalid_argument("bootstrap population is empty");
  }
  if (!spec.replacement && spec.sample_size > values.size()) {
    throw std::invalid_argument(
        "sample_size " + std::to_string(spec.sample_size) +
        " exceeds population " + std::to_string(values.size()) +
        " without replacement");
  }

  std::vector<double> means;
  means.reserve(spec.rounds);
  std::vector<std::size_t> order(values.size());
  for (std::size_t round = 0; round < spec.rounds; ++round) {
    SplitMix64 rng(spec.seed_base + round);
    double sum = 0.0;
    if (spec.replacement) {
      for (std::size_t k = 0; k < spec.sample_size; ++k) {
        sum += values[rng.below(values.size())];
      }
    } else {
      // Partial Fisher-Yates: the first sample_size slots end up holding a
      // uniform draw of distinct indices.
      std::iota(order.begin(), order.end(), std::size_t{0});
      for (std::size_t k = 0; k < spec.sample_size; ++k) {
        const std::size_t j = k + rng.below(order.size() - k);
        std::swap(order[k], order[j]);
        sum += values[order[k]];
      }
    }
    means.push_back(sum / static_cast<double>(spec.sample_size));
  }
  return means;
}

double student_t_two_tailed_p(double t, double df) {
  if (df <= 0.0 || !std::isfinite(df)) {
    throw std::invalid_argument("t distribution needs positive finite df");
  }
  if (!std::isfinite(t)) return 0.0;
  const double x = df / (df + t * t);
  return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

TTestResult welch_t_test(std::span<const double> a,
                         std::span<const double> b) {
  return t_test_impl(a, b, VarianceModel::Unequal);
}

TTestResult two_sample_t_test(std::span<const double> a,
                              std::span<const double> b,
                              VarianceModel model) {
  return t_test_impl(a, b, model);
}

TTestResult class_comparison(std::span<const SimilarityProfile> class_a,
                             std::span<const SimilarityProfile> class_b,
                             std::size_t length, const BootstrapSpec& spec,
                             VarianceModel model) {
  if (class_a.empty() || class_b.empty()) {
    throw std::invalid_argument("class comparison needs non-empty classes");
  }
  std::vector<double> ratios_a;
  ratios_a.reserve(class_a.size());
  for (const auto& prof : class_a) ratios_a.push_back(prof.ratio(length));
  std::vector<double> ratios_b;
  ratios_b.reserve(class_b.size());
  for (const auto& prof : class_b) ratios_b.push_back(prof.ratio(length));

  const auto means_a = bootstrap_means(ratios_a, spec);
  const auto means_b = bootstrap_means(ratios_b, spec);
  return two_sample_t_test(means_a, means_b, model);
}

std::string format_p_value(double p) {
  if (p < 1e-4) return "<10^-4";
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.4f", p);
  return buf;
}

}  // namespace provkit
