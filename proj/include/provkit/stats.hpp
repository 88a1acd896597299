#ifndef PROVKIT_STATS_HPP
#define PROVKIT_STATS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "provkit/similarity.hpp"

namespace provkit {

struct BootstrapSpec {
  std::size_t rounds = 100;
  std::size_t sample_size = 30;
  /// Draw with replacement. Off by default: each round samples distinct
  /// values.
  bool replacement = false;
  /// Added to the round index when seeding (round r uses seed
  /// seed_base + r), so independent experiments can decorrelate draws.
  std::uint64_t seed_base = 0;

  void validate() const;  // throws std::invalid_argument
};

/// One mean per round. Round r draws sample_size values from `values` with a
/// SplitMix64 generator seeded with seed_base + r, then averages them.
/// Deterministic across runs and platforms. Throws std::invalid_argument on
/// an empty population or when sample_size exceeds the population without
/// replacement.
std::vector<double> bootstrap_means(std::span<const double> values,
                                    const BootstrapSpec& spec = {});

struct TTestResult {
  double t_statistic = 0.0;
  double p_value = 1.0;  // two-tailed
  double df = 0.0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

enum class VarianceModel {
  Unequal,  // Welch, with Welch-Satterthwaite degrees of freedom
  Pooled,   // classic Student assuming equal variances
};

/// Welch's unequal-variance two-sample t-test with a two-tailed p-value via
/// the regularized incomplete beta function. Each sample needs >= 2 values.
/// When both samples have zero variance: equal means give t = 0, p = 1;
/// different means are a degenerate case and throw std::invalid_argument.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// Same contract with a selectable variance model.
TTestResult two_sample_t_test(std::span<const double> a,
                              std::span<const double> b,
                              VarianceModel model = VarianceModel::Unequal);

/// Two-tailed p-value of Student's t distribution with df degrees of
/// freedom, P(|T| >= |t|).
double student_t_two_tailed_p(double t, double df);

/// Bootstrap both classes' similarity ratios at one pattern length, then
/// t-test the two lists of round means against each other.
TTestResult class_comparison(std::span<const SimilarityProfile> class_a,
                             std::span<const SimilarityProfile> class_b,
                             std::size_t length,
                             const BootstrapSpec& spec = {},
                             VarianceModel model = VarianceModel::Unequal);

/// Four decimal places; values below 1e-4 print as "<10^-4".
std::string format_p_value(double p);

}  // namespace provkit

#endif  // PROVKIT_STATS_HPP
