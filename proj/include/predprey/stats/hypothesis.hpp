#pragma once

#include <optional>
#include <span>
#include <vector>

namespace predprey::stats {

struct AnovaResult {
  double f_score = 0.0;
  double p_value = 1.0;
  int df_between = 0;
  int df_within = 0;
  /// Zero within-group variance with differing group means.
  bool infinite_f = false;
};

/// One-way ANOVA. Requires at least two groups of at least two samples each.
/// Zero within-group variance gives F = 0 when all means agree and an
/// infinite-F result (p = 0) otherwise.
AnovaResult one_way_anova(std::span<const std::vector<double>> groups);

/// Cohen's d, (mean1 - mean2) / pooled sd with the (n - 1)-weighted pooled
/// variance. nullopt when the pooled sd is zero.
std::optional<double> cohens_d(std::span<const double> g1, std::span<const double> g2);

/// Student's two-sample t statistic with pooled variance.
double pooled_t(std::span<const double> g1, std::span<const double> g2);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_greater = 1.0;  // one-sided p for H1: mean(g1) > mean(g2)
};

WelchResult welch_t_test(std::span<const double> g1, std::span<const double> g2);

/// n samples whose sample mean and (n - 1) standard deviation are exactly
/// `mean` and `sd` (up to rounding): an evenly spaced pattern rescaled.
std::vector<double> moment_matched_sample(double mean, double sd, std::size_t n);

}  // namespace predprey::stats
