#include "predprey/stats/hypothesis.hpp"

#include "predprey/errors.hpp"
#include "predprey/stats/efficiency.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <limits>

namespace predprey::stats {

namespace {

double mean_of(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sum_sq_dev(std::span<const double> xs, double mean) {
  double s = 0.0;
  for (double x : xs) s += (x - mean) * (x - mean);
  return s;
}

void require_two(std::span<const double> g, const char* who) {
  if (g.size() < 2) throw InputError(std::string(who) + ": each group needs at least two samples");
}

}  // namespace

AnovaResult one_way_anova(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw InputError("one_way_anova: need at least two groups");
  std::size_t total_n = 0;
  double grand_sum = 0.0;
  for (const auto& g : groups) {
    require_two(g, "one_way_anova");
    total_n += g.size();
    for (double x : g) grand_sum += x;
  }
  const double grand_mean = grand_sum / static_cast<double>(total_n);
  double ss_between = 0.0;
  double ss_within = 0.0;
  for (const auto& g : groups) {
    const double m = mean_of(g);
    ss_between += static_cast<double>(g.size()) * (m - grand_mean) * (m - grand_mean);
    ss_within += sum_sq_dev(g, m);
  }
  AnovaResult res;
  res.df_between = static_cast<int>(groups.size()) - 1;
  res.df_within = static_cast<int>(total_n - groups.size());
  if (ss_within == 0.0) {
    bool same = true;
    const double m0 = mean_of(groups[0]);
    for (const auto& g : groups) same = same && mean_of(g) == m0;
    if (same) return res;  // F = 0, p = 1
    res.f_score = std::numeric_limits<double>::infinity();
    res.p_value = 0.0;
    res.infinite_f = true;
    return res;
  }
  const double ms_between = ss_between / res.df_between;
  const double ms_within = ss_within / res.df_within;
  res.f_score = ms_between / ms_within;
  boost::math::fisher_f_distribution<double> dist(res.df_between, res.df_within);
  res.p_value = boost::math::cdf(boost::math::complement(dist, res.f_score));
  return res;
}

std::optional<double> cohens_d(std::span<const double> g1, std::span<const double> g2) {
  require_two(g1, "cohens_d");
  require_two(g2, "cohens_d");
  const double m1 = mean_of(g1);
  const double m2 = mean_of(g2);
  const double n1 = static_cast<double>(g1.size());
  const double n2 = static_cast<double>(g2.size());
  const double pooled_var = (sum_sq_dev(g1, m1) + sum_sq_dev(g2, m2)) / (n1 + n2 - 2.0);
  if (pooled_var <= 0.0) return std::nullopt;
  return (m1 - m2) / std::sqrt(pooled_var);
}

double pooled_t(std::span<const double> g1, std::span<const double> g2) {
  require_two(g1, "pooled_t");
  require_two(g2, "pooled_t");
  const double m1 = mean_of(g1);
  const double m2 = mean_of(g2);
  const double n1 = static_cast<double>(g1.size());
  const double n2 = static_cast<double>(g2.size());
  const double pooled_var = (sum_sq_dev(g1, m1) + sum_sq_dev(g2, m2)) / (n1 + n2 - 2.0);
  return (m1 - m2) / std::sqrt(pooled_var * (1.0 / n1 + 1.0 / n2));
}

WelchResult welch_t_test(std::span<const double> g1, std::span<const double> g2) {
  require_two(g1, "welch_t_test");
  require_two(g2, "welch_t_test");
  const double n1 = static_cast<double>(g1.size());
  const double n2 = static_cast<double>(g2.size());
  const double m1 = mean_of(g1);
  const double m2 = mean_of(g2);
  const double v1 = sum_sq_dev(g1, m1) / (n1 - 1.0) / n1;
  const double v2 = sum_sq_dev(g2, m2) / (n2 - 1.0) / n2;
  WelchResult res;
  if (v1 + v2 == 0.0) {
    res.t = m1 > m2 ? std::numeric_limits<double>::infinity()
                    : (m1 < m2 ? -std::numeric_limits<double>::infinity() : 0.0);
    res.df = n1 + n2 - 2.0;
    res.p_greater = m1 > m2 ? 0.0 : (m1 < m2 ? 1.0 : 0.5);
    return res;
  }
  res.t = (m1 - m2) / std::sqrt(v1 + v2);
  res.df = (v1 + v2) * (v1 + v2) / (v1 * v1 / (n1 - 1.0) + v2 * v2 / (n2 - 1.0));
  boost::math::students_t_distribution<double> dist(res.df);
  res.p_greater = boost::math::cdf(boost::math::complement(dist, res.t));
  return res;
}

std::vector<double> moment_matched_sample(double mean, double sd, std::size_t n) {
  if (n < 2) throw InputError("moment_matched_sample: need n >= 2");
  std::vector<double> base(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = static_cast<double>(i);
  const MeanStd ms = mean_std(base);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = mean + sd * (base[i] - ms.mean) / ms.std;
  return out;
}

}  // namespace predprey::stats
