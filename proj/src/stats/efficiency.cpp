#include "predprey/stats/efficiency.hpp"

#include "predprey/env/world_config.hpp"
#include "predprey/errors.hpp"

#include <cmath>

namespace predprey::stats {

double task_efficiency(double pos_total, double neg_total, double caught_total) {
  return pos_total * env::kPositiveReward + neg_total * env::kNegativeReward +
         caught_total * env::kCaughtReward;
}

double task_efficiency(const RunRecord& rec) {
  return task_efficiency(rec.pos_total, rec.neg_total, rec.caught_total);
}

MeanStd mean_std(std::span<const double> xs) {
  if (xs.empty()) throw InputError("mean_std: empty sample");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

namespace {

template <typename F>
std::vector<double> column(std::span<const RunRecord> runs, F f) {
  std::vector<double> out;
  out.reserve(runs.size());
  for (const auto& r : runs) out.push_back(f(r));
  return out;
}

}  // namespace

std::vector<double> efficiencies(std::span<const RunRecord> runs) {
  return column(runs, [](const RunRecord& r) { return task_efficiency(r); });
}
std::vector<double> positives(std::span<const RunRecord> runs) {
  return column(runs, [](const RunRecord& r) { return r.pos_total; });
}
std::vector<double> negatives(std::span<const RunRecord> runs) {
  return column(runs, [](const RunRecord& r) { return r.neg_total; });
}
std::vector<double> catches(std::span<const RunRecord> runs) {
  return column(runs, [](const RunRecord& r) { return r.caught_total; });
}

ConditionSummary summarize(std::string condition_id, std::span<const RunRecord> runs) {
  ConditionSummary s;
  s.condition_id = std::move(condition_id);
  s.n_runs = runs.size();
  s.positive = mean_std(positives(runs));
  s.negative = mean_std(negatives(runs));
  s.caught = mean_std(catches(runs));
  s.efficiency = mean_std(efficiencies(runs));
  return s;
}

}  // namespace predprey::stats
