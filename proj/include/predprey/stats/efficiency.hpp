#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace predprey::stats {

/// Totals of one evaluation run, tallied from the world's event log.
struct RunRecord {
  std::int64_t run_id = 0;
  double pos_total = 0.0;
  double neg_total = 0.0;
  double caught_total = 0.0;
  std::int64_t duration_steps = 0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// pos * 1 + neg * (-0.2) + caught * (-1). Accepts fractional totals so the
/// same formula applies to per-condition means.
double task_efficiency(double pos_total, double neg_total, double caught_total);
double task_efficiency(const RunRecord& rec);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
};

MeanStd mean_std(std::span<const double> xs);

struct ConditionSummary {
  std::string condition_id;
  std::size_t n_runs = 0;
  MeanStd positive;
  MeanStd negative;
  MeanStd caught;
  MeanStd efficiency;
};

ConditionSummary summarize(std::string condition_id, std::span<const RunRecord> runs);

/// Per-run column extractors.
std::vector<double> efficiencies(std::span<const RunRecord> runs);
std::vector<double> positives(std::span<const RunRecord> runs);
std::vector<double> negatives(std::span<const RunRecord> runs);
std::vector<double> catches(std::span<const RunRecord> runs);

}  // namespace predprey::stats
