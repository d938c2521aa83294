#pragma once

#include "predprey/stats/efficiency.hpp"
#include "predprey/stats/hypothesis.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace predprey::stats {

/// Runs of one condition, as stored in a runs CSV.
struct ConditionRuns {
  std::string condition_id;
  std::vector<RunRecord> runs;
};

inline constexpr const char* kRunsHeader =
    "condition,run_id,pos_total,neg_total,caught_total,duration_steps,task_efficiency";
inline constexpr const char* kSummaryHeader =
    "condition,n_runs,positive_mean,positive_std,negative_mean,negative_std,caught_mean,caught_std,"
    "task_efficiency_mean,task_efficiency_std";
inline constexpr const char* kStatsHeader =
    "variable,condition_a,condition_b,mean_a,mean_b,f_score,p_value,cohens_d";

void write_runs_csv(const std::filesystem::path& path, const std::vector<ConditionRuns>& conditions);
/// Groups rows by condition, preserving first-appearance order.
std::vector<ConditionRuns> read_runs_csv(const std::filesystem::path& path);

void write_summary_csv(const std::filesystem::path& path, const std::vector<ConditionSummary>& rows);

/// One comparison of one variable between two conditions.
struct PairwiseStat {
  std::string variable;  // positive | negative | caught | task_efficiency
  std::string condition_a;
  std::string condition_b;
  double mean_a = 0.0;
  double mean_b = 0.0;
  AnovaResult anova;
  std::optional<double> cohens_d;
};

/// ANOVA and Cohen's d for every variable between conditions a and b.
std::vector<PairwiseStat> compare_conditions(const ConditionRuns& a, const ConditionRuns& b);

/// Infinite F is written as "inf", undefined d as "nan".
void write_stats_csv(const std::filesystem::path& path, const std::vector<PairwiseStat>& rows);

}  // namespace predprey::stats
