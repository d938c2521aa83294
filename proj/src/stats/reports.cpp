#include "predprey/stats/reports.hpp"

#include "predprey/errors.hpp"
#include "predprey/format.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace predprey::stats {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s, const std::filesystem::path& path, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

std::string f(double v) {
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  return format_double(v);
}

}  // namespace

void write_runs_csv(const std::filesystem::path& path, const std::vector<ConditionRuns>& conditions) {
  auto out = open_out(path);
  out << kRunsHeader << '\n';
  for (const auto& c : conditions) {
    for (const auto& r : c.runs) {
      out << c.condition_id << ',' << r.run_id << ',' << f(r.pos_total) << ',' << f(r.neg_total) << ','
          << f(r.caught_total) << ',' << r.duration_steps << ',' << f(task_efficiency(r)) << '\n';
    }
  }
  finish(out, path);
}

std::vector<ConditionRuns> read_runs_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kRunsHeader) {
    throw IoError(path.string() + ": missing or unexpected runs header");
  }
  std::vector<ConditionRuns> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 7) throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected 7 fields");
    RunRecord r;
    r.run_id = static_cast<std::int64_t>(parse_number(fields[1], path, line_no));
    r.pos_total = parse_number(fields[2], path, line_no);
    r.neg_total = parse_number(fields[3], path, line_no);
    r.caught_total = parse_number(fields[4], path, line_no);
    r.duration_steps = static_cast<std::int64_t>(parse_number(fields[5], path, line_no));
    auto it = std::find_if(out.begin(), out.end(), [&](const ConditionRuns& c) { return c.condition_id == fields[0]; });
    if (it == out.end()) {
      out.push_back({fields[0], {}});
      it = out.end() - 1;
    }
    it->runs.push_back(r);
  }
  return out;
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<ConditionSummary>& rows) {
  auto out = open_out(path);
  out << kSummaryHeader << '\n';
  for (const auto& s : rows) {
    out << s.condition_id << ',' << s.n_runs << ',' << f(s.positive.mean) << ',' << f(s.positive.std) << ','
        << f(s.negative.mean) << ',' << f(s.negative.std) << ',' << f(s.caught.mean) << ',' << f(s.caught.std)
        << ',' << f(s.efficiency.mean) << ',' << f(s.efficiency.std) << '\n';
  }
  finish(out, path);
}

std::vector<PairwiseStat> compare_conditions(const ConditionRuns& a, const ConditionRuns& b) {
  using Extract = std::vector<double> (*)(std::span<const RunRecord>);
  const std::pair<const char*, Extract> vars[] = {
      {"task_efficiency", efficiencies}, {"positive", positives}, {"negative", negatives}, {"caught", catches}};
  std::vector<PairwiseStat> out;
  for (const auto& [name, extract] : vars) {
    const std::vector<std::vector<double>> groups{extract(a.runs), extract(b.runs)};
    PairwiseStat s;
    s.variable = name;
    s.condition_a = a.condition_id;
    s.condition_b = b.condition_id;
    s.mean_a = mean_std(groups[0]).mean;
    s.mean_b = mean_std(groups[1]).mean;
    s.anova = one_way_anova(groups);
    s.cohens_d = cohens_d(groups[0], groups[1]);
    out.push_back(std::move(s));
  }
  return out;
}

void write_stats_csv(const std::filesystem::path& path, const std::vector<PairwiseStat>& rows) {
  auto out = open_out(path);
  out << kStatsHeader << '\n';
  for (const auto& s : rows) {
    out << s.variable << ',' << s.condition_a << ',' << s.condition_b << ',' << f(s.mean_a) << ','
        << f(s.mean_b) << ',' << f(s.anova.f_score) << ',' << f(s.anova.p_value) << ','
        << (s.cohens_d ? f(*s.cohens_d) : std::string("nan")) << '\n';
  }
  finish(out, path);
}

}  // namespace predprey::stats
