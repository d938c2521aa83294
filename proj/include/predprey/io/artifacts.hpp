#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace predprey::io {

/// git-describe style identifier baked in at build time.
std::string build_id();

/// $PREDPREY_OUT if set and non-empty, otherwise "runs".
std::filesystem::path default_output_root();

/// Output schema versions; bump when a file layout changes.
inline constexpr int kMetricsSchema = 1;
inline constexpr int kRunsSchema = 1;
inline constexpr int kSummarySchema = 1;
inline constexpr int kStatsSchema = 1;
inline constexpr int kTrajectorySchema = 1;
inline constexpr int kGridSchema = 1;

struct ManifestEntry {
  std::string file;
  std::string schema;  // e.g. "metrics/1"
};

/// Writes seed.txt and manifest.txt (subcommand, seed, build id, one line per
/// output with its schema) into `dir`, creating it if needed.
void write_manifest(const std::filesystem::path& dir, const std::string& subcommand, std::uint64_t seed,
                    const std::vector<ManifestEntry>& outputs);

/// Writes `text` to `path`, throwing IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace predprey::io
