#pragma once

#include "predprey/env/geometry.hpp"
#include "predprey/env/trajectory.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace predprey::stats {

/// Occupancy density on a regular grid covering `extent`. Row 0 is the
/// lowest-y row. Each sample contributes a Gaussian kernel integrated over
/// the cells and renormalised to unit mass inside the extent, so
/// sum(values) * cell_area() equals the sample count.
struct KdeGrid {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major, height rows of width cells
  double bandwidth = 0.0;
  std::string entity_kind;
  env::Rect extent;

  double at(int col, int row) const { return values[static_cast<std::size_t>(row) * width + col]; }
  double cell_width() const { return (extent.max.x - extent.min.x) / width; }
  double cell_height() const { return (extent.max.y - extent.min.y) / height; }
  double cell_area() const { return cell_width() * cell_height(); }
  double integral() const;
};

/// Scott's rule for 2-D data: n^(-1/6) times the mean of the per-axis sample
/// standard deviations.
double scott_bandwidth(std::span<const env::Vec2> samples);

/// Throws InputError on an empty sample set or non-positive bandwidth/grid.
KdeGrid kde_occupancy(std::span<const env::Vec2> samples, std::string entity_kind,
                      std::optional<double> bandwidth, int width, int height,
                      const env::Rect& extent);

/// Positions of every trajectory row whose entity_kind matches.
std::vector<env::Vec2> positions_of(std::span<const env::TrajectoryRow> rows,
                                    const std::string& entity_kind);

/// Whitespace-separated matrix, top row = highest y, one grid row per line.
void write_grid_text(const std::filesystem::path& path, const KdeGrid& grid);
/// Binary greyscale PGM scaled so the densest cell is white.
void write_grid_pgm(const std::filesystem::path& path, const KdeGrid& grid);

}  // namespace predprey::stats
