#include "predprey/stats/kde.hpp"

#include "predprey/errors.hpp"
#include "predprey/format.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace predprey::stats {

double KdeGrid::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * cell_area();
}

double scott_bandwidth(std::span<const env::Vec2> samples) {
  if (samples.size() < 2) throw InputError("scott_bandwidth: need at least two samples");
  const double n = static_cast<double>(samples.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : samples) {
    mx += p.x;
    my += p.y;
  }
  mx /= n;
  my /= n;
  double vx = 0.0, vy = 0.0;
  for (const auto& p : samples) {
    vx += (p.x - mx) * (p.x - mx);
    vy += (p.y - my) * (p.y - my);
  }
  const double sd = 0.5 * (std::sqrt(vx / (n - 1.0)) + std::sqrt(vy / (n - 1.0)));
  return std::pow(n, -1.0 / 6.0) * sd;
}

namespace {

// Mass of N(mu, h^2) in each of `cells` equal bins over [lo, hi], renormalised
// to sum to one.
void bin_masses(double mu, double h, double lo, double hi, int cells, double* out) {
  const double step = (hi - lo) / cells;
  auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - mu) / (h * std::sqrt(2.0))); };
  double prev = cdf(lo);
  double total = 0.0;
  for (int c = 0; c < cells; ++c) {
    const double next = cdf(lo + (c + 1) * step);
    out[c] = next - prev;
    total += out[c];
    prev = next;
  }
  if (total <= 0.0) {
    // Kernel lies numerically outside the extent: assign it to the nearest bin.
    std::fill(out, out + cells, 0.0);
    const int idx = std::clamp(static_cast<int>(std::floor((mu - lo) / step)), 0, cells - 1);
    out[idx] = 1.0;
    return;
  }
  for (int c = 0; c < cells; ++c) out[c] /= total;
}

}  // namespace

KdeGrid kde_occupancy(std::span<const env::Vec2> samples, std::string entity_kind,
                      std::optional<double> bandwidth, int width, int height,
                      const env::Rect& extent) {
  if (samples.empty()) throw InputError("kde_occupancy: no samples for '" + entity_kind + "'");
  if (width <= 0 || height <= 0) throw InputError("kde_occupancy: grid dimensions must be positive");
  if (!(extent.max.x > extent.min.x && extent.max.y > extent.min.y)) {
    throw InputError("kde_occupancy: degenerate extent");
  }
  const double h = bandwidth ? *bandwidth : scott_bandwidth(samples);
  if (!(h > 0.0) || !std::isfinite(h)) throw InputError("kde_occupancy: bandwidth must be positive");

  const auto n = static_cast<Eigen::Index>(samples.size());
  // Separable kernel: grid = My^T * Mx with per-sample bin masses along each axis.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> mx(n, width), my(n, height);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = samples[static_cast<std::size_t>(i)];
    bin_masses(p.x, h, extent.min.x, extent.max.x, width, mx.row(i).data());
    bin_masses(p.y, h, extent.min.y, extent.max.y, height, my.row(i).data());
  }
  KdeGrid grid;
  grid.width = width;
  grid.height = height;
  grid.bandwidth = h;
  grid.entity_kind = std::move(entity_kind);
  grid.extent = extent;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> g = my.transpose() * mx;
  g /= grid.cell_area();
  grid.values.assign(g.data(), g.data() + g.size());
  return grid;
}

std::vector<env::Vec2> positions_of(std::span<const env::TrajectoryRow> rows,
                                    const std::string& entity_kind) {
  std::vector<env::Vec2> out;
  for (const auto& r : rows) {
    if (r.entity_kind == entity_kind) out.push_back({r.x, r.y});
  }
  return out;
}

void write_grid_text(const std::filesystem::path& path, const KdeGrid& grid) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (int row = grid.height - 1; row >= 0; --row) {
    for (int col = 0; col < grid.width; ++col) {
      if (col) out << ' ';
      out << format_double(grid.at(col, row));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_grid_pgm(const std::filesystem::path& path, const KdeGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const double peak = *std::max_element(grid.values.begin(), grid.values.end());
  out << "P5\n" << grid.width << ' ' << grid.height << "\n255\n";
  for (int row = grid.height - 1; row >= 0; --row) {
    for (int col = 0; col < grid.width; ++col) {
      const double v = peak > 0.0 ? grid.at(col, row) / peak : 0.0;
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v))));
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace predprey::stats
