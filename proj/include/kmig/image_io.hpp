#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "kmig/imaging.hpp"

namespace kmig {

/// `x,y,value` rows, x fastest, starting at the lowest y.
void write_grid_csv(std::ostream& out, const ImageGrid& grid);

/// Binary PGM (P5), 8 or 16 bit (big-endian), values clamped to [0, 1].
/// First image row is the highest y so +x points right and +y up.
void write_grid_pgm(std::ostream& out, const ImageGrid& grid, int bits = 8);

/// Grid geometry, normalization and warnings; callers add run metadata.
nlohmann::json grid_metadata(const ImageGrid& grid);
nlohmann::json peaks_to_json(const std::vector<Peak>& peaks);

struct GridComparison {
  double pearson = 0.0;
  double max_abs_gap = 0.0;
  Point argmax_offset;        // argmax(b) - argmax(a), meters
  int argmax_offset_cells = 0;  // Chebyshev distance in pixels
  std::size_t pixels = 0;
  /// One of the grids is constant (e.g. all zero) on the compared pixels.
  bool degenerate = false;
};

/// Compares two grids of identical geometry, optionally restricted to the
/// pixels where `window` is nonzero. Argmax offsets use the whole grid.
GridComparison compare_grids(const ImageGrid& a, const ImageGrid& b,
                             const std::vector<std::uint8_t>* window = nullptr);

/// Pixels within `radius` of any of the centers.
std::vector<std::uint8_t> disk_window(const ImageGrid& grid, const std::vector<Point>& centers,
                                      double radius);

nlohmann::json to_json(const GridComparison& c);

}  // namespace kmig
