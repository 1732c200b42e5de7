#include "kmig/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "kmig/error.hpp"
#include "kmig/text_format.hpp"

namespace kmig {

void write_grid_csv(std::ostream& out, const ImageGrid& grid) {
  out << "x,y,value\n";
  for (int j = 0; j < grid.height; ++j) {
    for (int i = 0; i < grid.width; ++i) {
      const Point p = grid.position(i, j);
      out << format_number(p.x, 9) << ',' << format_number(p.y, 9) << ','
          << format_number(grid.at(i, j)) << '\n';
    }
  }
}

void write_grid_pgm(std::ostream& out, const ImageGrid& grid, int bits) {
  if (bits != 8 && bits != 16) throw ConfigError("PGM depth must be 8 or 16 bits");
  const int maxval = bits == 8 ? 255 : 65535;
  out << "P5\n" << grid.width << ' ' << grid.height << '\n' << maxval << '\n';
  std::vector<char> row;
  for (int j = grid.height - 1; j >= 0; --j) {
    row.clear();
    for (int i = 0; i < grid.width; ++i) {
      const double v = std::clamp(grid.at(i, j), 0.0, 1.0);
      const auto level = static_cast<unsigned>(std::lround(v * maxval));
      if (bits == 16) row.push_back(static_cast<char>((level >> 8) & 0xff));
      row.push_back(static_cast<char>(level & 0xff));
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

nlohmann::json grid_metadata(const ImageGrid& grid) {
  return {
      {"origin", {grid.origin.x, grid.origin.y}},
      {"spacing", grid.spacing},
      {"width", grid.width},
      {"height", grid.height},
      {"orientation", "row-major from lowest y; +x right, +y up"},
      {"normalization_scale", grid.scale},
      {"warnings", grid.warnings},
  };
}

nlohmann::json peaks_to_json(const std::vector<Peak>& peaks) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : peaks) {
    out.push_back({{"x", p.position.x}, {"y", p.position.y}, {"value", p.value}, {"i", p.i},
                   {"j", p.j}});
  }
  return out;
}

GridComparison compare_grids(const ImageGrid& a, const ImageGrid& b,
                             const std::vector<std::uint8_t>* window) {
  if (a.width != b.width || a.height != b.height || a.origin != b.origin ||
      a.spacing != b.spacing) {
    throw GeometryMismatch("grids to compare differ in geometry");
  }
  if (window && window->size() != a.size()) throw ConfigError("comparison window has wrong size");
  GridComparison c;
  double sa = 0.0, sb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (window && !(*window)[k]) continue;
    sa += a.values[k];
    sb += b.values[k];
    ++c.pixels;
    c.max_abs_gap = std::max(c.max_abs_gap, std::abs(a.values[k] - b.values[k]));
  }
  if (c.pixels > 0) {
    const double ma = sa / c.pixels;
    const double mb = sb / c.pixels;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (window && !(*window)[k]) continue;
      const double da = a.values[k] - ma;
      const double db = b.values[k] - mb;
      cov += da * db;
      va += da * da;
      vb += db * db;
    }
    if (va > 0.0 && vb > 0.0) {
      c.pearson = cov / std::sqrt(va * vb);
    } else {
      c.degenerate = true;
    }
  } else {
    c.degenerate = true;
  }
  const Peak pa = argmax(a);
  const Peak pb = argmax(b);
  c.argmax_offset = pb.position - pa.position;
  c.argmax_offset_cells = std::max(std::abs(pb.i - pa.i), std::abs(pb.j - pa.j));
  return c;
}

std::vector<std::uint8_t> disk_window(const ImageGrid& grid, const std::vector<Point>& centers,
                                      double radius) {
  std::vector<std::uint8_t> w(grid.size(), 0);
  for (int j = 0; j < grid.height; ++j) {
    for (int i = 0; i < grid.width; ++i) {
      const Point p = grid.position(i, j);
      const bool inside = std::any_of(centers.begin(), centers.end(),
                                      [&](Point c) { return distance(p, c) <= radius; });
      w[static_cast<std::size_t>(j) * grid.width + i] = inside ? 1 : 0;
    }
  }
  return w;
}

nlohmann::json to_json(const GridComparison& c) {
  return {
      {"pearson", c.pearson},
      {"max_abs_gap", c.max_abs_gap},
      {"argmax_offset", {c.argmax_offset.x, c.argmax_offset.y}},
      {"argmax_offset_cells", c.argmax_offset_cells},
      {"pixels", c.pixels},
      {"degenerate", c.degenerate},
  };
}

}  // namespace kmig
