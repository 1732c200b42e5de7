#pragma once

#include <filesystem>
#include <map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kmig/geometry.hpp"
#include "kmig/types.hpp"

namespace kmig {

/// Dielectric disk embedded in the background.
struct SmallObject {
  Point center;
  double radius = 0.015;  // m
  double eps_rel = 3.0;   // relative permittivity

  double contrast() const { return eps_rel - 1.0; }
};

/// Zero-radius scatterer; `strength` carries area x contrast (m^2).
struct PointTarget {
  Point center;
  Complex strength{1.0, 0.0};
};

struct Scene {
  std::vector<SmallObject> objects;
  std::vector<PointTarget> point_targets;
  double region_halfwidth = 0.2;  // m, search region is [-h, h]^2

  /// Disks strictly inside the region and both rings, pairwise disjoint;
  /// point targets strictly inside the region and distinct.
  void validate(const ArrayConfig& config) const;

  bool empty() const { return objects.empty() && point_targets.empty(); }
  bool is_point_scene() const { return objects.empty(); }
};

/// Scattered fields keyed by (emitter m, receiver n), both 1-based.
using FieldMap = std::map<std::pair<int, int>, Complex>;

/// G(x, y) = -(i/4) H0^(1)(k |x - y|). Coincident points throw SingularityError.
Complex green(double k, Point x, Point y);

/// Quadrature cell used when none is given: min(lambda/40, smallest radius/8).
double default_cell_size(double k, const Scene& scene);

/// Born-approximation scattered field
///   k^2 sum_D chi(y) G(receiver, y) G(y, emitter) dy,   chi = eps_rel - 1,
/// with disks integrated by a midpoint rule on a square lattice clipped to
/// each disk (cut cells weighted by their clipped area at its centroid), plus the closed form of every point target.
/// Throws ConfigError if the cell exceeds min(lambda/10, radius/2).
Complex born_scattered(const Scene& scene, double k, Point emitter, Point receiver,
                       double cell);

/// strength * k^2 * G(receiver, center) * G(center, emitter).
Complex point_target_scattered(Point center, Complex strength, double k, Point emitter,
                               Point receiver);

/// Fields for every measured (m, n) pair of the array. `cell` <= 0 selects
/// default_cell_size.
FieldMap synthesize_fields(const Scene& scene, const ArrayConfig& config, double k,
                           double cell = 0.0);

/// Scene JSON: either a bare list of {"center": [x, y], "radius", "eps_rel"}
/// or an object with "objects", optional "point_targets" (each
/// {"center", "strength"} with strength a number or [re, im]) and optional
/// "region_halfwidth".
Scene parse_scene(const nlohmann::json& j);
Scene load_scene(const std::filesystem::path& path);
nlohmann::json to_json(const Scene& scene);

}  // namespace kmig
