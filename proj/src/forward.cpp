#include "kmig/forward.hpp"

#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "kmig/error.hpp"
#include "kmig/specfun.hpp"

namespace kmig {

Complex green(double k, Point x, Point y) {
  const double d = distance(x, y);
  if (!(d > 0.0)) throw SingularityError("Green's function evaluated at coincident points");
  return Complex(0.0, -0.25) * specfun::hankel1_0(k * d);
}

double default_cell_size(double k, const Scene& scene) {
  double cell = 2.0 * kPi / k / 40.0;
  for (const auto& o : scene.objects) cell = std::min(cell, o.radius / 8.0);
  return cell;
}

namespace {

// Unit lattice axis for one disk. Tied to the station directions so that
// rotating scene and stations together rotates the lattice with them; only
// the axis modulo 90 degrees matters.
Point lattice_axis(Point center, Point emitter, Point receiver) {
  const Point to_e = emitter - center;
  const Point to_r = receiver - center;
  const Point ue = to_e * (1.0 / to_e.norm());
  const Point ur = to_r * (1.0 / to_r.norm());
  Point axis = ue + ur;
  const double len = axis.norm();
  if (len < 1e-6) return {-ue.y, ue.x};
  return axis * (1.0 / len);
}

struct Node {
  double a, b, weight;
};

// Quadrature nodes of a disk of radius r centred at the origin: interior
// cells keep their midpoint, cells cut by the boundary carry the clipped
// area at the clipped centroid (both from a sub-lattice). Total weight is
// exactly pi r^2.
std::vector<Node> disk_nodes(double radius, double cell) {
  constexpr int kSub = 32;
  const int half = static_cast<int>(std::ceil(radius / cell));
  const double r2 = radius * radius;
  std::vector<Node> nodes;
  double total = 0.0;
  for (int i = -half; i < half; ++i) {
    for (int j = -half; j < half; ++j) {
      const double a0 = i * cell, b0 = j * cell;
      const double fa = std::max(a0 * a0, (a0 + cell) * (a0 + cell));
      const double fb = std::max(b0 * b0, (b0 + cell) * (b0 + cell));
      if (fa + fb <= r2) {
        nodes.push_back({a0 + 0.5 * cell, b0 + 0.5 * cell, cell * cell});
        total += cell * cell;
        continue;
      }
      int inside = 0;
      double sa = 0.0, sb = 0.0;
      for (int p = 0; p < kSub; ++p) {
        const double a = a0 + (p + 0.5) * cell / kSub;
        for (int q = 0; q < kSub; ++q) {
          const double b = b0 + (q + 0.5) * cell / kSub;
          if (a * a + b * b > r2) continue;
          ++inside;
          sa += a;
          sb += b;
        }
      }
      if (inside == 0) continue;
      const double w = cell * cell * inside / (kSub * kSub);
      nodes.push_back({sa / inside, sb / inside, w});
      total += w;
    }
  }
  const double fix = kPi * r2 / total;
  for (auto& n : nodes) n.weight *= fix;
  return nodes;
}

const std::vector<Node>& cached_nodes(double radius, double cell) {
  thread_local double last_radius = -1.0, last_cell = -1.0;
  thread_local std::vector<Node> nodes;
  if (radius != last_radius || cell != last_cell) {
    nodes = disk_nodes(radius, cell);
    last_radius = radius;
    last_cell = cell;
  }
  return nodes;
}

Complex disk_integral(const SmallObject& obj, double k, Point emitter, Point receiver,
                      double cell) {
  const Point u = lattice_axis(obj.center, emitter, receiver);
  const Point v{-u.y, u.x};
  Complex sum{0.0, 0.0};
  for (const Node& n : cached_nodes(obj.radius, cell)) {
    const Point y = obj.center + u * n.a + v * n.b;
    sum += n.weight * (green(k, receiver, y) * green(k, y, emitter));
  }
  return sum;
}

}  // namespace

Complex point_target_scattered(Point center, Complex strength, double k, Point emitter,
                               Point receiver) {
  if (strength == Complex(0.0, 0.0)) return {0.0, 0.0};
  return strength * (k * k) * green(k, receiver, center) * green(k, center, emitter);
}

Complex born_scattered(const Scene& scene, double k, Point emitter, Point receiver,
                       double cell) {
  if (!(k > 0.0)) throw ConfigError("wavenumber must be positive");
  const double lambda = 2.0 * kPi / k;
  Complex total{0.0, 0.0};
  for (const auto& obj : scene.objects) {
    if (!(cell > 0.0) || cell > lambda / 10.0 || cell > obj.radius / 2.0) {
      throw ConfigError("quadrature cell " + std::to_string(cell) +
                        " m too coarse: need <= min(lambda/10, radius/2)");
    }
    if (distance(emitter, obj.center) <= obj.radius ||
        distance(receiver, obj.center) <= obj.radius) {
      throw SingularityError("station inside a scattering disk");
    }
    if (obj.contrast() == 0.0) continue;
    total += (k * k * obj.contrast()) * disk_integral(obj, k, emitter, receiver, cell);
  }
  for (const auto& t : scene.point_targets) {
    total += point_target_scattered(t.center, t.strength, k, emitter, receiver);
  }
  return total;
}

FieldMap synthesize_fields(const Scene& scene, const ArrayConfig& config, double k,
                           double cell) {
  config.validate();
  scene.validate(config);
  if (cell <= 0.0) cell = default_cell_size(k, scene);
  FieldMap fields;
  for (int m = 1; m <= config.emitter_count; ++m) {
    const Point e = config.emitter_position(m);
    for (int n = 1; n <= config.receiver_count; ++n) {
      if (!config.in_aperture(n, m)) continue;
      fields[{m, n}] = born_scattered(scene, k, e, config.receiver_position(n), cell);
    }
  }
  return fields;
}

void Scene::validate(const ArrayConfig& config) const {
  if (!(region_halfwidth > 0.0)) throw ConfigError("region_halfwidth must be positive");
  if (region_halfwidth * std::sqrt(2.0) >= config.inner_radius()) {
    throw ConfigError("search region must lie inside both rings");
  }
  auto inside_region = [this](Point c, double r) {
    return std::abs(c.x) + r < region_halfwidth && std::abs(c.y) + r < region_halfwidth;
  };
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto& o = objects[i];
    if (!(o.radius > 0.0)) throw ConfigError("object radius must be positive");
    if (!(o.eps_rel > 0.0)) throw ConfigError("object eps_rel must be positive");
    if (!inside_region(o.center, o.radius)) {
      throw ConfigError("object " + std::to_string(i) + " is not strictly inside the region");
    }
    if (o.center.norm() + o.radius >= config.inner_radius()) {
      throw ConfigError("object " + std::to_string(i) + " is not inside both rings");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (distance(o.center, objects[j].center) <= o.radius + objects[j].radius) {
        throw ConfigError("objects " + std::to_string(j) + " and " + std::to_string(i) +
                          " overlap");
      }
    }
  }
  for (std::size_t i = 0; i < point_targets.size(); ++i) {
    const auto& t = point_targets[i];
    if (!std::isfinite(t.strength.real()) || !std::isfinite(t.strength.imag())) {
      throw ConfigError("point target strength must be finite");
    }
    if (!inside_region(t.center, 0.0)) {
      throw ConfigError("point target " + std::to_string(i) +
                        " is not strictly inside the region");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (point_targets[j].center == t.center) {
        throw ConfigError("point targets " + std::to_string(j) + " and " +
                          std::to_string(i) + " coincide");
      }
    }
  }
}

namespace {

Point read_point(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("center must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

SmallObject read_object(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("scene object must be a JSON object");
  SmallObject o;
  bool has_center = false;
  for (const auto& [key, v] : j.items()) {
    if (key == "center") {
      o.center = read_point(v);
      has_center = true;
    } else if (key == "radius") {
      o.radius = v.get<double>();
    } else if (key == "eps_rel") {
      o.eps_rel = v.get<double>();
    } else {
      throw ConfigError("unknown scene object key \"" + key + "\"");
    }
  }
  if (!has_center) throw ConfigError("scene object lacks \"center\"");
  return o;
}

PointTarget read_point_target(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("point target must be a JSON object");
  PointTarget t;
  bool has_center = false;
  for (const auto& [key, v] : j.items()) {
    if (key == "center") {
      t.center = read_point(v);
      has_center = true;
    } else if (key == "strength") {
      if (v.is_number()) {
        t.strength = {v.get<double>(), 0.0};
      } else if (v.is_array() && v.size() == 2) {
        t.strength = {v[0].get<double>(), v[1].get<double>()};
      } else {
        throw ConfigError("strength must be a number or [re, im]");
      }
    } else {
      throw ConfigError("unknown point target key \"" + key + "\"");
    }
  }
  if (!has_center) throw ConfigError("point target lacks \"center\"");
  return t;
}

}  // namespace

Scene parse_scene(const nlohmann::json& j) {
  Scene s;
  try {
    if (j.is_array()) {
      for (const auto& o : j) s.objects.push_back(read_object(o));
      return s;
    }
    if (!j.is_object()) throw ConfigError("scene must be a JSON list or object");
    for (const auto& [key, v] : j.items()) {
      if (key == "objects") {
        for (const auto& o : v) s.objects.push_back(read_object(o));
      } else if (key == "point_targets") {
        for (const auto& t : v) s.point_targets.push_back(read_point_target(t));
      } else if (key == "region_halfwidth") {
        s.region_halfwidth = v.get<double>();
      } else {
        throw ConfigError("unknown scene key \"" + key + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scene value has wrong type: ") + e.what());
  }
  return s;
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scene file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("scene " + path.string() + ": " + e.what());
  }
  return parse_scene(j);
}

nlohmann::json to_json(const Scene& s) {
  nlohmann::json objects = nlohmann::json::array();
  for (const auto& o : s.objects) {
    objects.push_back({{"center", {o.center.x, o.center.y}},
                       {"radius", o.radius},
                       {"eps_rel", o.eps_rel}});
  }
  nlohmann::json targets = nlohmann::json::array();
  for (const auto& t : s.point_targets) {
    targets.push_back({{"center", {t.center.x, t.center.y}},
                       {"strength", {t.strength.real(), t.strength.imag()}}});
  }
  return {{"objects", objects}, {"point_targets", targets},
          {"region_halfwidth", s.region_halfwidth}};
}

}  // namespace kmig
