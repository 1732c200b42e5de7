#include "kmig/geometry.hpp"

#include <fstream>
#include <string>

#include "kmig/error.hpp"

namespace kmig {
namespace {

constexpr double kAngleSlack = 1e-9;  // degrees

bool divides_circle(int count, double step_deg) {
  return std::abs(count * step_deg - 360.0) < 1e-9;
}

double wrap_degrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  return r;
}

}  // namespace

void MediumParams::validate() const {
  if (!(permeability > 0.0) || !(permittivity > 0.0)) {
    throw ConfigError("medium permeability and permittivity must be positive");
  }
  if (conductivity != 0.0) {
    throw ConfigError("only lossless backgrounds (conductivity = 0) are supported");
  }
}

void ArrayConfig::validate() const {
  if (!(emitter_radius > 0.0) || !(receiver_radius > 0.0)) {
    throw ConfigError("ring radii must be positive");
  }
  if (emitter_count < 1 || receiver_count < 1) {
    throw ConfigError("station counts must be positive");
  }
  if (!divides_circle(emitter_count, emitter_step_deg)) {
    throw ConfigError("emitter_count * emitter_step_deg must equal 360");
  }
  if (!divides_circle(receiver_count, receiver_step_deg)) {
    throw ConfigError("receiver_count * receiver_step_deg must equal 360");
  }
  if (!(aperture_start_deg >= 0.0) || !(aperture_end_deg <= 360.0) ||
      !(aperture_start_deg <= aperture_end_deg)) {
    throw ConfigError("aperture window must satisfy 0 <= start <= end <= 360");
  }
}

double ArrayConfig::emitter_angle(int m) const {
  if (m < 1 || m > emitter_count) {
    throw IndexError("emitter index " + std::to_string(m) + " outside 1.." +
                     std::to_string(emitter_count));
  }
  return deg_to_rad(emitter_step_deg * (m - 1));
}

double ArrayConfig::receiver_angle(int n) const {
  if (n < 1 || n > receiver_count) {
    throw IndexError("receiver index " + std::to_string(n) + " outside 1.." +
                     std::to_string(receiver_count));
  }
  return deg_to_rad(receiver_step_deg * (n - 1));
}

Point ArrayConfig::emitter_position(int m) const {
  return Point::polar(emitter_radius, emitter_angle(m));
}

Point ArrayConfig::receiver_position(int n) const {
  return Point::polar(receiver_radius, receiver_angle(n));
}

bool ArrayConfig::in_aperture(int n, int m) const {
  // bounds check via the angle accessors
  (void)receiver_angle(n);
  (void)emitter_angle(m);
  const double rel = wrap_degrees(receiver_step_deg * (n - 1) - emitter_step_deg * (m - 1));
  return rel >= aperture_start_deg - kAngleSlack && rel <= aperture_end_deg + kAngleSlack;
}

double wavenumber(const MediumParams& medium, Frequency f) {
  if (!(f.hz > 0.0) || !std::isfinite(f.hz)) {
    throw ConfigError("frequency must be positive");
  }
  return f.angular() * std::sqrt(medium.permittivity * medium.permeability);
}

double wavelength(const MediumParams& medium, Frequency f) {
  return 2.0 * kPi / wavenumber(medium, f);
}

ArraySetup parse_setup(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ArraySetup s;
  auto read_medium = [&s](const std::string& key, const nlohmann::json& v) {
    if (key == "conductivity") {
      s.medium.conductivity = v.get<double>();
    } else if (key == "permeability") {
      s.medium.permeability = v.get<double>();
    } else if (key == "permittivity") {
      s.medium.permittivity = v.get<double>();
    } else {
      return false;
    }
    return true;
  };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "emitter_radius") {
        s.array.emitter_radius = v.get<double>();
      } else if (key == "receiver_radius") {
        s.array.receiver_radius = v.get<double>();
      } else if (key == "emitter_count") {
        s.array.emitter_count = v.get<int>();
      } else if (key == "receiver_count") {
        s.array.receiver_count = v.get<int>();
      } else if (key == "emitter_step_deg") {
        s.array.emitter_step_deg = v.get<double>();
      } else if (key == "receiver_step_deg") {
        s.array.receiver_step_deg = v.get<double>();
      } else if (key == "aperture_start_deg") {
        s.array.aperture_start_deg = v.get<double>();
      } else if (key == "aperture_end_deg") {
        s.array.aperture_end_deg = v.get<double>();
      } else if (key == "medium") {
        if (!v.is_object()) throw ConfigError("\"medium\" must be an object");
        for (const auto& [mk, mv] : v.items()) {
          if (!read_medium(mk, mv)) throw ConfigError("unknown medium key \"" + mk + "\"");
        }
      } else if (!read_medium(key, v)) {
        throw ConfigError("unknown config key \"" + key + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config value has wrong type: ") + e.what());
  }
  s.array.validate();
  s.medium.validate();
  return s;
}

ArraySetup load_setup(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_setup(j);
}

nlohmann::json to_json(const ArraySetup& s) {
  return {
      {"emitter_radius", s.array.emitter_radius},
      {"receiver_radius", s.array.receiver_radius},
      {"emitter_count", s.array.emitter_count},
      {"receiver_count", s.array.receiver_count},
      {"emitter_step_deg", s.array.emitter_step_deg},
      {"receiver_step_deg", s.array.receiver_step_deg},
      {"aperture_start_deg", s.array.aperture_start_deg},
      {"aperture_end_deg", s.array.aperture_end_deg},
      {"medium",
       {{"conductivity", s.medium.conductivity},
        {"permeability", s.medium.permeability},
        {"permittivity", s.medium.permittivity}}},
  };
}

}  // namespace kmig
