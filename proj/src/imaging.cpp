#include "kmig/imaging.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "kmig/error.hpp"
#include "kmig/forward.hpp"
#include "kmig/specfun.hpp"
#include "kmig/text_format.hpp"

namespace kmig {

std::string_view to_string(SteeringVariant v) {
  return v == SteeringVariant::ExactGreen ? "exact" : "asymptotic";
}

SteeringVariant parse_variant(std::string_view s) {
  if (s == "exact" || s == "exact-green") return SteeringVariant::ExactGreen;
  if (s == "asymptotic") return SteeringVariant::Asymptotic;
  throw ConfigError("unknown steering variant \"" + std::string(s) +
                    "\" (expected exact or asymptotic)");
}

namespace {

Complex asymptotic_green(double k, Point station, Point x, double radius) {
  return Complex(0.0, -0.25) * specfun::hankel1_0_asymptotic(k, station, x, radius);
}

void check_steering_point(Point x, const ArrayConfig& config, double k, SteeringVariant variant) {
  if (!(x.norm() < config.inner_radius())) {
    throw DomainError("imaging point must lie strictly inside both rings");
  }
  if (variant == SteeringVariant::Asymptotic && k * config.inner_radius() < 10.0) {
    throw DomainError("asymptotic steering needs k * ring radius >= 10");
  }
}

}  // namespace

SteeringVectors steering(Point x, const ArrayConfig& config, double k, SteeringVariant variant) {
  check_steering_point(x, config, k, variant);
  SteeringVectors sv;
  sv.variant = variant;
  sv.receiver.resize(static_cast<std::size_t>(config.receiver_count));
  sv.emitter.resize(static_cast<std::size_t>(config.emitter_count));
  for (int n = 1; n <= config.receiver_count; ++n) {
    const Point r = config.receiver_position(n);
    const Complex g = variant == SteeringVariant::ExactGreen
                          ? green(k, x, r)
                          : asymptotic_green(k, r, x, config.receiver_radius);
    sv.receiver[static_cast<std::size_t>(n - 1)] = std::conj(g);
  }
  for (int m = 1; m <= config.emitter_count; ++m) {
    const Point e = config.emitter_position(m);
    const Complex g = variant == SteeringVariant::ExactGreen
                          ? green(k, x, e)
                          : asymptotic_green(k, e, x, config.emitter_radius);
    sv.emitter[static_cast<std::size_t>(m - 1)] = std::conj(g);
  }
  return sv;
}

Complex km_complex(Point x, const MsrMatrix& msr, double k, SteeringVariant variant) {
  const SteeringVectors sv = steering(x, msr.config(), k, variant);
  const auto entries = msr.entries();
  const auto mask = msr.mask();
  const std::size_t cols = static_cast<std::size_t>(msr.cols());
  Complex total{0.0, 0.0};
  for (std::size_t n = 0; n < sv.receiver.size(); ++n) {
    Complex row{0.0, 0.0};
    for (std::size_t m = 0; m < cols; ++m) {
      const std::size_t idx = n * cols + m;
      if (mask[idx]) row += entries[idx] * sv.emitter[m];
    }
    total += sv.receiver[n] * row;
  }
  return total;
}

double km_value(Point x, const MsrMatrix& msr, double k, SteeringVariant variant) {
  return std::abs(km_complex(x, msr, k, variant));
}

double ImageGrid::max_value() const {
  double best = 0.0;
  for (double v : values) best = std::max(best, v);
  return best;
}

void ImageGrid::normalize() {
  scale = max_value();
  if (scale > 0.0) {
    for (double& v : values) v /= scale;
  }
}

ImageGrid make_grid(const Region& region, double spacing) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw ConfigError("grid spacing must be positive");
  }
  if (!(region.x_max >= region.x_min) || !(region.y_max >= region.y_min)) {
    throw ConfigError("empty imaging region");
  }
  ImageGrid g;
  g.origin = {region.x_min, region.y_min};
  g.spacing = spacing;
  g.width = static_cast<int>(std::floor((region.x_max - region.x_min) / spacing + 1e-9)) + 1;
  g.height = static_cast<int>(std::floor((region.y_max - region.y_min) / spacing + 1e-9)) + 1;
  g.values.assign(static_cast<std::size_t>(g.width) * static_cast<std::size_t>(g.height), 0.0);
  return g;
}

int default_worker_count() {
  if (const char* env = std::getenv("KMIG_WORKERS")) {
    const auto v = parse_number(env);
    if (v && *v >= 1.0) return static_cast<int>(*v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void evaluate_grid(ImageGrid& grid, const std::function<double(Point)>& fn, int workers) {
  if (workers <= 0) workers = default_worker_count();
  workers = std::max(1, std::min(workers, grid.height));
  std::atomic<int> next_row{0};
  auto run = [&] {
    for (int j = next_row++; j < grid.height; j = next_row++) {
      for (int i = 0; i < grid.width; ++i) grid.at(i, j) = fn(grid.position(i, j));
    }
  };
  if (workers == 1) {
    run();
    return;
  }
  // exceptions from workers are rethrown on the calling thread
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          run();
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next_row = grid.height;
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

ImageGrid km_map(const Region& region, double spacing, const MsrMatrix& msr, double k,
                 SteeringVariant variant, int workers) {
  ImageGrid grid = make_grid(region, spacing);
  const double lambda = 2.0 * kPi / k;
  if (spacing > lambda / 10.0) {
    grid.warnings.push_back("grid spacing " + format_number(spacing, 6) +
                            " m exceeds lambda/10 = " + format_number(lambda / 10.0, 6) + " m");
  }
  evaluate_grid(grid, [&](Point x) { return km_value(x, msr, k, variant); }, workers);
  grid.normalize();
  return grid;
}

Peak argmax(const ImageGrid& grid) {
  Peak best;
  best.value = -1.0;
  for (int j = 0; j < grid.height; ++j) {
    for (int i = 0; i < grid.width; ++i) {
      if (grid.at(i, j) > best.value) best = {grid.position(i, j), grid.at(i, j), i, j};
    }
  }
  return best;
}

std::vector<Peak> local_maxima(const ImageGrid& grid, double rel_threshold,
                               double min_separation) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) {
    throw ConfigError("local maxima threshold must lie in (0, 1)");
  }
  const double peak = grid.max_value();
  std::vector<Peak> candidates;
  if (!(peak > 0.0)) return candidates;
  const double floor_value = rel_threshold * peak;
  for (int j = 0; j < grid.height; ++j) {
    for (int i = 0; i < grid.width; ++i) {
      const double v = grid.at(i, j);
      if (v < floor_value) continue;
      bool is_max = true;
      for (int dj = -1; dj <= 1 && is_max; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          const int ni = i + di;
          const int nj = j + dj;
          if (ni < 0 || nj < 0 || ni >= grid.width || nj >= grid.height) continue;
          if (!(v > grid.at(ni, nj))) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) candidates.push_back({grid.position(i, j), v, i, j});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Peak& a, const Peak& b) { return a.value > b.value; });
  std::vector<Peak> kept;
  for (const auto& c : candidates) {
    const bool far = std::all_of(kept.begin(), kept.end(), [&](const Peak& k) {
      return distance(k.position, c.position) >= min_separation;
    });
    if (far) kept.push_back(c);
  }
  return kept;
}

}  // namespace kmig
