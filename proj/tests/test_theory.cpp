#include <doctest.h>

#include <cmath>

#include "kmig/error.hpp"
#include "kmig/specfun.hpp"
#include "kmig/theory.hpp"
#include "oracles.hpp"

using namespace kmig;
namespace th = kmig::theory;

TEST_SUITE("theory") {

TEST_CASE("sin(2 p pi / 3) table") {
  const double h = std::sqrt(3.0) / 2.0;
  const double want[] = {h, -h, 0.0, h, -h, 0.0};
  for (int p = 1; p <= 6; ++p) CHECK(th::sin_two_thirds_pi(p) == want[p - 1]);
  for (int p = 1; p <= 300; ++p) {
    CHECK(th::sin_two_thirds_pi(p) == doctest::Approx(std::sin(2.0 * p * kPi / 3.0)).epsilon(1e-9));
  }
}

TEST_CASE("kernel at coincidence") {
  const auto trunc = th::SeriesTruncation::covering(30.0);
  CHECK(th::structure_kernel({0.01, 0.02}, {0.01, 0.02}, 80.0, trunc).value == 1.0);
  CHECK(th::structure_kernel_at(0.0, trunc).value == 1.0);
}

TEST_CASE("kernel matches the direct series") {
  const auto trunc = th::SeriesTruncation::covering(20.0, 80);
  for (double t : {0.3, 2.0, 7.7, 19.0}) {
    double s = std::pow(oracle::bessel_j_series(0, t), 2);
    for (int p = 1; p <= 80; ++p) {
      s += 3.0 / kPi / p * std::pow(oracle::bessel_j_series(p, t), 2) * std::sin(2.0 * p * kPi / 3.0);
    }
    CHECK(th::structure_kernel_at(t, trunc).value == doctest::Approx(s).epsilon(1e-11));
  }
}

TEST_CASE("self-convergence") {
  const double t = 10.0;
  const double a = th::structure_kernel_at(t, th::SeriesTruncation::covering(t, 60)).value;
  const double b = th::structure_kernel_at(t, th::SeriesTruncation::covering(t, 80)).value;
  CHECK(std::abs(a - b) <= 1e-10);

  for (double x : {2.0, 5.0, 12.0}) {
    for (int p : {10, 20, 40}) {
      const auto tp = th::SeriesTruncation::covering(x, p);
      const double diff = std::abs(th::structure_kernel_at(x, tp).value -
                                   th::structure_kernel_at(x, th::SeriesTruncation::covering(x, p + 10)).value);
      CHECK(diff <= tp.tail_bound + 1e-15);
    }
  }
}

TEST_CASE("tail bounds") {
  CHECK(th::structure_tail_bound(60, 20.0) < th::structure_tail_bound(40, 20.0));
  CHECK(th::structure_tail_bound(60, 0.0) == 0.0);
  CHECK(th::jacobi_anger_tail_bound(60, 5.0) < 1e-30);
  CHECK(th::structure_tail_bound(60, 20.0) == th::SeriesTruncation::covering(20.0, 60).tail_bound);
}

TEST_CASE("truncation defaults") {
  const auto low = th::default_truncation(20.958, 0.1);
  CHECK(low.max_order == 60);
  const auto high = th::default_truncation(167.7, 2.0 * std::sqrt(2.0) * 0.2);
  const auto mid = th::default_truncation(83.8, 0.3);
  CHECK(mid.max_order == static_cast<int>(std::ceil(3.0 * 83.8 * 0.3)));
  CHECK(high.max_order == 256);  // 3 k d = 285 exceeds the order cap
  CHECK(th::SeriesTruncation::covering(500.0).max_order == 256);
}

TEST_CASE("truncation warning") {
  CHECK(th::structure_kernel_at(30.0, th::SeriesTruncation::covering(30.0, 60)).truncation_warning);
  CHECK_FALSE(th::structure_kernel_at(19.0, th::SeriesTruncation::covering(30.0, 60)).truncation_warning);
}

TEST_CASE("isotropy") {
  const auto trunc = th::SeriesTruncation::covering(20.0);
  const Point y{0.02, -0.01};
  const double k = 83.8, r = 0.07;
  const double ref = th::structure_kernel(y + Point{r, 0.0}, y, k, trunc).value;
  for (double a : {0.4, 1.3, 2.9, 4.4, 5.9}) {
    CHECK(std::abs(th::structure_kernel(y + Point::polar(r, a), y, k, trunc).value - ref) <= 1e-12);
  }
}

TEST_CASE("kernel peaks at zero") {
  const auto trunc = th::SeriesTruncation::covering(30.0, 100);
  for (double t = 0.01; t <= 30.0; t += 0.01) {
    CHECK(std::abs(th::structure_kernel_at(t, trunc).value) < 1.0);
  }
}

TEST_CASE("theory map") {
  const double k = 83.8;
  const Point y{0.02, -0.01};
  const ImageGrid g = th::theory_map({{y, 1.0}}, Region::square(0.1), 0.002, k,
                                     th::default_truncation(k, 0.3));
  const Peak p = argmax(g);
  CHECK(p.value == 1.0);
  CHECK(distance(p.position, y) <= 1e-12);
  // pixels at the same offset in rotated directions share |x - y|
  for (auto [a, b] : {std::pair{3, 7}, {10, 4}, {12, 12}}) {
    const double v = g.at(p.i + a, p.j + b);
    CHECK(std::abs(g.at(p.i - b, p.j + a) - v) <= 1e-12);
    CHECK(std::abs(g.at(p.i - a, p.j - b) - v) <= 1e-12);
    CHECK(std::abs(g.at(p.i + b, p.j - a) - v) <= 1e-12);
  }
  const ImageGrid zero = th::theory_map({{y, 0.0}}, Region::square(0.05), 0.002, k,
                                        th::default_truncation(k, 0.3));
  CHECK(zero.scale == 0.0);
}

TEST_CASE("prefactor") {
  CHECK(th::structure_prefactor(ArrayConfig{}) == doctest::Approx(1.0 / (24.0 * 0.72 * 0.76)));
}

TEST_CASE("Jacobi-Anger partial sums") {
  SUBCASE("full circle") {
    for (double x : {0.5, 3.0, 17.0}) {
      const double want = 2.0 * kPi * specfun::bessel_j(0, x);
      for (double phi : {0.0, 0.9, 2.2, -1.4}) {
        const Complex v = th::jacobi_anger_partial(x, phi, 0.0, 2.0 * kPi, 80).value;
        CHECK(std::abs(v - want) <= 1e-12);
      }
    }
  }
  SUBCASE("zero argument") {
    const Complex v = th::jacobi_anger_partial(0.0, 0.4, 0.2, 1.7, 60).value;
    CHECK(v == Complex(1.5, 0.0));
  }
  SUBCASE("240 degree window against quadrature") {
    const double a = kPi / 3.0, b = 5.0 * kPi / 3.0;
    const Complex q = oracle::jacobi_anger_quadrature(5.0, 0.3, a, b);
    const auto s = th::jacobi_anger_partial(5.0, 0.3, a, b, 60);
    CHECK(std::abs(s.value - q) <= 1e-8);
    CHECK(s.tail_bound < 1e-20);
  }
  SUBCASE("window must be nonempty and at most a full turn") {
    CHECK_THROWS_AS(th::jacobi_anger_partial(1.0, 0.0, 1.0, 1.0, 60), DomainError);
    CHECK_THROWS_AS(th::jacobi_anger_partial(1.0, 0.0, 0.0, 7.0, 60), DomainError);
  }
}

TEST_CASE("aperture sum against the series") {
  const ArrayConfig c;
  const double dtheta = kPi / 36.0;

  SUBCASE("constant integrand") {
    const auto r = th::aperture_sum_vs_series(0.0, 0.0, c, 1, 60);
    CHECK(r.discrete_sum == Complex(49.0, 0.0));
    CHECK(std::abs(r.series - 4.0 * kPi / 3.0) <= 1e-14);
    CHECK(r.gap <= dtheta);
    CHECK(r.riemann_gap <= dtheta + 1e-14);
    CHECK_FALSE(r.sampling_warning);
  }
  SUBCASE("x = 5") {
    for (double phi : {0.0, 0.7, 2.0, 4.1}) {
      const auto r = th::aperture_sum_vs_series(5.0, phi, c, 1, 60);
      CHECK(r.gap <= 0.02 * std::abs(r.series));
    }
  }
  SUBCASE("series is the shifted window") {
    for (int m : {1, 4, 36}) {
      const double theta_m = deg_to_rad(10.0 * (m - 1));
      const auto r = th::aperture_sum_vs_series(5.0, 0.3, c, m, 60);
      const Complex s =
          th::jacobi_anger_partial(5.0, 0.3, theta_m + kPi / 3.0, theta_m + 5.0 * kPi / 3.0, 60).value;
      CHECK(r.series == s);
    }
  }
  SUBCASE("coarse sampling is flagged") {
    CHECK(th::aperture_sum_vs_series(25.0, 0.0, c, 1, 100).sampling_warning);
  }
}

}
