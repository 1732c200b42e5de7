#include <doctest.h>

#include <cmath>

#include "kmig/error.hpp"
#include "kmig/specfun.hpp"
#include "oracles.hpp"

using namespace kmig;
namespace sf = kmig::specfun;

TEST_SUITE("specfun") {

TEST_CASE("bessel_j at the origin") {
  CHECK(sf::bessel_j(0, 0.0) == 1.0);
  CHECK(sf::bessel_j(3, 0.0) == 0.0);
  CHECK(sf::bessel_j(256, 0.0) == 0.0);
}

TEST_CASE("first zero of J0") {
  // bisection on the series oracle
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    (oracle::bessel_j_series(0, lo) * oracle::bessel_j_series(0, mid) <= 0.0 ? hi : lo) = mid;
  }
  CHECK(lo == doctest::Approx(2.404825557695773).epsilon(1e-14));
  CHECK(std::abs(sf::bessel_j(0, 2.404825557695773)) < 1e-9);
}

TEST_CASE("bessel_j against the series oracle") {
  double worst = 0.0;
  for (int p = 0; p <= 80; p += 7) {
    for (double x = 0.05; x <= 50.0; x += 1.37) {
      const double ref = oracle::bessel_j_series(p, x);
      worst = std::max(worst, std::abs(sf::bessel_j(p, x) - ref) / std::abs(ref));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("negative arguments follow parity") {
  CHECK(sf::bessel_j(4, -3.2) == sf::bessel_j(4, 3.2));
  CHECK(sf::bessel_j(5, -3.2) == -sf::bessel_j(5, 3.2));
}

TEST_CASE("bessel_j_row") {
  const auto zero = sf::bessel_j_row(4, 0.0);
  REQUIRE(zero.size() == 5);
  CHECK(zero[0] == 1.0);
  for (int p = 1; p <= 4; ++p) CHECK(zero[p] == 0.0);

  const auto row = sf::bessel_j_row(10, 5.0);
  CHECK(std::abs(row[0] - sf::bessel_j(0, 5.0)) <= 1e-12);
  for (int p = 0; p <= 10; ++p) {
    CHECK(std::abs(row[p] - sf::bessel_j(p, 5.0)) <= 1e-12 * std::max(1.0, std::abs(row[p])));
  }
}

TEST_CASE("Neumann normalization") {
  double worst = 0.0;
  for (int i = 0; i <= 500; ++i) {
    const double x = 50.0 * i / 500.0;
    const auto row = sf::bessel_j_row(128, x);
    double s = row[0] * row[0];
    for (int p = 1; p <= 128; ++p) s += 2.0 * row[p] * row[p];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("three-term recurrence") {
  double worst = 0.0;
  for (double x = 0.1; x <= 50.0; x += 0.37) {
    const auto row = sf::bessel_j_row(41, x);
    for (int p = 1; p <= 40; ++p) {
      worst = std::max(worst, std::abs(row[p - 1] + row[p + 1] - 2.0 * p / x * row[p]));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("bessel_j is bounded by one") {
  for (int p = 0; p <= 256; p += 3) {
    for (double x = 0.0; x <= 300.0; x += 2.9) CHECK(std::abs(sf::bessel_j(p, x)) <= 1.0);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(sf::bessel_j(257, 1.0), DomainError);
  CHECK_THROWS_AS(sf::bessel_j(-1, 1.0), DomainError);
  CHECK_THROWS_AS(sf::bessel_j(0, std::nan("")), DomainError);
  CHECK_THROWS_AS(sf::bessel_j(0, INFINITY), DomainError);
  CHECK_THROWS_AS(sf::bessel_j(0, 2e4), DomainError);
  CHECK_NOTHROW(sf::bessel_j(0, 1e4));
  CHECK_THROWS_AS(sf::hankel1_0(0.0), DomainError);
  CHECK_THROWS_AS(sf::hankel1_0(-1.0), DomainError);
  CHECK_THROWS_AS(sf::hankel1_0_asymptotic(1.0, {0.5, 0.0}, {0.0, 0.0}, 0.5), DomainError);
}

TEST_CASE("Y0 against the series oracle") {
  for (double z : {1e-6, 0.01, 0.5, 1.0, 3.7, 8.0, 11.9, 14.9, 15.1, 20.0, 33.3, 50.0}) {
    CAPTURE(z);
    const double ref = oracle::bessel_y0_series(z);
    CHECK(std::abs(sf::bessel_y0(z) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("hankel1_0 values") {
  for (double z : {0.3, 1.0, 7.0, 40.0}) CHECK(sf::hankel1_0(z).real() == sf::bessel_j(0, z));
  CHECK(sf::hankel1_0(1.0).imag() == doctest::Approx(0.088256964).epsilon(1e-9));
  CHECK(std::abs(sf::hankel1_0(1.0).imag() - oracle::bessel_y0_series(1.0)) < 1e-14);
}

TEST_CASE("asymptotic Hankel form") {
  const Point origin{0.0, 0.0};
  const double rho = 0.72;
  auto rel_error = [&](double krho) {
    const double k = krho / rho;
    const Complex h = sf::hankel1_0(krho);
    return std::abs(sf::hankel1_0_asymptotic(k, {rho, 0.0}, origin, rho) - h) / std::abs(h);
  };

  SUBCASE("origin reduces to the classical asymptote") {
    const double k = 30.0 / rho;
    const Complex expect = Complex(1.0, -1.0) * std::exp(Complex(0.0, 30.0)) / std::sqrt(30.0 * kPi);
    const Complex got = sf::hankel1_0_asymptotic(k, Point::polar(rho, 1.1), origin, rho);
    CHECK(std::abs(got - expect) <= 1e-14);
  }
  SUBCASE("error within 1/(8z) and under 0.4% at 50") {
    for (double z : {5.0, 10.0, 25.0, 50.0, 200.0}) CHECK(rel_error(z) <= 1.0 / (8.0 * z));
    CHECK(rel_error(50.0) <= 0.004);
  }
  SUBCASE("error decreases with k rho") {
    CHECK(rel_error(20.0) < rel_error(10.0));
    CHECK(rel_error(40.0) < rel_error(20.0));
    CHECK(rel_error(80.0) < rel_error(40.0));
  }
  SUBCASE("linear phase along the station direction") {
    const double k = 80.0;
    const double angle = 0.7;
    const Point station = Point::polar(rho, angle);
    const Point x{0.01, -0.02};
    const double delta = 0.013;
    const Point shifted = x + Point::polar(delta, angle);
    const Complex a = sf::hankel1_0_asymptotic(k, station, x, rho);
    const Complex b = sf::hankel1_0_asymptotic(k, station, shifted, rho);
    CHECK(std::abs(b - a * std::exp(Complex(0.0, -k * delta))) <= 1e-14);
  }
}

}
