#include <doctest.h>

#include <random>
#include <sstream>

#include "kmig/error.hpp"
#include "kmig/fresnel_io.hpp"
#include "kmig/msr.hpp"

using namespace kmig;

namespace {

const ArrayConfig kConfig;
const MediumParams kMedium;
const Frequency f4 = Frequency::from_ghz(4.0);
const double k4 = wavenumber(kMedium, f4);

Scene one_disk() {
  Scene s;
  s.objects.push_back({{0.03, 0.0}, 0.015, 3.0});
  return s;
}

std::vector<FresnelRecord> synthetic(Complex gain = 1.0, Frequency f = f4) {
  const double k = wavenumber(kMedium, f);
  return records_from_fields(synthesize_fields(one_disk(), kConfig, k), kConfig, k, f, gain);
}

}  // namespace

TEST_SUITE("fresnel_io") {

TEST_CASE("headers only") {
  CHECK(parse_fresnel("", kConfig).empty());
  CHECK(parse_fresnel("# comment\nTx Rx Freq ReTot ImTot ReInc ImInc\n\n", kConfig).empty());
}

TEST_CASE("exp round trip") {
  const auto records = synthetic();
  CHECK(records.size() == 1764);
  const std::string text = format_fresnel(records);
  CHECK(parse_fresnel(text, kConfig) == records);
  CHECK(format_fresnel(parse_fresnel(text, kConfig)) == text);
}

TEST_CASE("malformed rows name the line") {
  const std::string text = "# header\n1 13 4 0.1 0.2 0.3 0.4\n1 14 4 0.1 0.2\n";
  try {
    parse_fresnel(text, kConfig);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_fresnel("1 13 4 0.1 x 0.3 0.4\n", kConfig), ParseError);
}

TEST_CASE("degree-valued station columns") {
  // emitter at 20 deg (m = 3), receiver at 90 deg (n = 19)
  const auto recs = parse_fresnel("20 90 4 1 0 0.5 0\n20.05 95 4 1 0 0.5 0\n", kConfig);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].emitter == 3);
  CHECK(recs[0].receiver == 19);
  CHECK(recs[1].receiver == 20);
  CHECK(recs[0].frequency_hz == 4e9);
  CHECK_THROWS_AS(parse_fresnel("20 92.5 4 1 0 0.5 0\n", kConfig), GeometryMismatch);

  // explicit index mode rejects non-integer values
  ParseOptions idx;
  idx.receiver_column = AngleColumn::Index;
  CHECK_THROWS_AS(parse_fresnel("3 19.5 4 1 0 0.5 0\n", kConfig, idx), Error);

  ParseOptions deg;
  deg.emitter_column = AngleColumn::Degrees;
  deg.receiver_column = AngleColumn::Degrees;
  const auto forced = parse_fresnel("10 5 4 1 0 0.5 0\n", kConfig, deg);
  CHECK(forced[0].emitter == 2);
  CHECK(forced[0].receiver == 2);
}

TEST_CASE("scattered fields") {
  std::vector<FresnelRecord> recs = {{1, 13, 4e9, {1.0, 2.0}, {1.0, 2.0}},
                                     {1, 14, 4e9, {1.5, 2.0}, {1.0, 2.0}}};
  const auto groups = scattered_from_records(recs);
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].fields.at({1, 13}) == Complex(0.0, 0.0));
  CHECK(groups[0].fields.at({1, 14}) == Complex(0.5, 0.0));

  recs.push_back(recs[0]);
  CHECK_THROWS_AS(scattered_from_records(recs), AmbiguityError);
}

TEST_CASE("synthetic records recover the forward fields") {
  const FieldMap direct = synthesize_fields(one_disk(), kConfig, k4);
  const auto groups = scattered_from_records(synthetic());
  REQUIRE(groups.size() == 1);
  for (const auto& [key, v] : direct) {
    CHECK(std::abs(groups[0].fields.at(key) - v) <= 1e-12 * std::abs(v) + 1e-300);
  }
}

TEST_CASE("frequency grouping") {
  auto recs = synthetic(1.0, Frequency::from_ghz(2.0));
  const auto more = synthetic(1.0, f4);
  recs.insert(recs.end(), more.begin(), more.end());
  const auto freqs = available_frequencies(recs);
  REQUIRE(freqs.size() == 2);
  CHECK(freqs[0] == 2e9);
  CHECK(select_frequency(recs, Frequency{4e9 + 4e5}).size() == 1764);
  CHECK(select_frequency(recs, Frequency{3e9}).empty());
  CHECK_THROWS_AS(calibrate(recs, kConfig, kMedium), Error);
}

TEST_CASE("calibration closed forms") {
  const auto exact = calibrate(synthetic(1.0), kConfig, kMedium);
  CHECK(std::abs(exact.factor - Complex(1.0, 0.0)) <= 1e-12);
  CHECK(exact.residual <= 1e-12);
  CHECK(exact.records_used == 1764);

  const auto doubled = calibrate(synthetic(2.0), kConfig, kMedium);
  CHECK(std::abs(doubled.factor - Complex(0.5, 0.0)) <= 1e-12);
  CHECK(doubled.residual <= 1e-12);
}

TEST_CASE("calibration under noise") {
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sigma = 0.05;
  for (int trial = 0; trial < 20; ++trial) {
    auto recs = synthetic(1.0);
    for (auto& r : recs) {
      r.incident_field += sigma * std::abs(r.incident_field) * Complex(gauss(rng), gauss(rng));
    }
    const auto cal = calibrate(recs, kConfig, kMedium);
    CHECK(std::abs(cal.factor - 1.0) <= sigma);
    CHECK(cal.residual > 0.0);
    CHECK(cal.residual <= 1.0);
  }
}

TEST_CASE("calibration is scale equivariant") {
  const Complex alpha{0.3, -1.7};
  auto base = synthetic(Complex(0.9, 0.2));
  base[17].incident_field *= 1.1;  // make the fit inexact
  auto scaled = base;
  for (auto& r : scaled) {
    r.total_field *= alpha;
    r.incident_field *= alpha;
  }
  const auto c1 = calibrate(base, kConfig, kMedium);
  const auto c2 = calibrate(scaled, kConfig, kMedium);
  CHECK(std::abs(c2.factor - c1.factor / alpha) <= 1e-12 * std::abs(c1.factor / alpha));
  CHECK(c2.residual == doctest::Approx(c1.residual).epsilon(1e-9));
  const auto u1 = apply_calibration(scattered_from_records(base)[0].fields, c1.factor);
  const auto u2 = apply_calibration(scattered_from_records(scaled)[0].fields, c2.factor);
  for (const auto& [key, v] : u1) CHECK(std::abs(u2.at(key) - v) <= 1e-12 * std::abs(v) + 1e-300);
}

TEST_CASE("calibration preconditions") {
  auto few = synthetic();
  few.resize(7);
  CHECK_THROWS_AS(calibrate(few, kConfig, kMedium), CalibrationError);

  auto dark = synthetic();
  for (auto& r : dark) r.incident_field = 0.0;
  CHECK_THROWS_AS(calibrate(dark, kConfig, kMedium), CalibrationError);
}

TEST_CASE("calibrated pipeline reproduces the forward matrix") {
  const Complex gain{0.4, 1.3};
  const auto recs = parse_fresnel(format_fresnel(synthetic(gain)), kConfig);
  const auto cal = calibrate(recs, kConfig, kMedium);
  const MsrMatrix got = MsrMatrix::assemble(
      apply_calibration(scattered_from_records(recs)[0].fields, cal.factor), kConfig, f4);
  const MsrMatrix want =
      MsrMatrix::assemble(synthesize_fields(one_disk(), kConfig, k4), kConfig, f4);
  for (std::size_t i = 0; i < want.entries().size(); ++i) {
    CHECK(std::abs(got.entries()[i] - want.entries()[i]) <= 1e-9 * want.max_abs());
  }
}

TEST_CASE("records csv") {
  const auto recs = synthetic();
  std::stringstream a;
  write_records_csv(a, recs);
  CHECK(a.str().rfind("m,n,f_hz,re_tot,im_tot,re_inc,im_inc\n", 0) == 0);
  const auto once = read_records_csv(a);
  REQUIRE(once.size() == recs.size());
  CHECK(std::abs(once[5].total_field - recs[5].total_field) <= 1e-8 * std::abs(recs[5].total_field));
  std::stringstream b;
  write_records_csv(b, once);
  CHECK(read_records_csv(b) == once);
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(read_fresnel_file("/nonexistent/data.exp", kConfig), Error);
}

}
