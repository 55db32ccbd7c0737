#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "fsotopo/channel_model.hpp"
#include "support.hpp"

using namespace fsotopo;
using fsotopo::testing::fso_spec;
using fsotopo::testing::rf_spec;

namespace {

// erfc by composite Simpson integration of 2/sqrt(pi) exp(-t^2) over
// [x, x + 12] in long double.
long double erfc_oracle(long double x) {
  constexpr int kIntervals = 40'000;
  const long double a = x, b = x + 12.0L;
  const long double h = (b - a) / kIntervals;
  long double sum = std::exp(-a * a) + std::exp(-b * b);
  for (int k = 1; k < kIntervals; ++k) {
    const long double t = a + h * k;
    sum += (k % 2 ? 4.0L : 2.0L) * std::exp(-t * t);
  }
  return sum * h / 3.0L * 2.0L / std::sqrt(3.14159265358979323846264338327950288L);
}

}  // namespace

TEST_CASE("geometric loss examples") {
  CHECK(geometric_loss(5.0, 0.5, 0.0, 0.08) == 5.0);
  CHECK(geometric_loss(7.0, 0.5, 30.0, 0.0) == 7.0);
  const double expect = 10.0 * std::pow(0.05 / (0.05 + 100.0 * 100.0 * 0.080), 2);
  CHECK(geometric_loss(10.0, 0.05, 100.0, 0.080) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("geometric loss is monotone in distance and beam") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10'000; ++i) {
    const double p = 0.1 + 100.0 * u(rng);
    const double diam = 0.01 + u(rng);
    const double theta = 1e-4 + 0.3 * u(rng);
    const double d = 200.0 * u(rng);
    const double more = d + 1e-3 + 50.0 * u(rng);
    REQUIRE(geometric_loss(p, diam, more, theta) < geometric_loss(p, diam, d, theta));
    if (d > 0.0) REQUIRE(geometric_loss(p, diam, d, theta * 1.1) < geometric_loss(p, diam, d, theta));
    REQUIRE(geometric_loss(p, diam, d, theta) <= p);
  }
}

TEST_CASE("erfc-based BER matches an independent integration oracle") {
  for (int k = 0; k <= 60; ++k) {
    const double x = 0.1 * k;
    const auto want = static_cast<double>(erfc_oracle(x)) / 2.0;
    // FSK, monotone: 1/2 erfc(p / 2 pn) with p = 2 x pn.
    CHECK(std::abs(ber_rf_fsk(2.0 * x, 1.0, BerMode::kMonotone) - want) < 1e-12);
    // OOK: 1/2 erfc(R p / (2 sqrt 2 pn)).
    const double p = x * 2.0 * std::sqrt(2.0) / 0.5;
    CHECK(std::abs(ber_fso_ook(p, 0.5, 1.0) - want) < 1e-12);
  }
}

TEST_CASE("BER examples and error cases") {
  CHECK(ber_rf_fsk(0.0, 1e-9, BerMode::kMonotone) == 0.5);
  CHECK(ber_rf_fsk(0.0, 1e-9, BerMode::kLiteral) == 0.5);
  CHECK(ber_rf_fsk(2e-9, 1e-9, BerMode::kMonotone) == doctest::Approx(0.0786496).epsilon(1e-5));
  CHECK(ber_rf_fsk(2e-9, 1e-9, BerMode::kLiteral) >= 0.5);
  CHECK(ber_rf_fsk(2e-9, 1e-9, BerMode::kLiteral) <= 1.0);
  CHECK(ber_fso_ook(0.0, 0.5, 1e-6) == 0.5);
  CHECK(ber_fso_ook(1e3, 0.5, 1e-6) < 1e-300);
  CHECK_THROWS_AS(ber_rf_fsk(1.0, 0.0, BerMode::kMonotone), std::domain_error);
  CHECK_THROWS_AS(ber_fso_ook(1.0, 0.5, -1.0), std::domain_error);
  CHECK_THROWS_AS(ber_fso_ook(1.0, 0.0, 1.0), std::domain_error);
}

TEST_CASE("BER is decreasing and bounded in monotone mode") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ChannelParams ch;
  for (int i = 0; i < 10'000; ++i) {
    const double a = std::pow(10.0, -12.0 + 9.0 * u(rng));
    const double b = a * (1.01 + u(rng));
    for (auto kind : {TransceiverKind::kRf, TransceiverKind::kFso}) {
      const double ba = link_ber(kind, a, ch), bb = link_ber(kind, b, ch);
      REQUIRE(bb <= ba);
      REQUIRE(ba <= 0.5);
      REQUIRE(bb >= 0.0);
    }
  }
}

TEST_CASE("dBm conversion") {
  CHECK(dbm_to_mw(0.0) == 1.0);
  CHECK(dbm_to_mw(-43.0) == doctest::Approx(std::pow(10.0, -4.3)).epsilon(1e-14));
  CHECK(dbm_to_mw(-84.0) == doctest::Approx(std::pow(10.0, -8.4)).epsilon(1e-14));
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> e(-15.0, 5.0);
  for (int i = 0; i < 10'000; ++i) {
    const double x = std::pow(10.0, e(rng));
    REQUIRE(std::abs(dbm_to_mw(mw_to_dbm(x)) - x) <= 1e-12 * x);
  }
}

TEST_CASE("max range examples") {
  ChannelParams ch;
  auto fso = fso_spec();
  const double s = dbm_to_mw(fso.sensitivity_dbm);
  CHECK(max_range(fso, s, 0.08, ch) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(max_range(fso, 0.5 * s, 0.08, ch) == 0.0);
  CHECK(max_range(fso, 4.0 * s, 0.08, ch) ==
        doctest::Approx(fso.diameter_m / (100.0 * 0.08)).epsilon(1e-12));
  CHECK(max_range(fso, 5.0, 0.0, ch) == ch.range_cap_m);
  // Five milliwatts at 80 mrad reaches about 20 m with the default aperture.
  CHECK(max_range(fso, 5.0, 0.08, ch) == doctest::Approx(19.68).epsilon(1e-3));
  const auto rf = rf_spec();
  CHECK(max_range(rf, 5.0, 0.0, ch) == doctest::Approx(35.44).epsilon(1e-3));
}

TEST_CASE("max range inverts the loss model") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ChannelParams ch;
  int checked = 0;
  for (int i = 0; i < 10'000; ++i) {
    auto tx = i % 2 ? rf_spec() : fso_spec();
    tx.sensitivity_dbm = tx.is_fso() ? -55.0 + 20.0 * u(rng) : -95.0 + 25.0 * u(rng);
    tx.diameter_m = 0.05 + u(rng);
    const double p = 0.5 + 60.0 * u(rng);
    const double theta = 0.005 + 0.3 * u(rng);
    const double r = max_range(tx, p, theta, ch);
    if (r <= 1.0 || r >= ch.range_cap_m) continue;
    ++checked;
    const double target = dbm_to_mw(tx.sensitivity_dbm);
    REQUIRE(std::abs(received_power(tx, p, r, theta, ch) - target) <= 1e-9 * target);
  }
  CHECK(checked > 5'000);
}

TEST_CASE("RF path loss clamps below one meter") {
  ChannelParams ch;
  CHECK(rf_path_loss(5.0, 0.2, ch) == rf_path_loss(5.0, 1.0, ch));
  CHECK(rf_path_loss(5.0, 2.0, ch) == doctest::Approx(5.0 * 1e-6 / 4.0));
}
