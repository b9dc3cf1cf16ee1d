#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "mcvd/analytic_channel.hpp"
#include "mcvd/errors.hpp"
#include "support/gauss_kronrod.hpp"
#include "support/oracles.hpp"

namespace {

using mcvd::ChannelGeometry;
using mcvd::DiffusionEnv;
using mcvd::EmissionSpec;

const ChannelGeometry kGeom = ChannelGeometry::from_center_distance(20.0, 10.0);
const DiffusionEnv kEnv = DiffusionEnv::absorbing(79.4);
const EmissionSpec kEmission(5000, 1e-4);

double mass_remaining(double t, const ChannelGeometry& geom, const DiffusionEnv& env) {
  const double upper = geom.r0() + 12.0 * std::sqrt(2.0 * env.D() * t);
  const auto integrand = [&](double r) {
    return 4.0 * std::numbers::pi * r * r * mcvd::molecule_distribution(r, t, geom, env);
  };
  return mcvd::testing::integrate(integrand, geom.rr(), upper).value;
}

struct RandomChannel {
  ChannelGeometry geom;
  DiffusionEnv env;
  EmissionSpec em;
};

RandomChannel random_channel(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(1.0, 50.0), rr(0.5, 20.0), D(5.0, 500.0), dt(1e-5, 1e-2);
  std::uniform_int_distribution<std::uint64_t> n(1, 100000);
  return {ChannelGeometry::from_surface_distance(d(rng), rr(rng)), DiffusionEnv::absorbing(D(rng)),
          EmissionSpec(n(rng), dt(rng))};
}

}  // namespace

TEST_CASE("type invariants reject invalid values with the offending key") {
  CHECK_THROWS_AS(ChannelGeometry::from_center_distance(5.0, 10.0), mcvd::ConfigError);
  CHECK_THROWS_AS(ChannelGeometry::from_center_distance(10.0, 10.0), mcvd::ConfigError);
  CHECK_THROWS_AS(ChannelGeometry::from_surface_distance(0.0, 10.0), mcvd::ConfigError);
  CHECK_THROWS_AS(ChannelGeometry::from_surface_distance(1.0, -1.0), mcvd::ConfigError);
  CHECK_THROWS_AS(DiffusionEnv::absorbing(0.0), mcvd::ConfigError);
  CHECK_THROWS_AS(DiffusionEnv::radiation(1.0, 0.0), mcvd::ConfigError);
  CHECK_THROWS_AS(EmissionSpec(0, 1e-4), mcvd::ConfigError);
  CHECK_THROWS_AS(EmissionSpec(1, 0.0), mcvd::ConfigError);
  try {
    ChannelGeometry::from_center_distance(5.0, 10.0);
  } catch (const mcvd::ConfigError& e) {
    CHECK(e.key() == "r0");
  }
  const auto g = ChannelGeometry::from_surface_distance(10.0, 10.0);
  CHECK(g.r0() == 20.0);
  CHECK(g.d() == 10.0);
}

TEST_CASE("molecule_distribution vanishes on the absorbing surface") {
  for (double t : {1e-4, 1e-3, 0.01, 0.1, 1.0, 10.0, 1e3}) {
    CHECK(mcvd::molecule_distribution(10.0, t, kGeom, kEnv) == 0.0);
  }
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    const RandomChannel c = random_channel(rng);
    CHECK(mcvd::molecule_distribution(c.geom.rr(), 0.37, c.geom, c.env) == 0.0);
  }
}

TEST_CASE("molecule_distribution domain errors") {
  CHECK_THROWS_AS(mcvd::molecule_distribution(9.0, 0.1, kGeom, kEnv), std::domain_error);
  CHECK_THROWS_AS(mcvd::molecule_distribution(15.0, 0.0, kGeom, kEnv), std::domain_error);
  CHECK_THROWS_AS(mcvd::molecule_distribution(15.0, -1.0, kGeom, kEnv), std::domain_error);
}

TEST_CASE("finite reaction rate approaches the absorbing limit") {
  const double absorbing = mcvd::molecule_distribution(15.0, 0.1, kGeom, kEnv);
  const double large_w =
      mcvd::molecule_distribution(15.0, 0.1, kGeom, DiffusionEnv::radiation(79.4, 1e6));
  CHECK(std::abs(large_w - absorbing) / absorbing <= 1e-3);

  // The gap shrinks monotonically as w doubles, roughly halving each time.
  double previous_gap = INFINITY;
  for (double w = 1e3; w <= 1e7; w *= 2.0) {
    const double p = mcvd::molecule_distribution(15.0, 0.1, kGeom, DiffusionEnv::radiation(79.4, w));
    const double gap = std::abs(p - absorbing) / absorbing;
    CHECK(gap < previous_gap);
    if (std::isfinite(previous_gap)) CHECK(gap / previous_gap == doctest::Approx(0.5).epsilon(0.05));
    previous_gap = gap;
  }
}

TEST_CASE("finite-w density stays finite and nonnegative where the naive form overflows") {
  for (double w : {1e-3, 1.0, 1e3, 1e8, 1e12}) {
    const auto env = DiffusionEnv::radiation(79.4, w);
    for (double t : {1e-4, 0.01, 1.0, 100.0}) {
      for (double r : {10.0, 10.5, 15.0, 20.0, 40.0}) {
        const double p = mcvd::molecule_distribution(r, t, kGeom, env);
        CHECK(std::isfinite(p));
        CHECK(p >= 0.0);
      }
    }
  }
}

TEST_CASE("finite-w density solves the radial diffusion equation with the radiation boundary") {
  // Central differences: d(r p)/dt = D d^2(r p)/dr^2 in the bulk and
  // D dp/dr = w p on the surface.
  const double D = 79.4;
  const double w = 50.0;
  const auto env = DiffusionEnv::radiation(D, w);
  const auto rp = [&](double r, double t) {
    return r * mcvd::molecule_distribution(r, t, kGeom, env);
  };
  for (double t : {0.05, 0.2, 1.0}) {
    for (double r : {12.0, 17.0, 23.0}) {
      const double h = 1e-3, k = 1e-5;
      const double dt_term = (rp(r, t + k) - rp(r, t - k)) / (2 * k);
      const double drr_term = (rp(r + h, t) - 2 * rp(r, t) + rp(r - h, t)) / (h * h);
      CHECK(dt_term == doctest::Approx(D * drr_term).epsilon(1e-4));
    }
    const double rr = kGeom.rr();
    const double h = 1e-5;
    const auto p = [&](double r) { return mcvd::molecule_distribution(r, t, kGeom, env); };
    const double dp = (-3 * p(rr) + 4 * p(rr + h) - p(rr + 2 * h)) / (2 * h);
    CHECK(D * dp == doctest::Approx(w * p(rr)).epsilon(1e-4));
  }
}

TEST_CASE("mass conservation with the baseline parameters") {
  for (double t : {0.01, 0.1, 1.0}) {
    const double total = mass_remaining(t, kGeom, kEnv) +
                         mcvd::hitting_fraction(t, kGeom, kEnv);
    CHECK(std::abs(total - 1.0) <= 1e-6);
  }
}

TEST_CASE("hitting_rate near zero and domain") {
  CHECK(mcvd::hitting_rate(0.0, kGeom, kEnv) == 0.0);
  CHECK(mcvd::hitting_rate(1e-12, kGeom, kEnv) == 0.0);
  CHECK(mcvd::hitting_rate(1e-310, kGeom, kEnv) == 0.0);
  CHECK(mcvd::hitting_rate(1e-3, kGeom, kEnv) > 0.0);
  CHECK_THROWS_AS(mcvd::hitting_rate(-1.0, kGeom, kEnv), std::domain_error);
  CHECK_THROWS_AS(mcvd::hitting_rate(0.1, kGeom, DiffusionEnv::radiation(79.4, 10.0)),
                  std::invalid_argument);
}

TEST_CASE("hitting_rate maximum") {
  const auto rate = [](double t) { return mcvd::hitting_rate(t, kGeom, kEnv); };
  const double argmax = mcvd::testing::golden_section_argmax(rate, 1e-3, 2.0);
  CHECK(std::abs(argmax - 0.209908) <= 1e-6);
  CHECK(std::abs(argmax - mcvd::peak_time(kGeom, kEnv)) <= 1e-6);

  const double at_peak = rate(mcvd::peak_time(kGeom, kEnv));
  CHECK(std::abs(at_peak - 0.36726) <= 1e-4);
  CHECK(at_peak * 5000 * 1e-4 ==
        doctest::Approx(mcvd::peak_amplitude(kGeom, kEmission, kEnv)).epsilon(1e-12));
}

TEST_CASE("hitting_rate is unimodal around the peak time") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const RandomChannel c = random_channel(rng);
    const double peak = mcvd::peak_time(c.geom, c.env);
    double previous = 0.0;
    for (double t = peak * 1e-2; t < peak * 0.999; t *= 1.01) {
      const double v = mcvd::hitting_rate(t, c.geom, c.env);
      CHECK(v > previous);
      previous = v;
    }
    previous = INFINITY;
    for (double t = peak * 1.001; t < peak * 1e3; t *= 1.01) {
      const double v = mcvd::hitting_rate(t, c.geom, c.env);
      CHECK(v < previous);
      previous = v;
    }
  }
}

TEST_CASE("hitting_fraction values") {
  CHECK(mcvd::hitting_fraction(0.0, kGeom, kEnv) == 0.0);
  // At t = 1e9 s the gap to rr/r0 is still (rr/r0) erf(d / sqrt(4 D t)) = 1.0e-5
  // for D = 79.4; the supremum is approached like t^{-1/2}.
  const double x_1e9 = 10.0L / std::sqrt(4.0L * 79.4L * 1e9L);
  CHECK(mcvd::hitting_fraction(1e9, kGeom, kEnv) ==
        doctest::Approx(0.5 * static_cast<double>(mcvd::testing::erfc_reference(x_1e9))).epsilon(1e-14));
  CHECK(std::abs(mcvd::hitting_fraction(1e9, kGeom, kEnv) - 0.5) <= 1.01e-5);
  CHECK(std::abs(mcvd::hitting_fraction(1e13, kGeom, kEnv) - 0.5) <= 1e-6);
  const double at_peak = mcvd::hitting_fraction(mcvd::peak_time(kGeom, kEnv), kGeom, kEnv);
  const double oracle = 0.5 * static_cast<double>(mcvd::testing::erfc_reference(std::sqrt(1.5L)));
  CHECK(std::abs(at_peak - 0.041633) <= 1e-5);
  CHECK(std::abs(at_peak - oracle) <= 1e-12);
  CHECK_THROWS_AS(mcvd::hitting_fraction(-1e-9, kGeom, kEnv), std::domain_error);
}

TEST_CASE("hitting_fraction is strictly increasing in t with supremum rr/r0") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const RandomChannel c = random_channel(rng);
    const double peak = mcvd::peak_time(c.geom, c.env);
    double previous = 0.0;
    for (double t = peak * 0.05; t < peak * 1e4; t *= 1.1) {
      const double v = mcvd::hitting_fraction(t, c.geom, c.env);
      CHECK(v > previous);
      CHECK(v < c.geom.rr() / c.geom.r0());
      previous = v;
    }
  }
}

TEST_CASE("PDF and CDF agree") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> horizon(1e-3, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const RandomChannel c = random_channel(rng);
    const double t = horizon(rng);
    const auto rate = [&](double s) { return mcvd::hitting_rate(s, c.geom, c.env); };
    const double integral = mcvd::testing::integrate(rate, 0.0, t).value;
    CHECK(std::abs(integral - mcvd::hitting_fraction(t, c.geom, c.env)) <= 1e-6);
  }
}

TEST_CASE("hitting_fraction decreases with distance") {
  for (double t : {0.01, 0.1, 1.0, 10.0}) {
    double previous = 1.0;
    for (double d = 1.0; d <= 60.0; d += 1.0) {
      const double v = mcvd::hitting_fraction(t, ChannelGeometry::from_surface_distance(d, 10.0), kEnv);
      if (v == 0.0) break;  // erfc underflow
      CHECK(v < previous);
      previous = v;
    }
  }
}

TEST_CASE("hitting_fraction is invariant under length scale lambda with D scaled by lambda^2") {
  for (double lambda : {0.25, 0.5, 2.0, 8.0}) {
    const auto scaled_geom = ChannelGeometry::from_center_distance(20.0 * lambda, 10.0 * lambda);
    const auto scaled_env = DiffusionEnv::absorbing(79.4 * lambda * lambda);
    for (double t : {0.01, 0.2, 3.0}) {
      CHECK(mcvd::hitting_fraction(t, scaled_geom, scaled_env) ==
            doctest::Approx(mcvd::hitting_fraction(t, kGeom, kEnv)).epsilon(1e-13));
    }
  }
}

TEST_CASE("expected_hits") {
  CHECK(mcvd::expected_hits(0.3, 0.3, kGeom, kEmission, kEnv) == 0.0);
  CHECK(mcvd::expected_hits(0.0, INFINITY, kGeom, kEmission, kEnv) ==
        doctest::Approx(2500.0).epsilon(1e-15));
  const double x = 10.0L / std::sqrt(4.0L * 79.4L * 0.4L);
  const double oracle = 5000.0 * 0.5 * static_cast<double>(mcvd::testing::erfc_reference(x));
  const double hits = mcvd::expected_hits(0.0, 0.4, kGeom, kEmission, kEnv);
  CHECK(std::abs(hits - oracle) <= 1e-9);
  CHECK(std::abs(hits - 523.956474) <= 1e-5);
  CHECK_THROWS_AS(mcvd::expected_hits(0.4, 0.3, kGeom, kEmission, kEnv), std::domain_error);
  CHECK_THROWS_AS(mcvd::expected_hits(-0.1, 0.3, kGeom, kEmission, kEnv), std::domain_error);
}

TEST_CASE("peak_time scaling") {
  CHECK(mcvd::peak_time(kGeom, kEnv) == doctest::Approx(0.2099076).epsilon(1e-6));
  const auto far = ChannelGeometry::from_surface_distance(20.0, 10.0);
  CHECK(mcvd::peak_time(far, kEnv) == doctest::Approx(4.0 * mcvd::peak_time(kGeom, kEnv)).epsilon(1e-15));
  CHECK(std::abs(mcvd::peak_time(far, kEnv) - 0.8396) < 1e-4);
  const double fast = mcvd::peak_time(kGeom, DiffusionEnv::absorbing(158.8));
  CHECK(std::abs(fast - 0.1050) < 1e-4);
  CHECK(fast == doctest::Approx(0.5 * mcvd::peak_time(kGeom, kEnv)).epsilon(1e-15));
}

TEST_CASE("peak_amplitude") {
  const double amp = mcvd::peak_amplitude(kGeom, kEmission, kEnv);
  CHECK(std::abs(amp - 0.18363) <= 1e-4);
  CHECK(std::exp(-1.5) / std::sqrt(std::numbers::pi / 54.0) == doctest::Approx(0.925082).epsilon(1e-6));

  // d -> 8d: exact ratio from the closed form.
  const auto far = ChannelGeometry::from_surface_distance(80.0, 10.0);
  const double ratio = mcvd::peak_amplitude(far, kEmission, kEnv) / amp;
  CHECK(ratio == doctest::Approx((1.0 / 64.0) * (20.0 / 90.0)).epsilon(1e-13));

  const auto bigger = ChannelGeometry::from_surface_distance(10.0, 20.0);
  CHECK(mcvd::peak_amplitude(bigger, kEmission, kEnv) > amp);
}

TEST_CASE("peak_amplitude equals n_tx dt hitting_rate(peak_time)") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const RandomChannel c = random_channel(rng);
    const double closed = mcvd::peak_amplitude(c.geom, c.em, c.env);
    const double via_rate = static_cast<double>(c.em.n_tx()) * c.em.dt() *
                            mcvd::hitting_rate(mcvd::peak_time(c.geom, c.env), c.geom, c.env);
    CHECK(std::abs(closed - via_rate) / closed <= 1e-12);
  }
}

TEST_CASE("survival_fraction") {
  CHECK(mcvd::survival_fraction(kGeom) == 0.5);
  CHECK(mcvd::survival_fraction(ChannelGeometry::from_center_distance(100.0, 10.0)) ==
        doctest::Approx(0.9).epsilon(1e-15));
  CHECK(mcvd::survival_fraction(ChannelGeometry::from_surface_distance(1e-9, 10.0)) < 1e-9);
}
