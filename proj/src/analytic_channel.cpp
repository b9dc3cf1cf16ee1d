#include "mcvd/analytic_channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mcvd/special_functions.hpp"

namespace mcvd {
namespace {

constexpr double kPi = std::numbers::pi;

// exp() of anything below this is exactly zero in double precision.
constexpr double kExpUnderflow = -745.2;

void require_absorbing(const DiffusionEnv& env, const char* op) {
  if (!env.is_absorbing()) {
    throw std::invalid_argument(std::string(op) +
                                " is defined for the fully absorbing receiver only");
  }
}

void require_time(double t, const char* op) {
  if (!(t >= 0.0)) throw std::domain_error(std::string(op) + ": t must be >= 0");
}

}  // namespace

double molecule_distribution(double r_um, double t_s, const ChannelGeometry& geom,
                             const DiffusionEnv& env) {
  if (!(r_um >= geom.rr())) throw std::domain_error("molecule_distribution: r must be >= rr");
  if (!(t_s > 0.0)) throw std::domain_error("molecule_distribution: t must be > 0");

  const double D = env.D();
  const double r0 = geom.r0();
  const double rr = geom.rr();
  const double four_dt = 4.0 * D * t_s;
  const double prefactor = 1.0 / (4.0 * kPi * r_um * r0);
  const double kernel = 1.0 / std::sqrt(kPi * four_dt);

  // Offsets measured from the surface so that the direct and image terms
  // cancel exactly at r = rr: r - r0 = u - d and r + r0 - 2 rr = u + d.
  const double u = r_um - rr;
  const double direct_offset = u - geom.d();
  const double image_offset = u + geom.d();
  const double direct = std::exp(-direct_offset * direct_offset / four_dt);
  const double image = std::exp(-image_offset * image_offset / four_dt);

  if (env.is_absorbing()) {
    return std::max(0.0, prefactor * kernel * (direct - image));
  }

  const double w = *env.reaction_rate();
  const double alpha = (w * rr + D) / (D * rr);
  const double z = alpha * std::sqrt(D * t_s) + image_offset / std::sqrt(four_dt);
  const double reaction = alpha * image * erfcx(z);
  return std::max(0.0, prefactor * (kernel * (direct + image) - reaction));
}

double hitting_rate(double t_s, const ChannelGeometry& geom, const DiffusionEnv& env) {
  require_absorbing(env, "hitting_rate");
  require_time(t_s, "hitting_rate");
  if (t_s == 0.0) return 0.0;

  const double D = env.D();
  const double d = geom.d();
  const double exponent = -d * d / (4.0 * D * t_s);
  if (exponent < kExpUnderflow) return 0.0;
  return (geom.rr() / geom.r0()) / std::sqrt(4.0 * kPi * D * t_s) * (d / t_s) *
         std::exp(exponent);
}

double hitting_fraction(double t_s, const ChannelGeometry& geom, const DiffusionEnv& env) {
  require_absorbing(env, "hitting_fraction");
  require_time(t_s, "hitting_fraction");
  if (t_s == 0.0) return 0.0;
  return (geom.rr() / geom.r0()) * erfc(geom.d() / std::sqrt(4.0 * env.D() * t_s));
}

double expected_hits(double t_start_s, double t_end_s, const ChannelGeometry& geom,
                     const EmissionSpec& em, const DiffusionEnv& env) {
  require_time(t_start_s, "expected_hits");
  if (!(t_end_s >= t_start_s)) {
    throw std::domain_error("expected_hits: interval end precedes its start");
  }
  const double gained =
      hitting_fraction(t_end_s, geom, env) - hitting_fraction(t_start_s, geom, env);
  return static_cast<double>(em.n_tx()) * std::max(0.0, gained);
}

double peak_time(const ChannelGeometry& geom, const DiffusionEnv& env) {
  require_absorbing(env, "peak_time");
  return geom.d() * geom.d() / (6.0 * env.D());
}

double peak_amplitude(const ChannelGeometry& geom, const EmissionSpec& em,
                      const DiffusionEnv& env) {
  require_absorbing(env, "peak_amplitude");
  // e^{-3/2} / sqrt(pi / 54)
  static const double shape = std::exp(-1.5) / std::sqrt(kPi / 54.0);
  const double d = geom.d();
  return static_cast<double>(em.n_tx()) * em.dt() * (geom.rr() / (d + geom.rr())) *
         (env.D() / (d * d)) * shape;
}

double survival_fraction(const ChannelGeometry& geom) noexcept {
  return 1.0 - geom.rr() / geom.r0();
}

}  // namespace mcvd
