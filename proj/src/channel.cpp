#include "mcvd/channel.hpp"

#include <cmath>
#include <string>

#include "mcvd/errors.hpp"

namespace mcvd {
namespace {

void require_positive(const char* key, double value, const char* what) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw ConfigError(key, std::string(what) + " must be finite and > 0, got " +
                               std::to_string(value));
  }
}

}  // namespace

ChannelGeometry ChannelGeometry::from_center_distance(double r0_um, double rr_um) {
  require_positive("rr", rr_um, "receiver radius rr");
  require_positive("r0", r0_um, "center distance r0");
  if (!(r0_um > rr_um)) {
    throw ConfigError("r0", "r0 > rr violated (r0 = " + std::to_string(r0_um) +
                                ", rr = " + std::to_string(rr_um) + ")");
  }
  return ChannelGeometry(r0_um, rr_um, r0_um - rr_um);
}

ChannelGeometry ChannelGeometry::from_surface_distance(double d_um, double rr_um) {
  require_positive("rr", rr_um, "receiver radius rr");
  require_positive("d", d_um, "surface distance d");
  return ChannelGeometry(d_um + rr_um, rr_um, d_um);
}

DiffusionEnv DiffusionEnv::absorbing(double D_um2_s) {
  require_positive("D", D_um2_s, "diffusion coefficient D");
  return DiffusionEnv(D_um2_s, std::nullopt);
}

DiffusionEnv DiffusionEnv::radiation(double D_um2_s, double w_um_s) {
  require_positive("D", D_um2_s, "diffusion coefficient D");
  require_positive("w", w_um_s, "reaction rate w");
  return DiffusionEnv(D_um2_s, w_um_s);
}

EmissionSpec::EmissionSpec(std::uint64_t n_tx, double dt_s) : n_tx_(n_tx), dt_(dt_s) {
  if (n_tx < 1) throw ConfigError("n-tx", "n_tx must be >= 1");
  require_positive("dt", dt_s, "bin width dt");
}

}  // namespace mcvd
