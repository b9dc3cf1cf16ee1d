#pragma once

// Value types describing one point transmitter, one spherical receiver and
// the diffusive medium between them. Lengths are in um, times in s and
// diffusion coefficients in um^2/s throughout the library.

#include <cstdint>
#include <optional>

namespace mcvd {

/// Placement of a point transmitter relative to a spherical receiver.
/// Always satisfies rr > 0, r0 > rr and d = r0 - rr > 0.
class ChannelGeometry {
 public:
  /// r0 is the transmitter's distance to the receiver center.
  static ChannelGeometry from_center_distance(double r0_um, double rr_um);
  /// d is the distance from the transmitter to the closest surface point.
  static ChannelGeometry from_surface_distance(double d_um, double rr_um);

  double r0() const noexcept { return r0_; }
  double rr() const noexcept { return rr_; }
  double d() const noexcept { return d_; }

  friend bool operator==(const ChannelGeometry&, const ChannelGeometry&) = default;

 private:
  ChannelGeometry(double r0, double rr, double d) : r0_(r0), rr_(rr), d_(d) {}

  double r0_;
  double rr_;
  double d_;
};

/// Diffusion coefficient plus the receiver surface reaction rate w.
/// An empty reaction rate denotes the fully absorbing limit w -> inf.
class DiffusionEnv {
 public:
  static DiffusionEnv absorbing(double D_um2_s);
  static DiffusionEnv radiation(double D_um2_s, double w_um_s);

  double D() const noexcept { return D_; }
  std::optional<double> reaction_rate() const noexcept { return w_; }
  bool is_absorbing() const noexcept { return !w_.has_value(); }

  friend bool operator==(const DiffusionEnv&, const DiffusionEnv&) = default;

 private:
  DiffusionEnv(double D, std::optional<double> w) : D_(D), w_(w) {}

  double D_;
  std::optional<double> w_;
};

/// Impulse emission at t = 0 observed with a fixed bin width.
class EmissionSpec {
 public:
  EmissionSpec(std::uint64_t n_tx, double dt_s);

  std::uint64_t n_tx() const noexcept { return n_tx_; }
  double dt() const noexcept { return dt_; }

  friend bool operator==(const EmissionSpec&, const EmissionSpec&) = default;

 private:
  std::uint64_t n_tx_;
  double dt_;
};

}  // namespace mcvd
