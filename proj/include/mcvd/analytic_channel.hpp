#pragma once

// Closed-form channel response of a point transmitter and a spherical
// receiver in unbounded 3-D free diffusion.
//
// All functions are pure. Arguments outside a function's domain raise
// std::domain_error; functions defined only for the fully absorbing receiver
// raise std::invalid_argument when given a finite reaction rate.

#include "mcvd/channel.hpp"

namespace mcvd {

/// Molecule density p(r, t | r0) in um^-3 for r >= rr, t > 0.
///
/// Absorbing limit: difference of the free kernel and its image about the
/// receiver surface, which vanishes exactly at r = rr. Finite w: the
/// radiation-boundary solution, with the exp(a^2 D t + a s) erfc(...)
/// product rewritten as exp(-s^2 / 4Dt) erfcx(...) so it cannot overflow.
double molecule_distribution(double r_um, double t_s, const ChannelGeometry& geom,
                             const DiffusionEnv& env);

/// First-arrival density n_hit(t) in s^-1. Zero at t = 0 by continuity.
double hitting_rate(double t_s, const ChannelGeometry& geom, const DiffusionEnv& env);

/// Fraction of molecules absorbed by time t: (rr / r0) erfc(d / sqrt(4 D t)).
double hitting_fraction(double t_s, const ChannelGeometry& geom, const DiffusionEnv& env);

/// Expected number of absorptions in [t_start, t_end] for n_tx emitted molecules.
double expected_hits(double t_start_s, double t_end_s, const ChannelGeometry& geom,
                     const EmissionSpec& em, const DiffusionEnv& env);

/// Time of the maximum hitting rate, d^2 / (6 D).
double peak_time(const ChannelGeometry& geom, const DiffusionEnv& env);

/// Expected absorptions in the dt-wide bin at the peak time, from the closed form.
double peak_amplitude(const ChannelGeometry& geom, const EmissionSpec& em,
                      const DiffusionEnv& env);

/// Probability of never being absorbed, 1 - rr / r0.
double survival_fraction(const ChannelGeometry& geom) noexcept;

}  // namespace mcvd
