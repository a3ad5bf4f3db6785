#pragma once

#include <cstdint>

#include "egwp/spectral/fields.hpp"

namespace egwp::dynamics {

/// u = (sin x1 cos x2, -cos x1 sin x2), built from exact coefficients.
spectral::SpectralVector taylor_green(const spectral::FourierGrid& grid);

/// u = (sin x2, 0).
spectral::SpectralVector shear_flow(const spectral::FourierGrid& grid);

struct RandomFieldSpec {
  std::uint64_t seed = 1;
  int kmax = 4;                 ///< keep modes with 1 <= |k| <= kmax
  double slope = 1.0;           ///< |omega_hat(k)| ~ |k|^-slope
  double l2_norm = 0.0;         ///< rescale to this L2 norm; 0 keeps pi*sqrt(2)
};

/// Seeded band-limited divergence-free velocity: Biot-Savart of a random
/// vorticity with uniformly distributed phases and amplitude |k|^-slope.
/// Bit-identical for equal seeds on every platform.
spectral::SpectralVector random_velocity(const spectral::FourierGrid& grid, const RandomFieldSpec& spec);

/// Zero-mean scalar with the same construction (no Biot-Savart step).
spectral::SpectralScalar random_scalar(const spectral::FourierGrid& grid, const RandomFieldSpec& spec);

}  // namespace egwp::dynamics
