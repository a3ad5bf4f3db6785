#pragma once

#include <vector>

#include "egwp/spectral/fields.hpp"

namespace egwp::analysis {

using spectral::SpectralVector;

/// Parameters of the exponential gradient bound and the residual radii.
/// C has no known value; it defaults to 1 and can be calibrated.
struct BoundParams {
  double C = 1.0;
  double s = 3.0;
  double T = 1.0;
  int k = 1;

  /// Throws std::invalid_argument unless C > 0, s > 2, T > 0, k >= 1.
  void validate() const;
};

/// r(t) = exp(C (1 + ||w0||_inf)(1 + t)) log(e + ||u0||_Hs / ||w0||_inf),
/// with the vorticity sup norm oversampled. Zero for the zero field.
double growth_bound(const SpectralVector& u0, double t, const BoundParams& params);

/// Same formula from precomputed norms.
double growth_bound(double vorticity_sup, double hs_norm, double t, double C);

enum class RadiusVariant { standard, doubled };

/// Radii underflow double for moderate r, so they are carried as logs.
struct Radius {
  double log_value = 0.0;
  double value() const;
};

/// (1/k) exp(-T r(T)), or (1/k) exp(-2 T r(T)) for the doubled variant.
Radius radius_from_rate(double r, double T, int k, RadiusVariant variant = RadiusVariant::standard);
/// Throws std::invalid_argument for a zero phi.
Radius residual_radius(const SpectralVector& phi, const BoundParams& params,
                       RadiusVariant variant = RadiusVariant::standard);

/// One measured point of ||grad u_t||_inf for a run started from data with
/// the given norms.
struct GrowthSample {
  double vorticity_sup = 0.0;  ///< ||w0||_inf
  double hs_norm = 0.0;        ///< ||u0||_Hs
  double t = 0.0;
  double grad_sup = 0.0;       ///< measured ||grad u_t||_inf
};

/// Smallest C with grad_sup <= r(t) on every sample, floored at min_c.
double calibrate_growth_constant(const std::vector<GrowthSample>& samples, double min_c = 1e-6);

/// Largest grad_sup / r(t) over the samples; <= 1 means the bound holds.
double worst_growth_ratio(const std::vector<GrowthSample>& samples, double C);

}  // namespace egwp::analysis
