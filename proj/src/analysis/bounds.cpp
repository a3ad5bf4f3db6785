#include "egwp/analysis/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "egwp/spectral/norms.hpp"
#include "egwp/spectral/operators.hpp"

namespace egwp::analysis {

void BoundParams::validate() const {
  if (!(C > 0.0)) throw std::invalid_argument("BoundParams: C must be > 0");
  if (!(s > 2.0)) throw std::invalid_argument("BoundParams: s must be > 2");
  if (!(T > 0.0)) throw std::invalid_argument("BoundParams: T must be > 0");
  if (k < 1) throw std::invalid_argument("BoundParams: k must be >= 1");
}

double growth_bound(double vorticity_sup, double hs_norm, double t, double C) {
  if (vorticity_sup == 0.0) return 0.0;
  return std::exp(C * (1.0 + vorticity_sup) * (1.0 + t)) * std::log(std::exp(1.0) + hs_norm / vorticity_sup);
}

double growth_bound(const SpectralVector& u0, double t, const BoundParams& params) {
  params.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("growth_bound: t must be >= 0");
  const double w = spectral::sup_norm(spectral::curl2d(u0), spectral::Sampling::oversampled);
  return growth_bound(w, spectral::hs_norm(u0, params.s), t, params.C);
}

double Radius::value() const { return std::exp(log_value); }

Radius radius_from_rate(double r, double T, int k, RadiusVariant variant) {
  if (k < 1) throw std::invalid_argument("radius_from_rate: k must be >= 1");
  const double factor = variant == RadiusVariant::doubled ? 2.0 : 1.0;
  return {-std::log(static_cast<double>(k)) - factor * T * r};
}

Radius residual_radius(const SpectralVector& phi, const BoundParams& params, RadiusVariant variant) {
  params.validate();
  if (std::max(phi[0].max_abs_coeff(), phi[1].max_abs_coeff()) == 0.0)
    throw std::invalid_argument("residual_radius: phi must be nonzero");
  return radius_from_rate(growth_bound(phi, params.T, params), params.T, params.k, variant);
}

double calibrate_growth_constant(const std::vector<GrowthSample>& samples, double min_c) {
  double c = min_c;
  for (const GrowthSample& s : samples) {
    if (s.vorticity_sup == 0.0 || s.grad_sup <= 0.0) continue;
    const double ell = std::log(std::exp(1.0) + s.hs_norm / s.vorticity_sup);
    c = std::max(c, std::log(s.grad_sup / ell) / ((1.0 + s.vorticity_sup) * (1.0 + s.t)));
  }
  return c;
}

double worst_growth_ratio(const std::vector<GrowthSample>& samples, double C) {
  double worst = 0.0;
  for (const GrowthSample& s : samples) {
    const double r = growth_bound(s.vorticity_sup, s.hs_norm, s.t, C);
    if (r > 0.0) worst = std::max(worst, s.grad_sup / r);
  }
  return worst;
}

}  // namespace egwp::analysis
