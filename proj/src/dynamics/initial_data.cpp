#include "egwp/dynamics/initial_data.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "egwp/spectral/norms.hpp"
#include "egwp/spectral/operators.hpp"

namespace egwp::dynamics {
namespace {

using spectral::Complex;
using spectral::FourierGrid;
using spectral::SpectralScalar;

constexpr double kPi = 3.14159265358979323846;

// std::uniform_real_distribution is implementation-defined; this is not.
double canonical(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void set_mode(SpectralScalar& f, int k1, int k2, Complex c) {
  f.mode(k1, k2) = c;
  f.mode(-k1, -k2) = std::conj(c);
}

SpectralScalar random_band(const FourierGrid& grid, const RandomFieldSpec& spec) {
  if (spec.kmax < 1) throw std::invalid_argument("random field: kmax must be >= 1");
  if (spec.kmax >= grid.size() / 2) throw std::invalid_argument("random field: kmax must be below N/2");
  if (spec.l2_norm < 0.0) throw std::invalid_argument("random field: l2_norm must be >= 0");
  std::mt19937_64 rng(spec.seed);
  SpectralScalar f(grid);
  const int K = spec.kmax;
  // Half-plane enumeration: k1 > 0, or k1 == 0 and k2 > 0.
  for (int k1 = 0; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const int kk = k1 * k1 + k2 * k2;
      if (kk > K * K) continue;
      const double amp = std::pow(std::sqrt(static_cast<double>(kk)), -spec.slope);
      const double phase = 2.0 * kPi * canonical(rng);
      const double r = 0.5 + canonical(rng);
      set_mode(f, k1, k2, std::polar(amp * r, phase));
    }
  return f;
}

}  // namespace

spectral::SpectralVector taylor_green(const FourierGrid& grid) {
  SpectralScalar a(grid), b(grid);
  // sin x1 cos x2 = (sin(x1+x2) + sin(x1-x2)) / 2, sin(z) = (e^{iz} - e^{-iz}) / 2i
  const Complex q{0.0, -0.25};
  set_mode(a, 1, 1, q);
  set_mode(a, 1, -1, q);
  set_mode(b, 1, 1, -q);
  set_mode(b, 1, -1, q);
  return spectral::make_divergence_free(std::move(a), std::move(b));
}

spectral::SpectralVector shear_flow(const FourierGrid& grid) {
  SpectralScalar a(grid), b(grid);
  set_mode(a, 0, 1, Complex{0.0, -0.5});
  return spectral::make_divergence_free(std::move(a), std::move(b));
}

spectral::SpectralVector random_velocity(const FourierGrid& grid, const RandomFieldSpec& spec) {
  spectral::SpectralVector u = spectral::biot_savart(random_band(grid, spec));
  const double target = spec.l2_norm > 0.0 ? spec.l2_norm : kPi * std::sqrt(2.0);
  u *= target / spectral::l2_norm(u);
  return u;
}

spectral::SpectralScalar random_scalar(const FourierGrid& grid, const RandomFieldSpec& spec) {
  SpectralScalar f = random_band(grid, spec);
  const double target = spec.l2_norm > 0.0 ? spec.l2_norm : kPi * std::sqrt(2.0);
  f *= target / spectral::l2_norm(f);
  return f;
}

}  // namespace egwp::dynamics
