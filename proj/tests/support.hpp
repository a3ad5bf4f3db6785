#pragma once

// Shared fixtures and independent oracles for the test suites. Analytic
// fields are sampled and transformed; the oracles (direct_synthesis,
// quadrature) never touch the FFT path.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>
#include <algorithm>
#include <span>

#include "egwp/spectral/fields.hpp"
#include "egwp/spectral/operators.hpp"

namespace egwp::test {

using spectral::Complex;
using spectral::FourierGrid;
using spectral::PhysicalScalar;
using spectral::SpectralScalar;
using spectral::SpectralVector;

inline constexpr double kPi = 3.14159265358979323846;

/// Random Hermitian coefficients over the full lattice (Nyquist modes real).
inline SpectralScalar random_hermitian(const FourierGrid& g, std::uint64_t seed, bool zero_mean = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  SpectralScalar f(g);
  const int n = g.size();
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const std::size_t a = g.flat(i1, i2);
      const std::size_t b = g.conjugate_flat(i1, i2);
      if (b < a) continue;
      if (a == b) {
        f.coeffs()[a] = uni(rng);
      } else {
        const Complex c(uni(rng), uni(rng));
        f.coeffs()[a] = c;
        f.coeffs()[b] = std::conj(c);
      }
    }
  if (zero_mean) f.coeffs()[0] = 0.0;
  return f;
}

/// Random zero-mean field restricted to 1 <= |k| <= kmax.
inline SpectralScalar random_band_limited(const FourierGrid& g, int kmax, std::uint64_t seed) {
  SpectralScalar f = random_hermitian(g, seed);
  for (int i1 = 0; i1 < g.size(); ++i1)
    for (int i2 = 0; i2 < g.size(); ++i2) {
      const int k1 = g.wavenumber(i1), k2 = g.wavenumber(i2);
      if (k1 * k1 + k2 * k2 > kmax * kmax || g.is_nyquist(k1) || g.is_nyquist(k2)) f.coeffs()[g.flat(i1, i2)] = 0.0;
    }
  return f;
}

/// Direct O(N^4) evaluation of the Fourier series at every collocation point.
inline std::vector<double> direct_synthesis(const SpectralScalar& f) {
  const FourierGrid& g = f.grid();
  const int n = g.size();
  std::vector<double> out(g.points());
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2) {
      Complex sum = 0.0;
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2) {
          const double phase = g.wavenumber(i1) * g.coordinate(j1) + g.wavenumber(i2) * g.coordinate(j2);
          sum += f.coeffs()[g.flat(i1, i2)] * std::polar(1.0, phase);
        }
      out[g.flat(j1, j2)] = sum.real();
    }
  return out;
}

template <class F>
SpectralScalar from_function(const FourierGrid& g, F&& f) {
  return spectral::to_spectral(spectral::sample(g, f));
}

template <class F1, class F2>
SpectralVector vector_from_functions(const FourierGrid& g, F1&& a, F2&& b) {
  return SpectralVector(from_function(g, a), from_function(g, b));
}

inline SpectralVector taylor_green(const FourierGrid& g) {
  return vector_from_functions(
      g, [](double x, double y) { return std::sin(x) * std::cos(y); },
      [](double x, double y) { return -std::cos(x) * std::sin(y); });
}

inline SpectralVector shear(const FourierGrid& g) {
  return vector_from_functions(
      g, [](double, double y) { return std::sin(y); }, [](double, double) { return 0.0; });
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_coeff_diff(const SpectralScalar& a, const SpectralScalar& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

inline double max_coeff_diff(const SpectralVector& a, const SpectralVector& b) {
  return std::max(max_coeff_diff(a[0], b[0]), max_coeff_diff(a[1], b[1]));
}

inline double max_coeff(const SpectralVector& a) { return std::max(a[0].max_abs_coeff(), a[1].max_abs_coeff()); }

/// Midpoint-free uniform quadrature of an analytic integrand on a fine grid.
template <class F>
double quadrature(F&& f, int m = 256) {
  const double h = 2 * kPi / m;
  double sum = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) sum += f(i * h, j * h);
  return sum * h * h;
}

}  // namespace egwp::test
