#pragma once

#include <complex>
#include <span>
#include <vector>

#include "egwp/spectral/grid.hpp"

namespace egwp::spectral {

using Complex = std::complex<double>;

/// Real scalar field on the torus stored as Fourier-series coefficients,
/// f(x) = sum_k c_k exp(i k.x). Used for vorticity, passive scalars and
/// pressure.
class SpectralScalar {
 public:
  explicit SpectralScalar(FourierGrid grid);
  SpectralScalar(FourierGrid grid, std::vector<Complex> coeffs);

  const FourierGrid& grid() const noexcept { return grid_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  Complex& mode(int k1, int k2) { return coeffs_[grid_.flat_mode(k1, k2)]; }
  Complex mode(int k1, int k2) const { return coeffs_[grid_.flat_mode(k1, k2)]; }

  /// Largest |c(-k) - conj(c(k))| over the lattice.
  double hermitian_defect() const;
  /// Defect relative to the largest coefficient magnitude.
  bool is_hermitian(double rel_tol = 1e-9) const;
  double mean() const noexcept { return coeffs_[0].real(); }
  double max_abs_coeff() const;

  SpectralScalar& operator+=(const SpectralScalar& other);
  SpectralScalar& operator-=(const SpectralScalar& other);
  SpectralScalar& operator*=(double a);

  friend SpectralScalar operator+(SpectralScalar a, const SpectralScalar& b) { return a += b; }
  friend SpectralScalar operator-(SpectralScalar a, const SpectralScalar& b) { return a -= b; }
  friend SpectralScalar operator*(double s, SpectralScalar a) { return a *= s; }

 private:
  FourierGrid grid_;
  std::vector<Complex> coeffs_;
};

/// Two-component velocity field on a shared grid. Components are always
/// zero-mean. The divergence_free flag records a checked property; it is
/// set by constructors that enforce it (Biot-Savart, Leray projection) or
/// by an explicit check.
class SpectralVector {
 public:
  explicit SpectralVector(FourierGrid grid);
  /// Throws InvalidField if either component has nonzero mean and GridMismatch
  /// if the grids differ.
  SpectralVector(SpectralScalar first, SpectralScalar second);

  const FourierGrid& grid() const noexcept { return first_.grid(); }
  const SpectralScalar& operator[](int axis) const { return axis == 0 ? first_ : second_; }
  SpectralScalar& operator[](int axis) { return axis == 0 ? first_ : second_; }

  bool divergence_free() const noexcept { return divergence_free_; }
  /// Re-examines |k . u(k)| <= tol |u(k)| for every mode and updates the flag.
  bool check_divergence_free(double tol = 1e-12);
  /// Largest |k . u(k)| / |u(k)| over nonzero modes.
  double divergence_defect() const;

  SpectralVector& operator+=(const SpectralVector& other);
  SpectralVector& operator-=(const SpectralVector& other);
  SpectralVector& operator*=(double a);

  friend SpectralVector operator+(SpectralVector a, const SpectralVector& b) { return a += b; }
  friend SpectralVector operator-(SpectralVector a, const SpectralVector& b) { return a -= b; }
  friend SpectralVector operator*(double s, SpectralVector a) { return a *= s; }

 private:
  friend SpectralVector make_divergence_free(SpectralScalar, SpectralScalar);
  SpectralScalar first_;
  SpectralScalar second_;
  bool divergence_free_ = true;
};

/// Wraps two components known to be divergence-free (no check performed).
SpectralVector make_divergence_free(SpectralScalar first, SpectralScalar second);

/// Collocation-space twin of SpectralScalar; samples[i1 * N + i2] = f(x_i1, x_i2).
class PhysicalScalar {
 public:
  explicit PhysicalScalar(FourierGrid grid);
  PhysicalScalar(FourierGrid grid, std::vector<double> samples);

  const FourierGrid& grid() const noexcept { return grid_; }
  std::span<double> samples() noexcept { return samples_; }
  std::span<const double> samples() const noexcept { return samples_; }
  double& at(int i1, int i2) { return samples_[grid_.flat(i1, i2)]; }
  double at(int i1, int i2) const { return samples_[grid_.flat(i1, i2)]; }

 private:
  FourierGrid grid_;
  std::vector<double> samples_;
};

/// Samples an analytic function f(x1, x2) at the collocation points.
template <class F>
PhysicalScalar sample(const FourierGrid& grid, F&& f) {
  PhysicalScalar out(grid);
  for (int i1 = 0; i1 < grid.size(); ++i1)
    for (int i2 = 0; i2 < grid.size(); ++i2) out.at(i1, i2) = f(grid.coordinate(i1), grid.coordinate(i2));
  return out;
}

}  // namespace egwp::spectral
