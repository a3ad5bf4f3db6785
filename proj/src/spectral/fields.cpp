#include "egwp/spectral/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "egwp/error.hpp"

namespace egwp::spectral {

SpectralScalar::SpectralScalar(FourierGrid grid) : grid_(grid), coeffs_(grid.points()) {}

SpectralScalar::SpectralScalar(FourierGrid grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.points())
    throw std::invalid_argument("SpectralScalar: expected " + std::to_string(grid_.points()) +
                                " coefficients, got " + std::to_string(coeffs_.size()));
}

double SpectralScalar::hermitian_defect() const {
  const int n = grid_.size();
  double defect = 0.0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const Complex a = coeffs_[grid_.flat(i1, i2)];
      const Complex b = coeffs_[grid_.conjugate_flat(i1, i2)];
      defect = std::max(defect, std::abs(a - std::conj(b)));
    }
  return defect;
}

double SpectralScalar::max_abs_coeff() const {
  double m = 0.0;
  for (const Complex& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool SpectralScalar::is_hermitian(double rel_tol) const {
  return hermitian_defect() <= rel_tol * max_abs_coeff() + 1e-300;
}

SpectralScalar& SpectralScalar::operator+=(const SpectralScalar& other) {
  require_same_grid(grid_, other.grid_, "SpectralScalar::operator+=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralScalar& SpectralScalar::operator-=(const SpectralScalar& other) {
  require_same_grid(grid_, other.grid_, "SpectralScalar::operator-=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralScalar& SpectralScalar::operator*=(double a) {
  for (Complex& c : coeffs_) c *= a;
  return *this;
}

SpectralVector::SpectralVector(FourierGrid grid) : first_(grid), second_(grid) {}

SpectralVector::SpectralVector(SpectralScalar first, SpectralScalar second)
    : first_(std::move(first)), second_(std::move(second)) {
  require_same_grid(first_.grid(), second_.grid(), "SpectralVector");
  const double scale = std::max({first_.max_abs_coeff(), second_.max_abs_coeff(), 1e-300});
  if (std::abs(first_.coeffs()[0]) > 1e-12 * scale || std::abs(second_.coeffs()[0]) > 1e-12 * scale)
    throw InvalidField("SpectralVector: components must have zero mean");
  first_.coeffs()[0] = 0.0;
  second_.coeffs()[0] = 0.0;
  check_divergence_free();
}

SpectralVector make_divergence_free(SpectralScalar first, SpectralScalar second) {
  SpectralVector u(first.grid());
  require_same_grid(first.grid(), second.grid(), "make_divergence_free");
  u.first_ = std::move(first);
  u.second_ = std::move(second);
  u.divergence_free_ = true;
  return u;
}

double SpectralVector::divergence_defect() const {
  const FourierGrid& g = grid();
  const int n = g.size();
  double defect = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    const double k1 = g.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double k2 = g.wavenumber(i2);
      const std::size_t f = g.flat(i1, i2);
      const Complex a = first_.coeffs()[f];
      const Complex b = second_.coeffs()[f];
      const double mag = std::sqrt(std::norm(a) + std::norm(b));
      if (mag == 0.0) continue;
      defect = std::max(defect, std::abs(k1 * a + k2 * b) / mag);
    }
  }
  return defect;
}

bool SpectralVector::check_divergence_free(double tol) {
  divergence_free_ = divergence_defect() <= tol;
  return divergence_free_;
}

SpectralVector& SpectralVector::operator+=(const SpectralVector& other) {
  first_ += other.first_;
  second_ += other.second_;
  divergence_free_ = divergence_free_ && other.divergence_free_;
  return *this;
}

SpectralVector& SpectralVector::operator-=(const SpectralVector& other) {
  first_ -= other.first_;
  second_ -= other.second_;
  divergence_free_ = divergence_free_ && other.divergence_free_;
  return *this;
}

SpectralVector& SpectralVector::operator*=(double a) {
  first_ *= a;
  second_ *= a;
  return *this;
}

PhysicalScalar::PhysicalScalar(FourierGrid grid) : grid_(grid), samples_(grid.points()) {}

PhysicalScalar::PhysicalScalar(FourierGrid grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.points())
    throw std::invalid_argument("PhysicalScalar: expected " + std::to_string(grid_.points()) +
                                " samples, got " + std::to_string(samples_.size()));
}

}  // namespace egwp::spectral
