#pragma once

#include <cstddef>
#include <numbers>

namespace egwp::spectral {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform N x N collocation grid on the torus [0, 2pi)^2 together with its
/// integer wavenumber lattice {-N/2+1, ..., N/2}^2.
///
/// Storage layout (both physical samples and Fourier coefficients) is
/// row-major with the first axis slowest: flat index = i1 * N + i2. Fourier
/// indices use FFT ordering, i.e. index i carries wavenumber i for i <= N/2
/// and i - N above that.
class FourierGrid {
 public:
  /// N must be even and at least 8. The dealias cutoff defaults to floor(N/3).
  explicit FourierGrid(int n);
  FourierGrid(int n, int dealias_cutoff);

  int size() const noexcept { return n_; }
  int dealias_cutoff() const noexcept { return cutoff_; }
  std::size_t points() const noexcept { return static_cast<std::size_t>(n_) * n_; }

  int wavenumber(int index) const noexcept { return index <= n_ / 2 ? index : index - n_; }
  int index_of(int k) const noexcept { return ((k % n_) + n_) % n_; }
  std::size_t flat(int i1, int i2) const noexcept {
    return static_cast<std::size_t>(i1) * n_ + static_cast<std::size_t>(i2);
  }
  std::size_t flat_mode(int k1, int k2) const noexcept { return flat(index_of(k1), index_of(k2)); }
  /// Flat index of -k for the mode stored at (i1, i2).
  std::size_t conjugate_flat(int i1, int i2) const noexcept {
    return flat((n_ - i1) % n_, (n_ - i2) % n_);
  }
  bool is_nyquist(int k) const noexcept { return k == n_ / 2 || k == -n_ / 2; }

  double coordinate(int j) const noexcept { return kTwoPi * j / n_; }
  double spacing() const noexcept { return kTwoPi / n_; }
  /// Quadrature weight of one collocation cell.
  double cell_area() const noexcept { return spacing() * spacing(); }

  bool operator==(const FourierGrid&) const = default;

 private:
  int n_;
  int cutoff_;
};

/// Throws GridMismatch when the grids differ.
void require_same_grid(const FourierGrid& a, const FourierGrid& b, const char* context);

}  // namespace egwp::spectral
