#pragma once

#include "egwp/spectral/fields.hpp"

namespace egwp::spectral {

// --- transforms -----------------------------------------------------------

/// Evaluates the Fourier series at the collocation points. Throws
/// InvalidField for non-Hermitian input.
PhysicalScalar to_physical(const SpectralScalar& f);
/// Coefficients c_k = N^-2 sum_j g(x_j) exp(-i k.x_j); exact inverse of
/// to_physical up to round-off.
SpectralScalar to_spectral(const PhysicalScalar& g);

/// Copies coefficients onto another grid. Upsampling splits Nyquist modes
/// evenly between +N/2 and -N/2 so that the trigonometric interpolant is
/// unchanged; downsampling drops modes outside the target lattice.
SpectralScalar resample(const SpectralScalar& f, const FourierGrid& target);
SpectralVector resample(const SpectralVector& u, const FourierGrid& target);

// --- calculus -------------------------------------------------------------

/// Multiplies by i k_axis (axis 0 or 1). Nyquist modes map to zero.
SpectralScalar differentiate(const SpectralScalar& f, int axis);
/// (d1 f, d2 f). Not divergence-free in general.
SpectralVector gradient(const SpectralScalar& f);
/// (-d2 f, d1 f).
SpectralVector perp_gradient(const SpectralScalar& f);
SpectralScalar divergence(const SpectralVector& u);
/// d1 u2 - d2 u1, the scalar vorticity.
SpectralScalar curl2d(const SpectralVector& u);
/// -|k|^2 multiplier.
SpectralScalar laplacian(const SpectralScalar& f);

/// Velocity with vorticity omega: u = perp_gradient(psi), Laplacian psi = omega.
/// Throws InvalidField if omega has nonzero mean.
SpectralVector biot_savart(const SpectralScalar& omega);

/// Orthogonal projection onto divergence-free fields, (I - k k^T / |k|^2) per mode.
SpectralVector leray_project(const SpectralVector& v);

/// Zeroes every mode with Euclidean |k| > n. Throws std::invalid_argument for n < 1.
SpectralScalar galerkin_project(const SpectralScalar& f, int n);
SpectralVector galerkin_project(const SpectralVector& u, int n);
void galerkin_project_inplace(SpectralVector& u, int n);

/// Zeroes modes with max(|k1|, |k2|) above the grid's dealias cutoff.
SpectralScalar dealias(const SpectralScalar& f);
SpectralVector dealias(const SpectralVector& u);
void dealias_inplace(SpectralScalar& f);
void dealias_inplace(SpectralVector& u);

/// Pseudo-spectral (u . grad) v with both inputs and the result dealiased.
SpectralVector advective_product(const SpectralVector& u, const SpectralVector& v);
/// Pseudo-spectral u . grad f, dealiased.
SpectralScalar advective_product(const SpectralVector& u, const SpectralScalar& f);

/// Zero-mean pressure solving -Laplacian p = div((u . grad) u).
SpectralScalar pressure_recover(const SpectralVector& u);

}  // namespace egwp::spectral
