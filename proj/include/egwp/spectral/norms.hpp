#pragma once

#include "egwp/spectral/fields.hpp"

namespace egwp::spectral {

/// How grid-based norms (L^p, sup) are evaluated: on the native collocation
/// grid or on a zero-padded grid with twice the resolution.
enum class Sampling { grid, oversampled };

/// L^2 over [0,2pi)^2 by Parseval: (2pi)^2 sum_k |c_k|^2.
double l2_norm(const SpectralScalar& f);
double l2_norm(const SpectralVector& u);
double l2_norm_squared(const SpectralScalar& f);
double l2_norm_squared(const SpectralVector& u);
/// Sum over both components of ||d_j u_i||^2, i.e. ||grad u||_{L2}^2.
double gradient_l2_squared(const SpectralVector& u);
double gradient_l2_squared(const SpectralScalar& f);

/// Inhomogeneous Sobolev norm with multiplier (1 + |k|^2)^(s/2). s >= 0.
double hs_norm(const SpectralScalar& f, double s);
double hs_norm(const SpectralVector& u, double s);

/// Uniform-grid quadrature of |f|^p (pointwise Euclidean length for vectors).
/// p >= 1; p = infinity gives the sup norm.
double lp_norm(const SpectralScalar& f, double p, Sampling sampling = Sampling::grid);
double lp_norm(const SpectralVector& u, double p, Sampling sampling = Sampling::grid);
double sup_norm(const SpectralScalar& f, Sampling sampling = Sampling::grid);
double sup_norm(const SpectralVector& u, Sampling sampling = Sampling::grid);

/// max over collocation points of the Frobenius norm of grad u.
double grad_sup(const SpectralVector& u, Sampling sampling = Sampling::grid);

/// ||u||_{L2} + ||curl u||_{Lp}.
double wp_norm(const SpectralVector& u, double p, Sampling sampling = Sampling::grid);

/// Tagged norm selector for call sites that pick the norm at run time.
struct Norm {
  enum class Kind { l2, hs, lp, sup, grad_sup, wp };
  Kind kind = Kind::l2;
  double parameter = 0.0;
  Sampling sampling = Sampling::grid;

  static Norm L2() { return {Kind::l2}; }
  static Norm Hs(double s) { return {Kind::hs, s}; }
  static Norm Lp(double p, Sampling smp = Sampling::grid) { return {Kind::lp, p, smp}; }
  static Norm Sup(Sampling smp = Sampling::grid) { return {Kind::sup, 0.0, smp}; }
  static Norm GradSup(Sampling smp = Sampling::grid) { return {Kind::grad_sup, 0.0, smp}; }
  static Norm Wp(double p, Sampling smp = Sampling::grid) { return {Kind::wp, p, smp}; }
};

/// Throws std::invalid_argument for p < 1, s < 0, or a vector-only norm on a scalar.
double norm(const SpectralScalar& f, const Norm& kind);
double norm(const SpectralVector& u, const Norm& kind);

}  // namespace egwp::spectral
