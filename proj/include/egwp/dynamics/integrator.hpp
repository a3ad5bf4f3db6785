#pragma once

#include <functional>

#include "egwp/dynamics/system.hpp"

namespace egwp::dynamics {

/// Leray projection of the dealiased pseudo-spectral product (u . grad) u.
SpectralVector nonlinear_term(const SpectralVector& u);

/// One step of classical RK4 with the diffusion handled by the exact
/// integrating factor exp(-nu |k|^2 dt). Throws BlowUp on non-finite output
/// and std::invalid_argument for dt <= 0 or a scalar-only spec.
SpectralVector step(const SystemSpec& spec, const SpectralVector& u, double dt);

/// One step of rho_t + u . grad rho = kappa Laplacian rho, velocity taken
/// from the source at t, t + dt/2, t + dt.
SpectralScalar step_scalar(double kappa, const SpectralScalar& rho, const VelocitySource& velocity, double t,
                           double dt);

struct RunOptions {
  double dt = 1e-3;
  /// Keep every k-th state in the returned path (the first and last are
  /// always on the stored grid since T must be a multiple of k * dt).
  int store_every = 1;
  /// Called after every integration step (and once at t = 0), independent
  /// of store_every.
  std::function<void(double, const SpectralVector&)> on_velocity;
  std::function<void(double, const SpectralScalar&)> on_scalar;
};

/// Integrates euler_galerkin or navier_stokes from u0 to T. The initial
/// datum must be divergence-free; for euler_galerkin it must satisfy
/// Pi_n u0 = u0.
SolutionPath run(const SystemSpec& spec, const SpectralVector& u0, double T, const RunOptions& options);

/// Integrates advection_diffusion by the given velocity source.
ScalarPath run_scalar(const SystemSpec& spec, const SpectralScalar& rho0, const VelocitySource& velocity, double T,
                      const RunOptions& options);

struct CoupledPaths {
  SolutionPath velocity;
  ScalarPath scalar;
};

/// Navier-Stokes (viscosity nu) with a passive scalar (diffusivity kappa)
/// advected by the evolving velocity, integrated as one system.
CoupledPaths run_coupled(const SystemSpec& spec, const SpectralVector& u0, const SpectralScalar& rho0, double T,
                         const RunOptions& options);

}  // namespace egwp::dynamics
