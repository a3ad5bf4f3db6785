#pragma once

#include <iosfwd>
#include <vector>

#include "egwp/spectral/fields.hpp"

namespace egwp::analysis {

struct DissipationOptions {
  double T = 0.5;
  double dt = 1e-3;
  int store_every = 10;
  int base_resolution = 64;  ///< N for the first viscosity
  int max_resolution = 128;  ///< cap for N ~ nu^-1/2 and the reference run
  /// Runs whose |balance_residual| exceeds this times ||u0||^2 are unresolved.
  double residual_threshold = 1e-6;
};

struct DissipationRow {
  double nu = 0.0;
  int resolution = 0;
  double sup_gap = 0.0;      ///< sup_t ||u^nu_t - u^0_t||_L2
  double dissipation = 0.0;  ///< nu int_0^T ||grad u^nu||^2
  double balance_residual = 0.0;
  bool capped = false;       ///< resolution hit max_resolution
  bool resolved = true;
};

/// Navier-Stokes runs for each viscosity against a Galerkin-Euler reference
/// on the max_resolution grid (n = dealias cutoff). u0 must be band-limited
/// below every grid's cutoff.
std::vector<DissipationRow> anomalous_dissipation_series(const spectral::SpectralVector& u0,
                                                         const std::vector<double>& viscosities,
                                                         const DissipationOptions& options);

/// Header nu,sup_gap,dissipation then one row per viscosity.
void write_dissipation_csv(std::ostream& os, const std::vector<DissipationRow>& rows);

}  // namespace egwp::analysis
