#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "egwp/dynamics/system.hpp"

namespace egwp::dynamics {

/// Energy bookkeeping along a run. For velocity paths: energy ||u||^2,
/// enstrophy ||curl u||^2, dissipation_running nu * int_0^t ||grad u||^2.
/// For scalar paths the same columns hold ||rho||^2, ||grad rho||^2 and
/// kappa * int_0^t ||grad rho||^2. In both cases
/// balance_residual = energy/2 + dissipation_running - energy(0)/2.
struct DiagnosticSeries {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> enstrophy;
  std::vector<double> dissipation_running;
  std::vector<double> balance_residual;

  std::size_t size() const { return times.size(); }
  double max_abs_balance_residual() const;
  /// max_t |energy(t) - energy(0)| / energy(0); 0 for a zero initial energy.
  double relative_energy_drift() const;
};

/// Builds a DiagnosticSeries one state at a time (trapezoid rule in time),
/// so long runs need not keep every state.
class DiagnosticAccumulator {
 public:
  explicit DiagnosticAccumulator(double diffusion) : diffusion_(diffusion) {}

  void add(double t, const SpectralVector& u);
  void add(double t, const SpectralScalar& rho);
  const DiagnosticSeries& series() const { return series_; }

 private:
  void push(double t, double energy, double enstrophy, double gradient_sq);

  double diffusion_;
  double last_gradient_sq_ = 0.0;
  DiagnosticSeries series_;
};

/// Requires a uniform path (Path::validate); uses the stored states only.
DiagnosticSeries diagnostics(const SolutionPath& path);
DiagnosticSeries diagnostics(const ScalarPath& path);

/// Header line followed by one row per entry, 17 significant digits.
void write_csv(std::ostream& os, const DiagnosticSeries& series);
void write_csv(const std::string& filename, const DiagnosticSeries& series);

}  // namespace egwp::dynamics
