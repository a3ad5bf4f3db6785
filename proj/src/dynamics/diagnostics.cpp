#include "egwp/dynamics/diagnostics.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "egwp/spectral/norms.hpp"
#include "egwp/spectral/operators.hpp"

namespace egwp::dynamics {

double DiagnosticSeries::max_abs_balance_residual() const {
  double m = 0.0;
  for (double r : balance_residual) m = std::max(m, std::abs(r));
  return m;
}

double DiagnosticSeries::relative_energy_drift() const {
  if (energy.empty() || energy.front() == 0.0) return 0.0;
  double m = 0.0;
  for (double e : energy) m = std::max(m, std::abs(e - energy.front()));
  return m / energy.front();
}

void DiagnosticAccumulator::add(double t, const SpectralVector& u) {
  const double e = spectral::l2_norm_squared(u);
  const double w = spectral::l2_norm_squared(spectral::curl2d(u));
  push(t, e, w, spectral::gradient_l2_squared(u));
}

void DiagnosticAccumulator::add(double t, const SpectralScalar& rho) {
  const double g = spectral::gradient_l2_squared(rho);
  push(t, spectral::l2_norm_squared(rho), g, g);
}

void DiagnosticAccumulator::push(double t, double energy, double enstrophy, double gradient_sq) {
  double running = 0.0;
  if (!series_.times.empty()) {
    const double h = t - series_.times.back();
    if (!(h > 0.0)) throw std::invalid_argument("diagnostics: times must be strictly increasing");
    running = series_.dissipation_running.back() + diffusion_ * 0.5 * h * (last_gradient_sq_ + gradient_sq);
  }
  last_gradient_sq_ = gradient_sq;
  series_.times.push_back(t);
  series_.energy.push_back(energy);
  series_.enstrophy.push_back(enstrophy);
  series_.dissipation_running.push_back(running);
  series_.balance_residual.push_back(0.5 * energy + running - 0.5 * series_.energy.front());
}

DiagnosticSeries diagnostics(const SolutionPath& path) {
  path.validate();
  DiagnosticAccumulator acc(path.spec.nu);
  for (std::size_t i = 0; i < path.size(); ++i) acc.add(path.times[i], path.states[i]);
  return acc.series();
}

DiagnosticSeries diagnostics(const ScalarPath& path) {
  path.validate();
  DiagnosticAccumulator acc(path.spec.kappa);
  for (std::size_t i = 0; i < path.size(); ++i) acc.add(path.times[i], path.states[i]);
  return acc.series();
}

void write_csv(std::ostream& os, const DiagnosticSeries& s) {
  os << "time,energy,enstrophy,dissipation_running,balance_residual\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    fmt::print(os, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", s.times[i], s.energy[i], s.enstrophy[i],
               s.dissipation_running[i], s.balance_residual[i]);
}

void write_csv(const std::string& filename, const DiagnosticSeries& series) {
  std::ofstream os(filename);
  if (!os) throw std::runtime_error("cannot open " + filename + " for writing");
  write_csv(os, series);
  if (!os) throw std::runtime_error("write failed: " + filename);
}

}  // namespace egwp::dynamics
