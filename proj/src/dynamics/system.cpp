#include "egwp/dynamics/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "egwp/error.hpp"

namespace egwp::dynamics {

void SystemSpec::validate(const FourierGrid& grid) const {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw std::invalid_argument("SystemSpec: viscosity must be finite and >= 0");
  if (!(kappa >= 0.0) || !std::isfinite(kappa))
    throw std::invalid_argument("SystemSpec: diffusivity must be finite and >= 0");
  if (kind == SystemKind::euler_galerkin && (galerkin_n < 1 || galerkin_n > grid.dealias_cutoff()))
    throw std::invalid_argument("SystemSpec: Galerkin radius " + std::to_string(galerkin_n) +
                                " outside [1, " + std::to_string(grid.dealias_cutoff()) + "]");
}

std::string SystemSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case SystemKind::euler_galerkin: os << "euler_galerkin(n=" << galerkin_n << ")"; break;
    case SystemKind::navier_stokes: os << "navier_stokes(nu=" << nu << ")"; break;
    case SystemKind::advection_diffusion: os << "advection_diffusion(kappa=" << kappa << ")"; break;
    case SystemKind::coupled: os << "coupled(nu=" << nu << ",kappa=" << kappa << ")"; break;
  }
  return os.str();
}

template <class State>
void Path<State>::validate() const {
  if (states.empty() || states.size() != times.size())
    throw std::invalid_argument("Path: states and times must be nonempty and of equal length");
  if (times.front() != 0.0) throw std::invalid_argument("Path: times must start at 0");
  if (!(dt > 0.0)) throw std::invalid_argument("Path: dt must be positive");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs(times[i] - times[i - 1] - dt) > 1e-12 * std::max(1.0, times[i]))
      throw std::invalid_argument("Path: non-uniform time grid at index " + std::to_string(i));
    spectral::require_same_grid(states[0].grid(), states[i].grid(), "Path");
  }
}

template struct Path<SpectralVector>;
template struct Path<SpectralScalar>;

VelocitySource VelocitySource::frozen(SpectralVector u) {
  VelocitySource s;
  s.frozen_ = std::make_shared<const SpectralVector>(std::move(u));
  return s;
}

VelocitySource VelocitySource::from_path(std::shared_ptr<const SolutionPath> path) {
  if (!path) throw std::invalid_argument("VelocitySource: null path");
  path->validate();
  VelocitySource s;
  s.path_ = std::move(path);
  return s;
}

const FourierGrid& VelocitySource::grid() const { return path_ ? path_->grid() : frozen_->grid(); }

double VelocitySource::end_time() const {
  return path_ ? path_->end_time() : std::numeric_limits<double>::infinity();
}

VelocitySource::Bracket VelocitySource::bracket(double t) const {
  if (!path_) return {frozen_.get(), frozen_.get(), 0.0};
  const double tol = 1e-9 * path_->dt;
  if (t < -tol || t > path_->end_time() + tol)
    throw std::out_of_range("VelocitySource: time " + std::to_string(t) + " outside the stored path");
  const double x = t / path_->dt;
  auto i = static_cast<std::ptrdiff_t>(std::floor(x));
  const auto last = static_cast<std::ptrdiff_t>(path_->size()) - 1;
  i = std::clamp<std::ptrdiff_t>(i, 0, std::max<std::ptrdiff_t>(last - 1, 0));
  double w = x - static_cast<double>(i);
  if (last == 0) return {&path_->states[0], &path_->states[0], 0.0};
  w = std::clamp(w, 0.0, 1.0);
  // Snap to a stored state when t is on the grid up to round-off.
  if (w < 1e-12) w = 0.0;
  if (w > 1.0 - 1e-12) w = 1.0;
  return {&path_->states[static_cast<std::size_t>(i)], &path_->states[static_cast<std::size_t>(i) + 1], w};
}

SpectralVector VelocitySource::at(double t) const {
  const Bracket b = bracket(t);
  if (b.weight == 0.0) return *b.lo;
  if (b.weight == 1.0) return *b.hi;
  return (1.0 - b.weight) * *b.lo + b.weight * *b.hi;
}

}  // namespace egwp::dynamics
