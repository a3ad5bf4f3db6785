#pragma once

#include <memory>
#include <string>
#include <vector>

#include "egwp/spectral/fields.hpp"

namespace egwp::dynamics {

using spectral::FourierGrid;
using spectral::SpectralScalar;
using spectral::SpectralVector;

enum class SystemKind { euler_galerkin, navier_stokes, advection_diffusion, coupled };

/// Which evolution equation a run integrates. Viscosity and diffusivity are
/// in units of 1/time on the 2pi-periodic torus.
struct SystemSpec {
  SystemKind kind = SystemKind::navier_stokes;
  int galerkin_n = 0;  ///< truncation radius, euler_galerkin only
  double nu = 0.0;
  double kappa = 0.0;

  static SystemSpec euler_galerkin(int n) { return {SystemKind::euler_galerkin, n, 0.0, 0.0}; }
  static SystemSpec navier_stokes(double nu) { return {SystemKind::navier_stokes, 0, nu, 0.0}; }
  static SystemSpec advection_diffusion(double kappa) { return {SystemKind::advection_diffusion, 0, 0.0, kappa}; }
  static SystemSpec coupled(double nu, double kappa) { return {SystemKind::coupled, 0, nu, kappa}; }

  bool evolves_velocity() const { return kind != SystemKind::advection_diffusion; }
  bool evolves_scalar() const { return kind == SystemKind::advection_diffusion || kind == SystemKind::coupled; }

  /// Throws std::invalid_argument on negative coefficients or a Galerkin
  /// radius outside [1, dealias_cutoff].
  void validate(const FourierGrid& grid) const;
  std::string describe() const;
};

/// Time-stamped sequence of states on a uniform time grid.
template <class State>
struct Path {
  SystemSpec spec;
  double dt = 0.0;              ///< spacing of the stored states
  double integration_dt = 0.0;  ///< step used to produce them
  std::vector<double> times;
  std::vector<State> states;

  const FourierGrid& grid() const { return states.front().grid(); }
  std::size_t size() const { return states.size(); }
  double end_time() const { return times.back(); }

  /// Throws std::invalid_argument if times are not uniform with spacing dt,
  /// do not start at 0, or states live on different grids.
  void validate() const;
};

using SolutionPath = Path<SpectralVector>;
using ScalarPath = Path<SpectralScalar>;

extern template struct Path<SpectralVector>;
extern template struct Path<SpectralScalar>;

/// Velocity supplied to scalar transport and particle tracking: either a
/// frozen field or a stored path, linearly interpolated in time.
class VelocitySource {
 public:
  static VelocitySource frozen(SpectralVector u);
  static VelocitySource from_path(std::shared_ptr<const SolutionPath> path);

  bool autonomous() const noexcept { return !path_; }
  const FourierGrid& grid() const;
  /// Last time the source is defined at (infinity for frozen fields).
  double end_time() const;

  /// States bracketing t and the interpolation weight of the later one:
  /// u(t) = (1 - w) * lo + w * hi. For frozen fields hi == lo and w == 0.
  struct Bracket {
    const SpectralVector* lo;
    const SpectralVector* hi;
    double weight;
  };
  Bracket bracket(double t) const;
  SpectralVector at(double t) const;

 private:
  std::shared_ptr<const SpectralVector> frozen_;
  std::shared_ptr<const SolutionPath> path_;
};

}  // namespace egwp::dynamics
