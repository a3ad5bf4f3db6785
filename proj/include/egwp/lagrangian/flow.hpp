#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "egwp/dynamics/system.hpp"

namespace egwp::lagrangian {

using dynamics::VelocitySource;
using spectral::SpectralScalar;
using spectral::SpectralVector;

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// Direct evaluation of a Fourier series at arbitrary points. Only nonzero
/// coefficients are kept, so the cost per point is O(retained modes).
class TrigSeries {
 public:
  explicit TrigSeries(const SpectralScalar& f);
  explicit TrigSeries(const SpectralVector& u);

  /// Scalar value (first component for vector series).
  double value(Point x) const;
  Point vector_value(Point x) const;

 private:
  struct Mode {
    int k1, k2;
    spectral::Complex a, b;  // weighted coefficients for each component
  };
  template <bool Vector>
  void accumulate(Point x, double& first, double& second) const;

  std::vector<Mode> modes_;
  int k1_max_ = 0;
  int k2_max_ = 0;
};

std::vector<Point> eval_velocity(const SpectralVector& u, std::span<const Point> points);

enum class Direction { forward, backward };
std::string to_string(Direction d);

/// Trajectories of an M x M lattice of seeds x_ij = (2 pi i / M, 2 pi j / M).
/// Forward maps store X_t(x); backward maps store the inverse X_t^-1(x) for
/// the same recorded times. Positions are unwrapped; seed index is i * M + j.
struct FlowMap {
  int seeds_per_side = 0;
  Direction direction = Direction::forward;
  double dt = 0.0;  ///< integration step
  std::vector<double> times;
  std::vector<std::vector<Point>> positions;  ///< [time][seed]

  std::size_t seed_count() const { return static_cast<std::size_t>(seeds_per_side) * seeds_per_side; }
  Point seed(std::size_t s) const;
  const std::vector<Point>& final_positions() const { return positions.back(); }
};

/// Maps a point into [0, 2pi)^2.
Point wrap(Point p);
/// Euclidean length of the componentwise periodic difference min(|d|, 2pi - |d|).
double torus_distance(Point a, Point b);

struct FlowOptions {
  double dt = 1e-2;
  int record_every = 1;  ///< keep every k-th step
  int threads = 1;       ///< seeds are split into contiguous blocks
};

/// RK4 particle integration through the velocity source over [0, T]; path
/// sources are linearly interpolated between stored states. T must be a
/// multiple of dt * record_every. Backward maps integrate the time-reversed,
/// sign-flipped field from each recorded time back to 0.
FlowMap integrate_flow(const VelocitySource& velocity, int seeds_per_side, double T, Direction direction,
                       const FlowOptions& options = {});

/// Moves points along the flow from time t0 to t1 (either order) in steps of
/// at most |dt|.
void transport_points(const VelocitySource& velocity, std::vector<Point>& points, double t0, double t1, double dt,
                      int threads = 1);

struct FlowQuality {
  double compressibility = 0.0;  ///< max bin count / expected count
  double inverse_residual = 0.0; ///< max over seeds of |X_T^-1(X_T(x)) - x|
};

/// Histogram estimate of the compressibility constant from the wrapped
/// final positions on bins_per_side^2 square bins, offset by half a seed
/// spacing so an undeformed lattice puts the same count in every bin.
double compressibility(const FlowMap& flow, int bins_per_side = 4);

/// Integrates the forward endpoints back to time 0 and reports the largest
/// torus distance to the seeds.
double inverse_residual(const FlowMap& forward, const VelocitySource& velocity, int threads = 1);

FlowQuality volume_check(const FlowMap& forward, const VelocitySource& velocity, int bins_per_side = 4,
                         int threads = 1);

/// sqrt(sum over seeds (2pi/M)^2 sup_t |X_t(x) - Y_t(x)|^2) with torus distance.
double flow_distance(const FlowMap& x, const FlowMap& y);

/// exp(int_0^T grad_sup(u)) * T * sup_t ||u_t - v_t||_L2, integrals by the
/// trapezoid rule on `samples` equally spaced times (grad_sup oversampled).
double gronwall_flow_bound(const VelocitySource& u, const VelocitySource& v, double T, int samples = 101);

/// rho_t(x) = rho_0(X_t^-1(x)) at the seeds, transformed on the seed grid.
/// Requires a backward map with an even seed count per side >= 8.
dynamics::ScalarPath pushforward(const SpectralScalar& rho0, const FlowMap& backward);

/// Bounded Lipschitz function with beta(0) = 0, applied pointwise.
struct Renormalization {
  std::function<double(double)> fn;
  double lipschitz = 1.0;
};

/// max over a fixed family of test functions phi(t, x) of
/// | int_0^T int beta(rho)(d_t phi + u . grad phi) - int beta(rho_T) phi_T + int beta(rho_0) phi_0 |.
/// Space integrals on the collocation grid, time integrals by Simpson's rule
/// (trapezoid when the path has an even number of states). Throws
/// std::invalid_argument when beta(0) != 0 or sampling contradicts the
/// declared Lipschitz constant.
double renormalize_check(const dynamics::ScalarPath& rho, const Renormalization& beta,
                         const VelocitySource& velocity);

/// Rows seed_i,seed_j,time,x1,x2 (unwrapped positions).
void write_flow_csv(std::ostream& os, const FlowMap& flow);
/// JSON object with M, T, dt, direction and the recorded time count.
std::string flow_manifest_json(const FlowMap& flow);

}  // namespace egwp::lagrangian
