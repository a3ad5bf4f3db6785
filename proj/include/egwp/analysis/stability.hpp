#pragma once

#include <vector>

#include "egwp/dynamics/system.hpp"
#include "egwp/spectral/norms.hpp"

namespace egwp::analysis {

using dynamics::SolutionPath;
using spectral::SpectralVector;

/// E(v) = -d_t v - Pi((v . grad) v) at a stored time. The time derivative is
/// a central difference, second-order one-sided at the ends. Throws
/// std::invalid_argument for paths with fewer than 3 states.
SpectralVector euler_residual(const SolutionPath& path, std::size_t index);

/// Largest operator norm of the negative part of Sym(grad v) over the
/// sampling points.
double strain_negative_part_sup(const SpectralVector& v, spectral::Sampling sampling = spectral::Sampling::grid);

struct StabilityReport {
  double lhs = 0.0;              ///< sup_t ||u_t - v_t||
  double gronwall_weight = 1.0;  ///< exp(int_0^T ||grad v||_inf)
  double rhs = 0.0;              ///< weight * ||u_0 - v_0||
  bool satisfied = false;        ///< lhs <= rhs * (1 + tol)

  /// The dissipative inequality in squared form, evaluated at every stored
  /// time; these are the values at the time with the smallest margin.
  double dissipative_lhs = 0.0;
  double dissipative_rhs = 0.0;
  double residual_term = 0.0;  ///< signed 2 int exp(...) int E(v) . (u - v)
  double dissipative_time = 0.0;
  bool dissipative_satisfied = false;
};

/// Compares a candidate u with a regular test path v on identical time
/// grids. Sup norms of grad v and of the strain are oversampled.
StabilityReport weak_strong_report(const SolutionPath& u, const SolutionPath& v, double tol = 1e-3);

/// Entry (i, j) = sup_t ||u^i_t - u^j_t||_L2.
std::vector<std::vector<double>> cauchy_matrix(const std::vector<SolutionPath>& paths);

/// Throws std::invalid_argument unless both paths share grid and times.
void require_same_times(const SolutionPath& a, const SolutionPath& b, const char* where);

}  // namespace egwp::analysis
