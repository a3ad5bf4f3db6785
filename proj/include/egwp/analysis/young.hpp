#pragma once

#include <functional>
#include <span>
#include <vector>

#include "egwp/dynamics/system.hpp"

namespace egwp::analysis {

using dynamics::ScalarPath;
using dynamics::SolutionPath;

/// Integrand Phi(t, x1, x2, z) with |Phi| <= const (1 + |z|)^p. z has two
/// entries for velocity paths and one for scalar paths.
struct TestIntegrand {
  std::function<double(double, double, double, std::span<const double>)> fn;
  double p = 2.0;
};

/// Samples |Phi| / (1 + |z|)^p for |z| = 10^j, j = 0..6, and throws
/// std::invalid_argument when the ratio keeps growing.
void check_admissible(const TestIntegrand& phi, int dimension);

/// int_0^T int Phi(t, x, u_t(x)) dx dt for the atomic measure delta_u:
/// collocation grid in space, trapezoid in time.
double young_pairing(const SolutionPath& path, const TestIntegrand& phi);
double young_pairing(const ScalarPath& path, const TestIntegrand& phi);
/// Pairing with the empirical measure (1/m) sum delta_{u^i}.
double young_pairing(const std::vector<SolutionPath>& ensemble, const TestIntegrand& phi);

/// int_0^T (mean_i ||u^i_t||^2 - ||mean_i u^i_t||^2) dt for an ensemble on
/// a shared grid and time grid; exactly 0 for one member.
double jensen_gap(const std::vector<SolutionPath>& ensemble);

/// int_0^T chi(t) ||u_t||^2 dt (trapezoid).
double energy_functional(const SolutionPath& path, const std::function<double(double)>& chi);

/// int_0^T (||u^n_t||^2 - ||u_t||^2) dt for a member u^n against a limit u.
double concentration_defect(const SolutionPath& member, const SolutionPath& limit);

}  // namespace egwp::analysis
