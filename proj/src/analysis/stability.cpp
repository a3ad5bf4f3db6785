#include "egwp/analysis/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "egwp/dynamics/integrator.hpp"
#include "egwp/spectral/operators.hpp"

namespace egwp::analysis {
namespace {

using spectral::Sampling;
using spectral::SpectralScalar;

spectral::PhysicalScalar sampled(const SpectralScalar& f, Sampling sampling) {
  if (sampling == Sampling::grid) return spectral::to_physical(f);
  return spectral::to_physical(spectral::resample(f, spectral::FourierGrid(2 * f.grid().size())));
}

// L2 pairing (2pi)^2 sum_k Re(conj(a_k) b_k) over both components.
double inner(const SpectralVector& a, const SpectralVector& b) {
  double s = 0.0;
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < a[c].coeffs().size(); ++i) s += (std::conj(a[c].coeffs()[i]) * b[c].coeffs()[i]).real();
  return s * spectral::kTwoPi * spectral::kTwoPi;
}

// Running trapezoid integral of samples f on a uniform grid of spacing h.
std::vector<double> cumulative(const std::vector<double>& f, double h) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  return out;
}

}  // namespace

void require_same_times(const SolutionPath& a, const SolutionPath& b, const char* where) {
  spectral::require_same_grid(a.grid(), b.grid(), where);
  bool same = a.times.size() == b.times.size();
  for (std::size_t i = 0; same && i < a.times.size(); ++i)
    same = std::abs(a.times[i] - b.times[i]) <= 1e-12 * std::max(1.0, a.times[i]);
  if (!same) throw std::invalid_argument(std::string(where) + ": paths have different time grids");
}

SpectralVector euler_residual(const SolutionPath& path, std::size_t index) {
  const std::size_t n = path.size();
  if (n < 3) throw std::invalid_argument("euler_residual: path needs at least 3 states");
  if (index >= n) throw std::out_of_range("euler_residual: time index out of range");
  const auto& v = path.states;
  const double h = path.dt;
  SpectralVector dv(path.grid());
  if (index == 0) {
    dv = (-3.0) * v[0] + 4.0 * v[1] - v[2];
  } else if (index == n - 1) {
    dv = 3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3];
  } else {
    dv = v[index + 1] - v[index - 1];
  }
  dv *= -1.0 / (2.0 * h);
  return dv - dynamics::nonlinear_term(v[index]);
}

double strain_negative_part_sup(const SpectralVector& v, Sampling sampling) {
  const auto a = sampled(spectral::differentiate(v[0], 0), sampling);
  const auto b = sampled(spectral::differentiate(v[0], 1), sampling);
  const auto c = sampled(spectral::differentiate(v[1], 0), sampling);
  const auto d = sampled(spectral::differentiate(v[1], 1), sampling);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.samples().size(); ++i) {
    const double s11 = a.samples()[i], s22 = d.samples()[i];
    const double s12 = 0.5 * (b.samples()[i] + c.samples()[i]);
    const double lambda_min = 0.5 * (s11 + s22) - std::hypot(0.5 * (s11 - s22), s12);
    worst = std::max(worst, -lambda_min);
  }
  return worst;
}

StabilityReport weak_strong_report(const SolutionPath& u, const SolutionPath& v, double tol) {
  require_same_times(u, v, "weak_strong_report");
  u.validate();
  v.validate();
  const std::size_t n = v.size();
  const double h = v.dt;
  std::vector<double> gap(n), grad(n), strain(n), pairing(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SpectralVector diff = u.states[i] - v.states[i];
    gap[i] = spectral::l2_norm(diff);
    grad[i] = spectral::grad_sup(v.states[i], Sampling::oversampled);
    strain[i] = strain_negative_part_sup(v.states[i], Sampling::oversampled);
    pairing[i] = n >= 3 ? inner(euler_residual(v, i), diff) : 0.0;
  }

  StabilityReport r;
  r.lhs = *std::max_element(gap.begin(), gap.end());
  r.gronwall_weight = std::exp(cumulative(grad, h).back());
  r.rhs = r.gronwall_weight * gap.front();
  r.satisfied = r.lhs <= r.rhs * (1.0 + tol);

  const std::vector<double> m = cumulative(strain, h);
  double best_margin = INFINITY;
  std::vector<double> kernel(n);
  for (std::size_t j = n > 1 ? 1 : 0; j < n; ++j) {
    for (std::size_t s = 0; s <= j; ++s) kernel[s] = std::exp(2.0 * (m[j] - m[s])) * pairing[s];
    double term = 0.0;
    for (std::size_t s = 1; s <= j; ++s) term += 0.5 * h * (kernel[s - 1] + kernel[s]);
    term *= 2.0;
    const double rhs = std::exp(2.0 * m[j]) * gap.front() * gap.front() + term;
    const double lhs = gap[j] * gap[j];
    const double margin = rhs + tol * std::abs(rhs) - lhs;
    if (margin < best_margin) {
      best_margin = margin;
      r.dissipative_lhs = lhs;
      r.dissipative_rhs = rhs;
      r.residual_term = term;
      r.dissipative_time = v.times[j];
    }
  }
  r.dissipative_satisfied = best_margin >= 0.0;
  return r;
}

std::vector<std::vector<double>> cauchy_matrix(const std::vector<SolutionPath>& paths) {
  for (std::size_t i = 1; i < paths.size(); ++i) require_same_times(paths[0], paths[i], "cauchy_matrix");
  const std::size_t m = paths.size();
  std::vector<std::vector<double>> out(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      double sup = 0.0;
      for (std::size_t t = 0; t < paths[i].size(); ++t)
        sup = std::max(sup, spectral::l2_norm(paths[i].states[t] - paths[j].states[t]));
      out[i][j] = out[j][i] = sup;
    }
  return out;
}

}  // namespace egwp::analysis
