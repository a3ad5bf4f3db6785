#include "egwp/analysis/young.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "egwp/analysis/stability.hpp"
#include "egwp/spectral/norms.hpp"
#include "egwp/spectral/operators.hpp"

namespace egwp::analysis {
namespace {

double trapezoid(const std::vector<double>& f, double h) {
  double s = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) s += 0.5 * h * (f[i - 1] + f[i]);
  return s;
}

double space_integral(const spectral::FourierGrid& g, double t, const TestIntegrand& phi,
                      std::span<const spectral::PhysicalScalar> components) {
  double sum = 0.0;
  std::array<double, 2> z{};
  const std::size_t dim = components.size();
  for (int i1 = 0; i1 < g.size(); ++i1)
    for (int i2 = 0; i2 < g.size(); ++i2) {
      for (std::size_t c = 0; c < dim; ++c) z[c] = components[c].at(i1, i2);
      sum += phi.fn(t, g.coordinate(i1), g.coordinate(i2), std::span<const double>(z.data(), dim));
    }
  return sum * g.cell_area();
}

}  // namespace

void check_admissible(const TestIntegrand& phi, int dimension) {
  if (!phi.fn) throw std::invalid_argument("TestIntegrand: empty function");
  if (!(phi.p >= 0.0)) throw std::invalid_argument("TestIntegrand: p must be >= 0");
  std::array<double, 7> ratio{};
  const int directions = dimension == 1 ? 2 : 8;
  for (int j = 0; j <= 6; ++j) {
    const double r = std::pow(10.0, j);
    for (double t : {0.0, 0.5, 1.0})
      for (double x : {0.0, 1.0, 4.0})
        for (int d = 0; d < directions; ++d) {
          std::array<double, 2> z{};
          if (dimension == 1) {
            z[0] = d == 0 ? r : -r;
          } else {
            const double a = spectral::kTwoPi * d / directions;
            z = {r * std::cos(a), r * std::sin(a)};
          }
          const double v = phi.fn(t, x, 2.0 - x, std::span<const double>(z.data(), dimension));
          if (!std::isfinite(v)) throw std::invalid_argument("TestIntegrand: non-finite value");
          ratio[j] = std::max(ratio[j], std::abs(v) / std::pow(1.0 + r, phi.p));
        }
  }
  const double reference = std::max({ratio[0], ratio[1], ratio[2]});
  if (ratio[6] > 10.0 * reference && ratio[6] > ratio[4])
    throw std::invalid_argument("TestIntegrand: growth exceeds (1 + |z|)^p");
}

double young_pairing(const SolutionPath& path, const TestIntegrand& phi) {
  check_admissible(phi, 2);
  path.validate();
  std::vector<double> per_time;
  for (std::size_t n = 0; n < path.size(); ++n) {
    const std::array<spectral::PhysicalScalar, 2> u = {spectral::to_physical(path.states[n][0]),
                                                        spectral::to_physical(path.states[n][1])};
    per_time.push_back(space_integral(path.grid(), path.times[n], phi, u));
  }
  return trapezoid(per_time, path.dt);
}

double young_pairing(const ScalarPath& path, const TestIntegrand& phi) {
  check_admissible(phi, 1);
  path.validate();
  std::vector<double> per_time;
  for (std::size_t n = 0; n < path.size(); ++n) {
    const std::array<spectral::PhysicalScalar, 1> r = {spectral::to_physical(path.states[n])};
    per_time.push_back(space_integral(path.grid(), path.times[n], phi, r));
  }
  return trapezoid(per_time, path.dt);
}

double young_pairing(const std::vector<SolutionPath>& ensemble, const TestIntegrand& phi) {
  if (ensemble.empty()) throw std::invalid_argument("young_pairing: empty ensemble");
  double sum = 0.0;
  for (const auto& p : ensemble) {
    require_same_times(ensemble.front(), p, "young_pairing");
    sum += young_pairing(p, phi);
  }
  return sum / static_cast<double>(ensemble.size());
}

double jensen_gap(const std::vector<SolutionPath>& ensemble) {
  if (ensemble.empty()) throw std::invalid_argument("jensen_gap: empty ensemble");
  for (const auto& p : ensemble) require_same_times(ensemble.front(), p, "jensen_gap");
  const double m = static_cast<double>(ensemble.size());
  const SolutionPath& first = ensemble.front();
  std::vector<double> per_time;
  for (std::size_t n = 0; n < first.size(); ++n) {
    double second_moment = 0.0;
    SpectralVector mean = first.states[n];
    for (std::size_t i = 1; i < ensemble.size(); ++i) mean += ensemble[i].states[n];
    mean *= 1.0 / m;
    for (const auto& p : ensemble) second_moment += spectral::l2_norm_squared(p.states[n]);
    per_time.push_back(second_moment / m - spectral::l2_norm_squared(mean));
  }
  return trapezoid(per_time, first.dt);
}

double energy_functional(const SolutionPath& path, const std::function<double(double)>& chi) {
  path.validate();
  std::vector<double> f;
  for (std::size_t n = 0; n < path.size(); ++n) f.push_back(chi(path.times[n]) * spectral::l2_norm_squared(path.states[n]));
  return trapezoid(f, path.dt);
}

double concentration_defect(const SolutionPath& member, const SolutionPath& limit) {
  require_same_times(member, limit, "concentration_defect");
  std::vector<double> f;
  for (std::size_t n = 0; n < member.size(); ++n)
    f.push_back(spectral::l2_norm_squared(member.states[n]) - spectral::l2_norm_squared(limit.states[n]));
  return trapezoid(f, member.dt);
}

}  // namespace egwp::analysis
