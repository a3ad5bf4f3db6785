#include <cmath>
#include <sstream>

#include "doctest.h"
#include "egwp/analysis/bounds.hpp"
#include "egwp/analysis/dissipation.hpp"
#include "egwp/analysis/stability.hpp"
#include "egwp/analysis/young.hpp"
#include "egwp/dynamics/diagnostics.hpp"
#include "egwp/dynamics/initial_data.hpp"
#include "egwp/dynamics/integrator.hpp"
#include "egwp/spectral/norms.hpp"
#include "egwp/spectral/operators.hpp"
#include "support.hpp"

using namespace egwp;
using namespace egwp::spectral;
using namespace egwp::analysis;
using dynamics::RandomFieldSpec;
using dynamics::RunOptions;
using dynamics::SystemSpec;
using egwp::test::kPi;

namespace {

RunOptions with_dt(double dt, int store_every = 1) {
  RunOptions o;
  o.dt = dt;
  o.store_every = store_every;
  return o;
}

SpectralVector smooth(const FourierGrid& g, std::uint64_t seed, int kmax = 3) {
  RandomFieldSpec spec;
  spec.seed = seed;
  spec.kmax = kmax;
  return dynamics::random_velocity(g, spec);
}

SolutionPath constant_path(const SpectralVector& u, int states, double dt) {
  SolutionPath p;
  p.spec = SystemSpec::euler_galerkin(1);
  p.dt = p.integration_dt = dt;
  for (int i = 0; i < states; ++i) {
    p.times.push_back(i * dt);
    p.states.push_back(u);
  }
  return p;
}

SolutionPath euler_run(const SpectralVector& u0, double T, double dt = 2e-3, int store_every = 5) {
  return dynamics::run(SystemSpec::euler_galerkin(u0.grid().dealias_cutoff()), u0, T, with_dt(dt, store_every));
}

TestIntegrand squared_speed() {
  return {[](double, double, double, std::span<const double> z) {
            double s = 0.0;
            for (double c : z) s += c * c;
            return s;
          },
          2.0};
}

}  // namespace

TEST_CASE("Euler residual on steady paths") {
  const FourierGrid g(32);
  const SolutionPath tg = euler_run(dynamics::taylor_green(g), 0.2);
  for (std::size_t i : {std::size_t{0}, std::size_t{5}, tg.size() - 1}) CHECK(l2_norm(euler_residual(tg, i)) <= 1e-6);
  const SolutionPath shear = constant_path(dynamics::shear_flow(g), 4, 0.1);
  CHECK(l2_norm(euler_residual(shear, 1)) <= 1e-10);
  CHECK_THROWS_AS(euler_residual(constant_path(dynamics::shear_flow(g), 2, 0.1), 0), std::invalid_argument);
  CHECK_THROWS_AS(euler_residual(shear, 4), std::out_of_range);
}

TEST_CASE("Euler residual of a resolved Galerkin run is second order in the stored spacing") {
  const FourierGrid g(64);
  const SpectralVector u0 = smooth(g, 3, 3);
  const SolutionPath coarse = euler_run(u0, 0.4, 1e-3, 40);
  const SolutionPath fine = euler_run(u0, 0.4, 1e-3, 20);
  const double a = l2_norm(euler_residual(coarse, 5));
  const double b = l2_norm(euler_residual(fine, 10));
  MESSAGE("residual " << a << " -> " << b);
  CHECK(a / b == doctest::Approx(4.0).epsilon(0.1));
  CHECK(b <= 10.0 * fine.dt * fine.dt);
}

TEST_CASE("negative strain part") {
  const FourierGrid g(32);
  CHECK(strain_negative_part_sup(SpectralVector(g)) == 0.0);
  CHECK(strain_negative_part_sup(dynamics::shear_flow(g)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(strain_negative_part_sup(dynamics::taylor_green(g)) == doctest::Approx(1.0).epsilon(1e-14));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SpectralVector v = smooth(g, seed, 6);
    CHECK(strain_negative_part_sup(v) <= grad_sup(v));
    CHECK(strain_negative_part_sup(v, Sampling::oversampled) <= grad_sup(v, Sampling::oversampled));
  }
}

TEST_CASE("weak-strong report: identical paths and Taylor-Green perturbation") {
  const FourierGrid g(32);
  const SolutionPath v = euler_run(dynamics::taylor_green(g), 1.0, 5e-3, 4);
  const StabilityReport same = weak_strong_report(v, v);
  CHECK(same.lhs == 0.0);
  CHECK(same.rhs == 0.0);
  CHECK(same.satisfied);
  CHECK(same.dissipative_satisfied);

  const SpectralVector delta = smooth(g, 77, 4);
  const SolutionPath u = euler_run(dynamics::taylor_green(g) + 1e-3 * delta, 1.0, 5e-3, 4);
  const StabilityReport r = weak_strong_report(u, v);
  CHECK(r.gronwall_weight == doctest::Approx(std::exp(std::sqrt(2.0))).epsilon(1e-6));
  CHECK(r.rhs == doctest::Approx(std::exp(std::sqrt(2.0)) * 1e-3 * l2_norm(delta)).epsilon(1e-6));
  CHECK(r.lhs <= r.rhs);
  CHECK(r.satisfied);
  CHECK(r.dissipative_satisfied);

  const SolutionPath shorter = euler_run(dynamics::taylor_green(g), 0.5, 5e-3, 4);
  CHECK_THROWS_AS(weak_strong_report(u, shorter), std::invalid_argument);
}

TEST_CASE("weak-strong report on random pairs") {
  const FourierGrid g(32);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const SpectralVector v0 = smooth(g, seed);
    const SolutionPath v = euler_run(v0, 0.5, 5e-3, 2);
    const SolutionPath u = euler_run(v0 + 1e-2 * smooth(g, seed + 50), 0.5, 5e-3, 2);
    const StabilityReport r = weak_strong_report(u, v);
    CHECK(r.satisfied);
    CHECK(r.dissipative_satisfied);
    CHECK(std::isfinite(r.residual_term));
  }
}

TEST_CASE("dissipative inequality with a non-solution test field") {
  const FourierGrid g(32);
  const SpectralVector u0 = smooth(g, 12);
  const SolutionPath u = euler_run(u0, 0.5, 5e-3, 2);
  const SolutionPath v =
      dynamics::run(SystemSpec::navier_stokes(0.05), u0 + 1e-2 * smooth(g, 13), 0.5, with_dt(5e-3, 2));
  const StabilityReport r = weak_strong_report(u, v);
  MESSAGE("dissipative lhs " << r.dissipative_lhs << " rhs " << r.dissipative_rhs << " residual "
                             << r.residual_term);
  CHECK(r.dissipative_satisfied);
  CHECK(r.residual_term != 0.0);
}

TEST_CASE("growth bound formula") {
  const FourierGrid g(32);
  const SpectralVector tg = dynamics::taylor_green(g);
  const BoundParams p{1.0, 3.0, 1.0, 1};
  const double expected = std::exp(3.0) * std::log(std::exp(1.0) + kPi * std::sqrt(54.0) / 2.0);
  CHECK(growth_bound(tg, 0.0, p) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(hs_norm(tg, 3.0) == doctest::Approx(kPi * std::sqrt(54.0)).epsilon(1e-13));
  double prev = 0.0;
  for (double t : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const double r = growth_bound(tg, t, p);
    CHECK(r > prev);
    prev = r;
  }
  CHECK(growth_bound(2.0 * tg, 1.0, p) > growth_bound(tg, 1.0, p));
  CHECK(growth_bound(SpectralVector(g), 1.0, p) == 0.0);
  CHECK_THROWS_AS(growth_bound(tg, 0.0, BoundParams{0.0, 3.0, 1.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(growth_bound(tg, 0.0, BoundParams{1.0, 2.0, 1.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(growth_bound(tg, -1.0, p), std::invalid_argument);
}

TEST_CASE("residual radii") {
  const FourierGrid g(32);
  const SpectralVector tg = dynamics::taylor_green(g);
  CHECK(radius_from_rate(0.0, 1.0, 4).value() == doctest::Approx(0.25).epsilon(1e-15));
  const Radius k1 = residual_radius(tg, {1.0, 3.0, 1.0, 1});
  const Radius k2 = residual_radius(tg, {1.0, 3.0, 1.0, 2});
  CHECK(k1.log_value - k2.log_value == doctest::Approx(std::log(2.0)).epsilon(1e-9));

  // r(1) = e^(C (1 + 2) 2) log(e + pi sqrt(54) / 2) for Taylor-Green.
  const double r1 = std::exp(6.0) * std::log(std::exp(1.0) + kPi * std::sqrt(54.0) / 2.0);
  CHECK(k1.log_value == doctest::Approx(-r1).epsilon(1e-12));
  CHECK(k1.value() == 0.0);  // underflows; only the log is meaningful
  const Radius doubled = residual_radius(tg, {1.0, 3.0, 1.0, 1}, RadiusVariant::doubled);
  CHECK(doubled.log_value == doctest::Approx(-2.0 * r1).epsilon(1e-12));

  const Radius base = residual_radius(tg, {0.1, 3.0, 0.5, 1});
  CHECK(residual_radius(tg, {0.1, 3.0, 0.5, 3}).log_value < base.log_value);
  CHECK(residual_radius(tg, {0.1, 3.0, 0.6, 1}).log_value < base.log_value);
  CHECK(residual_radius(tg, {0.2, 3.0, 0.5, 1}).log_value < base.log_value);
  CHECK(residual_radius(2.0 * tg, {0.1, 3.0, 0.5, 1}).log_value < base.log_value);
  CHECK_THROWS_AS(residual_radius(SpectralVector(g), {}), std::invalid_argument);
}

TEST_CASE("growth constant calibration") {
  const std::vector<GrowthSample> samples = {{2.0, 20.0, 0.0, 3.0}, {3.0, 40.0, 0.5, 9.0}, {1.0, 5.0, 1.0, 1.0}};
  const double c = calibrate_growth_constant(samples);
  CHECK(worst_growth_ratio(samples, c) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(worst_growth_ratio(samples, 0.9 * c) > 1.0);
  CHECK(calibrate_growth_constant({{2.0, 20.0, 0.0, 1e-3}}) == 1e-6);
}

TEST_CASE("Cauchy matrix") {
  const FourierGrid g(32);
  const SpectralVector u0 = smooth(g, 4);
  const SpectralVector delta = smooth(g, 5);
  std::vector<SolutionPath> paths = {euler_run(u0, 0.2), euler_run(u0, 0.2)};
  for (const auto& row : cauchy_matrix(paths))
    for (double x : row) CHECK(x == 0.0);
  paths.push_back(euler_run(u0 + 1e-2 * delta, 0.2));
  paths.push_back(euler_run(u0 + 1e-3 * delta, 0.2));
  const auto m = cauchy_matrix(paths);
  CHECK(m[0][2] == m[2][0]);
  CHECK(m[0][2] / m[0][3] == doctest::Approx(10.0).epsilon(0.02));
  paths.push_back(euler_run(u0, 0.4));
  CHECK_THROWS_AS(cauchy_matrix(paths), std::invalid_argument);
}

TEST_CASE("Cauchy matrix of a geometrically converging sequence") {
  const FourierGrid g(32);
  const SpectralVector u0 = smooth(g, 6);
  const SpectralVector delta = smooth(g, 7);
  std::vector<SolutionPath> paths;
  for (int k = 1; k <= 5; ++k) paths.push_back(euler_run(u0 + std::ldexp(1e-2, -k) * delta, 0.2));
  const auto m = cauchy_matrix(paths);
  for (std::size_t i = 0; i + 2 < paths.size(); ++i) {
    CHECK(m[i][i + 1] / m[i + 1][i + 2] == doctest::Approx(2.0).epsilon(0.02));
    for (std::size_t j = i + 1; j < paths.size(); ++j) CHECK(m[i][j] < std::ldexp(2e-2, -static_cast<int>(i) - 1) * l2_norm(delta));
  }
}

TEST_CASE("Young pairings and Jensen gap") {
  const FourierGrid g(16);
  const SolutionPath tg = euler_run(dynamics::taylor_green(g), 1.0, 1e-2, 10);
  CHECK(young_pairing(tg, squared_speed()) == doctest::Approx(2 * kPi * kPi).epsilon(1e-10));
  const TestIntegrand linear{[](double, double, double, std::span<const double> z) { return 3.0 * z[0] - z[1]; },
                             1.0};
  CHECK(std::abs(young_pairing(tg, linear)) <= 1e-12);

  SolutionPath negated = tg;
  for (auto& s : negated.states) s *= -1.0;
  const double energy_integral = energy_functional(tg, [](double) { return 1.0; });
  CHECK(jensen_gap({tg, negated}) == doctest::Approx(energy_integral).epsilon(1e-13));
  CHECK(jensen_gap({tg}) == 0.0);
  CHECK(young_pairing(std::vector<SolutionPath>{tg, negated}, squared_speed()) ==
        doctest::Approx(2 * kPi * kPi).epsilon(1e-10));

  const dynamics::DiagnosticSeries d = dynamics::diagnostics(tg);
  double trap = 0.0;
  for (std::size_t i = 1; i < d.size(); ++i) trap += 0.5 * tg.dt * (d.energy[i - 1] + d.energy[i]);
  CHECK(std::abs(energy_integral - trap) <= 1e-12 * trap);
  CHECK(concentration_defect(tg, tg) == 0.0);

  const TestIntegrand too_fast{[](double, double, double, std::span<const double> z) {
                                 return std::pow(std::hypot(z[0], z[1]), 3.0);
                               },
                               2.0};
  CHECK_THROWS_AS(young_pairing(tg, too_fast), std::invalid_argument);
}

TEST_CASE("Jensen gap is nonnegative on random ensembles") {
  const FourierGrid g(16);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::vector<SolutionPath> ensemble;
    for (std::uint64_t i = 0; i < 3; ++i) ensemble.push_back(constant_path(smooth(g, seed * 10 + i), 3, 0.1));
    CHECK(jensen_gap(ensemble) > 0.0);
  }
}

TEST_CASE("scalar Young pairing") {
  const FourierGrid g(16);
  dynamics::ScalarPath p;
  p.spec = SystemSpec::advection_diffusion(0.0);
  p.dt = p.integration_dt = 0.5;
  for (int i = 0; i < 3; ++i) {
    p.times.push_back(0.5 * i);
    p.states.push_back(test::from_function(g, [](double, double y) { return std::sin(y); }));
  }
  CHECK(young_pairing(p, squared_speed()) == doctest::Approx(2 * kPi * kPi).epsilon(1e-12));
}

TEST_CASE("anomalous dissipation table for Taylor-Green") {
  const FourierGrid g(16);
  DissipationOptions o;
  o.T = 0.5;
  o.dt = 1e-3;
  o.store_every = 50;
  o.base_resolution = 16;
  o.max_resolution = 32;
  const std::vector<double> nus = {0.1, 0.05, 0.025};
  const auto rows = anomalous_dissipation_series(dynamics::taylor_green(g), nus, o);
  REQUIRE(rows.size() == 3);
  const double e0 = 2 * kPi * kPi;
  for (const auto& r : rows) {
    const double closed = 0.5 * e0 * (1.0 - std::exp(-4.0 * r.nu * o.T));
    CHECK(std::abs(r.dissipation - closed) <= 1e-6 * closed);
    const double gap = (1.0 - std::exp(-2.0 * r.nu * o.T)) * std::sqrt(e0);
    CHECK(r.sup_gap == doctest::Approx(gap).epsilon(1e-8));
    CHECK(r.resolved);
  }
  CHECK(rows[0].resolution == 16);
  CHECK(rows[1].resolution == 24);
  CHECK(rows[2].resolution == 32);
  CHECK(!rows[2].capped);
  CHECK_THROWS_AS(anomalous_dissipation_series(dynamics::taylor_green(g), {0.05, 0.1}, o), std::invalid_argument);

  std::ostringstream os;
  write_dissipation_csv(os, rows);
  CHECK(os.str().rfind("nu,sup_gap,dissipation\n0.10000000000000001,", 0) == 0);
}
