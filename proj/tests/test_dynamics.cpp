#include <cmath>
#include <memory>
#include <sstream>
#include <string>

#include "doctest.h"
#include "egwp/dynamics/diagnostics.hpp"
#include "egwp/dynamics/initial_data.hpp"
#include "egwp/dynamics/integrator.hpp"
#include "egwp/error.hpp"
#include "egwp/log.hpp"
#include "egwp/spectral/norms.hpp"
#include "egwp/spectral/operators.hpp"
#include "support.hpp"

using namespace egwp;
using namespace egwp::spectral;
using namespace egwp::dynamics;
using egwp::test::kPi;
using egwp::test::max_coeff;
using egwp::test::max_coeff_diff;

namespace {

RunOptions with_dt(double dt, int store_every = 1) {
  RunOptions o;
  o.dt = dt;
  o.store_every = store_every;
  return o;
}

SpectralVector random_resolved(const FourierGrid& g, int kmax, std::uint64_t seed) {
  RandomFieldSpec spec;
  spec.seed = seed;
  spec.kmax = kmax;
  return random_velocity(g, spec);
}

// Collects warnings for the lifetime of the object.
struct WarningCapture {
  std::vector<std::string> messages;
  WarningHandler previous;
  WarningCapture() {
    previous = set_warning_handler([this](std::string_view m) { messages.emplace_back(m); });
  }
  ~WarningCapture() { set_warning_handler(previous); }
};

}  // namespace

TEST_CASE("initial data matches sampled analytic fields") {
  const FourierGrid g(16);
  CHECK(max_coeff_diff(dynamics::taylor_green(g), test::taylor_green(g)) <= 1e-15);
  CHECK(max_coeff_diff(shear_flow(g), test::shear(g)) <= 1e-15);
  CHECK(dynamics::taylor_green(g).divergence_defect() == 0.0);
}

TEST_CASE("random velocity: band-limited, normalized, seeded") {
  const FourierGrid g(32);
  const SpectralVector u = random_resolved(g, 5, 11);
  CHECK(u.divergence_free());
  CHECK(u.divergence_defect() <= 1e-12);
  CHECK(std::abs(l2_norm(u) - kPi * std::sqrt(2.0)) <= 1e-12);
  CHECK(max_coeff_diff(galerkin_project(u, 5), u) == 0.0);
  CHECK(max_coeff_diff(random_resolved(g, 5, 11), u) == 0.0);
  CHECK(max_coeff_diff(random_resolved(g, 5, 12), u) > 1e-3);
  RandomFieldSpec bad;
  bad.kmax = 16;
  CHECK_THROWS_AS(random_velocity(g, bad), std::invalid_argument);
}

TEST_CASE("nonlinear term vanishes on steady fields") {
  const FourierGrid g(32);
  CHECK(max_coeff(nonlinear_term(SpectralVector(g))) == 0.0);
  CHECK(max_coeff(nonlinear_term(dynamics::taylor_green(g))) <= 1e-12);
  CHECK(max_coeff(nonlinear_term(shear_flow(g))) <= 1e-12);
  const SpectralVector r = nonlinear_term(random_resolved(g, 4, 3));
  CHECK(r.divergence_defect() <= 1e-12);
  CHECK(std::abs(r[0].mean()) == 0.0);
}

TEST_CASE("single step: eigenfunction decay and Galerkin stationarity") {
  const FourierGrid g(16);
  const SpectralVector tg = dynamics::taylor_green(g);
  for (double dt : {0.1, 0.01}) {
    const double nu = 0.1;
    SpectralVector expected = tg;
    expected *= std::exp(-2.0 * nu * dt);
    const SpectralVector got = step(SystemSpec::navier_stokes(nu), tg, dt);
    CHECK(max_coeff_diff(got, expected) <= 1e-12 * max_coeff(tg));
    CHECK(got.divergence_free());
  }
  const SpectralVector same = step(SystemSpec::euler_galerkin(4), tg, 0.05);
  CHECK(max_coeff_diff(same, tg) <= 1e-12);
  CHECK_THROWS_AS(step(SystemSpec::navier_stokes(0.1), tg, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(step(SystemSpec::advection_diffusion(0.1), tg, 0.1), std::invalid_argument);
}

TEST_CASE("fourth-order self-convergence") {
  const FourierGrid g(32);
  const SpectralVector u0 = random_resolved(g, 4, 5);
  const SystemSpec spec = SystemSpec::navier_stokes(0.01);
  const double T = 0.5;
  auto end = [&](double dt) { return run(spec, u0, T, with_dt(dt, 1)).states.back(); };
  const SpectralVector a = end(0.05);
  const SpectralVector b = end(0.025);
  const SpectralVector c = end(0.0125);
  const double ratio = l2_norm(a - b) / l2_norm(b - c);
  MESSAGE("Richardson ratio " << ratio);
  CHECK(ratio > 13.0);
  CHECK(ratio < 19.0);
}

TEST_CASE("run: Taylor-Green under Galerkin Euler and Navier-Stokes") {
  const FourierGrid g(16);
  const SpectralVector tg = dynamics::taylor_green(g);
  const SolutionPath euler = run(SystemSpec::euler_galerkin(4), tg, 1.0, with_dt(1e-3, 10));
  CHECK(euler.size() == 101);
  CHECK(euler.end_time() == doctest::Approx(1.0).epsilon(1e-14));
  double drift = 0.0;
  for (const auto& u : euler.states) {
    drift = std::max(drift, l2_norm(u - tg));
    CHECK(max_coeff_diff(galerkin_project(u, 4), u) == 0.0);
  }
  CHECK(drift <= 1e-8);

  const SolutionPath ns = run(SystemSpec::navier_stokes(0.1), tg, 1.0, with_dt(1e-3, 100));
  CHECK(ns.size() == 11);
  const double ratio = l2_norm(ns.states.back()) / l2_norm(tg);
  CHECK(std::abs(ratio / std::exp(-0.2) - 1.0) <= 1e-8);
  for (const auto& u : ns.states) CHECK(u.divergence_defect() <= 1e-12);
}

TEST_CASE("run: argument errors") {
  const FourierGrid g(16);
  const SpectralVector tg = dynamics::taylor_green(g);
  CHECK_THROWS_AS(run(SystemSpec::navier_stokes(0.1), tg, 1.0005, with_dt(1e-3)), std::invalid_argument);
  CHECK_THROWS_AS(run(SystemSpec::navier_stokes(0.1), tg, 1.0, with_dt(1e-3, 3)), std::invalid_argument);
  CHECK_THROWS_AS(run(SystemSpec::navier_stokes(-0.1), tg, 1.0, with_dt(1e-3)), std::invalid_argument);
  CHECK_THROWS_AS(run(SystemSpec::euler_galerkin(6), tg, 1.0, with_dt(1e-3)), std::invalid_argument);
  CHECK_THROWS_AS(run(SystemSpec::euler_galerkin(1), tg, 1.0, with_dt(1e-3)), InvalidField);
  CHECK_THROWS_AS(run(SystemSpec::coupled(0.1, 0.1), tg, 1.0, with_dt(1e-3)), std::invalid_argument);
}

TEST_CASE("run: heat decay of a scalar in a frozen shear") {
  const FourierGrid g(16);
  const SpectralScalar rho0 = test::from_function(g, [](double, double y) { return std::sin(y); });
  const double kappa = 0.1;
  const ScalarPath path =
      run_scalar(SystemSpec::advection_diffusion(kappa), rho0, VelocitySource::frozen(shear_flow(g)), 1.0,
                 with_dt(1e-2, 10));
  REQUIRE(path.size() == 11);
  for (std::size_t i = 0; i < path.size(); ++i) {
    SpectralScalar expected = rho0;
    expected *= std::exp(-kappa * path.times[i]);
    CHECK(max_coeff_diff(path.states[i], expected) <= 1e-12);
  }
}

TEST_CASE("run: scalar advected by a stored path, interpolated in time") {
  const FourierGrid g(16);
  const double nu = 0.2;
  auto stored = std::make_shared<const SolutionPath>(
      run(SystemSpec::navier_stokes(nu), shear_flow(g), 1.0, with_dt(1e-2, 10)));
  const SpectralScalar rho0 = test::from_function(g, [](double, double y) { return std::cos(y); });
  const VelocitySource src = VelocitySource::from_path(stored);
  CHECK(!src.autonomous());
  const auto br = src.bracket(0.25);
  CHECK(br.weight == doctest::Approx(0.5));
  const ScalarPath path = run_scalar(SystemSpec::advection_diffusion(0.0), rho0, src, 1.0, with_dt(1e-2));
  CHECK(max_coeff_diff(path.states.back(), rho0) <= 1e-12);
  CHECK_THROWS_AS(run_scalar(SystemSpec::advection_diffusion(0.0), rho0, src, 2.0, with_dt(1e-2)),
                  std::invalid_argument);
}

TEST_CASE("coupled run: shear decay with a diffusing scalar") {
  const FourierGrid g(16);
  const double nu = 0.05, kappa = 0.2;
  const SpectralScalar rho0 = test::from_function(g, [](double, double y) { return std::sin(y); });
  const CoupledPaths out = run_coupled(SystemSpec::coupled(nu, kappa), shear_flow(g), rho0, 1.0, with_dt(1e-2, 50));
  REQUIRE(out.velocity.size() == 3);
  REQUIRE(out.scalar.size() == 3);
  SpectralVector u = shear_flow(g);
  u *= std::exp(-nu);
  SpectralScalar r = rho0;
  r *= std::exp(-kappa);
  CHECK(max_coeff_diff(out.velocity.states.back(), u) <= 1e-12);
  CHECK(max_coeff_diff(out.scalar.states.back(), r) <= 1e-12);
}

TEST_CASE("coupled run agrees with a separate velocity run") {
  const FourierGrid g(32);
  const SpectralVector u0 = random_resolved(g, 4, 8);
  const SpectralScalar rho0 = dynamics::random_scalar(g, RandomFieldSpec{21, 3, 1.0, 1.0});
  const CoupledPaths c = run_coupled(SystemSpec::coupled(0.01, 0.01), u0, rho0, 0.2, with_dt(1e-2));
  const SolutionPath v = run(SystemSpec::navier_stokes(0.01), u0, 0.2, with_dt(1e-2));
  CHECK(max_coeff_diff(c.velocity.states.back(), v.states.back()) <= 1e-14);
  CHECK(l2_norm(c.scalar.states.back()) < l2_norm(rho0));
}

TEST_CASE("diagnostics: Navier-Stokes energy balance on Taylor-Green") {
  const FourierGrid g(64);
  const double nu = 0.1, T = 1.0;
  const SpectralVector tg = dynamics::taylor_green(g);
  const SolutionPath path = run(SystemSpec::navier_stokes(nu), tg, T, with_dt(1e-3));
  const DiagnosticSeries d = diagnostics(path);
  const double e0 = l2_norm_squared(tg);
  CHECK(e0 == doctest::Approx(2 * kPi * kPi).epsilon(1e-14));
  CHECK(d.max_abs_balance_residual() <= 1e-7 * e0);
  const double closed = 0.5 * e0 * (1.0 - std::exp(-4.0 * nu * T));
  CHECK(std::abs(d.dissipation_running.back() - closed) <= 1e-7 * closed);
  for (std::size_t i = 1; i < d.size(); ++i) CHECK(d.dissipation_running[i] >= d.dissipation_running[i - 1]);
  // enstrophy of Taylor-Green is 2 * energy
  CHECK(d.enstrophy.front() == doctest::Approx(2 * e0).epsilon(1e-13));

  DiagnosticAccumulator acc(nu);
  RunOptions o = with_dt(1e-3, 1000);
  o.on_velocity = [&](double t, const SpectralVector& u) { acc.add(t, u); };
  const SolutionPath sparse = run(SystemSpec::navier_stokes(nu), tg, T, o);
  CHECK(sparse.size() == 2);
  CHECK(acc.series().size() == 1001);
  CHECK(acc.series().balance_residual.back() == d.balance_residual.back());
}

TEST_CASE("Galerkin Euler conserves energy with fourth-order drift") {
  const FourierGrid g(64);
  const SpectralVector u0 = random_resolved(g, 8, 17);
  const DiagnosticSeries fine = diagnostics(run(SystemSpec::euler_galerkin(21), u0, 1.0, with_dt(1e-3, 10)));
  MESSAGE("energy drift at dt=1e-3: " << fine.relative_energy_drift());
  CHECK(fine.relative_energy_drift() <= 1e-9);

  const FourierGrid gc(32);
  const SpectralVector v0 = random_resolved(gc, 6, 17);
  auto drift = [&](double dt) {
    return diagnostics(run(SystemSpec::euler_galerkin(10), v0, 1.0, with_dt(dt))).relative_energy_drift();
  };
  const double d2 = drift(0.005), d3 = drift(0.0025);
  MESSAGE("drifts " << d2 << " " << d3);
  const double ratio = d2 / d3;
  MESSAGE("drift ratio " << ratio);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("Galerkin Euler conserves enstrophy in the resolved regime") {
  const FourierGrid g(64);
  const int cutoff = g.dealias_cutoff();
  const SpectralVector u0 = random_resolved(g, cutoff / 2, 23);
  const DiagnosticSeries d = diagnostics(run(SystemSpec::euler_galerkin(cutoff), u0, 1.0, with_dt(1e-3, 50)));
  double drift = 0.0;
  for (double w : d.enstrophy) drift = std::max(drift, std::abs(w - d.enstrophy.front()));
  MESSAGE("relative enstrophy drift " << drift / d.enstrophy.front());
  CHECK(drift <= 1e-6 * d.enstrophy.front());
}

TEST_CASE("pure transport conserves the scalar L2 norm") {
  const FourierGrid g(64);
  auto path = std::make_shared<const SolutionPath>(
      run(SystemSpec::navier_stokes(0.005), random_resolved(g, 4, 31), 1.0, with_dt(1e-3, 10)));
  const SpectralScalar rho0 = dynamics::random_scalar(g, RandomFieldSpec{5, 4, 1.0, 0.0});
  const ScalarPath rho =
      run_scalar(SystemSpec::advection_diffusion(0.0), rho0, VelocitySource::from_path(path), 1.0, with_dt(1e-3));
  const DiagnosticSeries d = diagnostics(rho);
  MESSAGE("scalar L2 drift " << d.relative_energy_drift());
  CHECK(d.relative_energy_drift() <= 1e-8);
  CHECK(d.max_abs_balance_residual() <= 1e-8 * d.energy.front());
}

TEST_CASE("blow-up aborts with the last valid time and warns about CFL") {
  const FourierGrid g(16);
  SpectralVector u0 = random_resolved(g, 5, 2);
  u0 *= 1e3;
  WarningCapture capture;
  try {
    run(SystemSpec::euler_galerkin(5), u0, 100.0, with_dt(1.0));
    FAIL("expected BlowUp");
  } catch (const BlowUp& e) {
    CHECK(e.last_valid_time() >= 0.0);
    CHECK(e.last_valid_time() < 100.0);
  }
  REQUIRE(!capture.messages.empty());
  CHECK(capture.messages.front().find("CFL") != std::string::npos);
}

TEST_CASE("runs are bit-identical") {
  const FourierGrid g(32);
  const SpectralVector u0 = random_resolved(g, 6, 41);
  const SolutionPath a = run(SystemSpec::navier_stokes(0.01), u0, 0.1, with_dt(1e-2));
  const SolutionPath b = run(SystemSpec::navier_stokes(0.01), u0, 0.1, with_dt(1e-2));
  CHECK(max_coeff_diff(a.states.back(), b.states.back()) == 0.0);
}

TEST_CASE("diagnostic CSV format") {
  DiagnosticSeries s;
  s.times = {0.0, 0.1};
  s.energy = {1.0, 1.0 / 3.0};
  s.enstrophy = {2.0, 2.0};
  s.dissipation_running = {0.0, 0.25};
  s.balance_residual = {0.0, -1e-17};
  std::ostringstream os;
  write_csv(os, s);
  std::istringstream is(os.str());
  std::string header, row0, row1;
  std::getline(is, header);
  std::getline(is, row0);
  std::getline(is, row1);
  CHECK(header == "time,energy,enstrophy,dissipation_running,balance_residual");
  CHECK(row0 == "0,1,2,0,0");
  CHECK(row1 == "0.10000000000000001,0.33333333333333331,2,0.25,-1.0000000000000001e-17");
}
