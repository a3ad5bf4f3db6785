#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "doctest.h"
#include "egwp/dynamics/initial_data.hpp"
#include "egwp/dynamics/integrator.hpp"
#include "egwp/lagrangian/flow.hpp"
#include "egwp/spectral/norms.hpp"
#include "egwp/spectral/operators.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace egwp;
using namespace egwp::spectral;
using namespace egwp::lagrangian;
using dynamics::RandomFieldSpec;
using dynamics::ScalarPath;
using dynamics::SystemSpec;
using egwp::test::kPi;

namespace {

double max_position_error(const FlowMap& flow, std::size_t k, Point (*exact)(Point, double)) {
  double e = 0.0;
  for (std::size_t s = 0; s < flow.seed_count(); ++s) {
    const Point want = exact(flow.seed(s), flow.times[k]);
    const Point got = flow.positions[k][s];
    e = std::max({e, std::abs(got.x1 - want.x1), std::abs(got.x2 - want.x2)});
  }
  return e;
}

// Direct summation over the whole lattice, independent of the half-plane
// bookkeeping in TrigSeries.
double direct_value(const SpectralScalar& f, Point x) {
  const FourierGrid& g = f.grid();
  Complex s = 0.0;
  for (int i1 = 0; i1 < g.size(); ++i1)
    for (int i2 = 0; i2 < g.size(); ++i2)
      s += f.coeffs()[g.flat(i1, i2)] * std::polar(1.0, g.wavenumber(i1) * x.x1 + g.wavenumber(i2) * x.x2);
  return s.real();
}

SpectralVector smooth_field(const FourierGrid& g, std::uint64_t seed) {
  RandomFieldSpec spec;
  spec.seed = seed;
  spec.kmax = 3;
  return dynamics::random_velocity(g, spec);
}

FlowOptions steps(double dt, int record_every = 1) {
  FlowOptions o;
  o.dt = dt;
  o.record_every = record_every;
  return o;
}

const Renormalization kClamp{[](double r) { return std::clamp(r, -1.0, 1.0); }, 1.0};

}  // namespace

TEST_CASE("eval_velocity: anchors and grid consistency") {
  const FourierGrid g(16);
  const Point p0[] = {{0.0, kPi / 2}};
  const Point v = eval_velocity(dynamics::shear_flow(g), p0).front();
  CHECK(v.x1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(v.x2) <= 1e-15);
  const Point p1[] = {{kPi / 2, kPi / 2}};
  const Point w = eval_velocity(dynamics::taylor_green(g), p1).front();
  CHECK(std::abs(w.x1) <= 1e-15);
  CHECK(std::abs(w.x2) <= 1e-15);

  const SpectralVector u(test::random_hermitian(g, 3), test::random_hermitian(g, 4));
  const auto a = to_physical(u[0]);
  const auto b = to_physical(u[1]);
  std::vector<Point> pts;
  for (int i1 = 0; i1 < 16; ++i1)
    for (int i2 = 0; i2 < 16; ++i2) pts.push_back({g.coordinate(i1), g.coordinate(i2)});
  const auto vals = eval_velocity(u, pts);
  double err = 0.0;
  for (std::size_t s = 0; s < pts.size(); ++s)
    err = std::max({err, std::abs(vals[s].x1 - a.samples()[s]), std::abs(vals[s].x2 - b.samples()[s])});
  CHECK(err <= 1e-12);

  const Point bad[] = {{std::nan(""), 0.0}};
  CHECK_THROWS_AS(eval_velocity(u, bad), std::invalid_argument);
}

TEST_CASE("TrigSeries agrees with direct summation off the grid") {
  const FourierGrid g(8);
  const SpectralScalar f = test::random_hermitian(g, 17, false);
  const TrigSeries series(f);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  double err = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Point x{uni(rng), uni(rng)};
    err = std::max(err, std::abs(series.value(x) - direct_value(f, x)));
  }
  CHECK(err <= 1e-12);
}

TEST_CASE("torus helpers") {
  CHECK(torus_distance({0.1, 0.0}, {2 * kPi - 0.1, 0.0}) == doctest::Approx(0.2));
  CHECK(torus_distance({0.0, 0.0}, {4 * kPi, 0.0}) <= 1e-15);
  const Point w = wrap({-0.5, 7.0});
  CHECK(w.x1 == doctest::Approx(2 * kPi - 0.5));
  CHECK(w.x2 == doctest::Approx(7.0 - 2 * kPi));
}

TEST_CASE("zero field gives the identity flow") {
  const FourierGrid g(16);
  const auto src = VelocitySource::frozen(SpectralVector(g));
  for (Direction d : {Direction::forward, Direction::backward}) {
    const FlowMap flow = integrate_flow(src, 16, 1.0, d, steps(0.1));
    CHECK(flow.times.size() == 11);
    CHECK(max_position_error(flow, 10, [](Point x, double) { return x; }) == 0.0);
  }
  const FlowMap flow = integrate_flow(src, 16, 1.0, Direction::forward, steps(0.1));
  const FlowQuality q = volume_check(flow, src);
  CHECK(q.compressibility == 1.0);
  CHECK(q.inverse_residual == 0.0);
}

TEST_CASE("frozen shear flow is x1 + t sin x2") {
  const FourierGrid g(16);
  const auto src = VelocitySource::frozen(dynamics::shear_flow(g));
  const FlowMap fwd = integrate_flow(src, 32, 1.0, Direction::forward, steps(1e-2, 10));
  const FlowMap bwd = integrate_flow(src, 32, 1.0, Direction::backward, steps(1e-2, 10));
  for (std::size_t k = 0; k < fwd.times.size(); ++k) {
    CHECK(max_position_error(fwd, k, [](Point x, double t) { return Point{x.x1 + t * std::sin(x.x2), x.x2}; }) <=
          1e-10);
    CHECK(max_position_error(bwd, k, [](Point x, double t) { return Point{x.x1 - t * std::sin(x.x2), x.x2}; }) <=
          1e-10);
  }
  const FlowQuality q = volume_check(fwd, src);
  CHECK(q.compressibility <= 1.0 + 4.0 / 32);
  CHECK(q.inverse_residual <= 1e-10);
}

TEST_CASE("time-dependent shear: path interpolation and backward maps") {
  const FourierGrid g(16);
  const double nu = 0.5;
  auto path = std::make_shared<const dynamics::SolutionPath>(
      dynamics::run(SystemSpec::navier_stokes(nu), dynamics::shear_flow(g), 1.0, {1e-3, 1, {}, {}}));
  const auto src = VelocitySource::from_path(path);
  static double s_nu;
  s_nu = nu;
  const FlowMap fwd = integrate_flow(src, 16, 1.0, Direction::forward, steps(1e-2, 25));
  const FlowMap bwd = integrate_flow(src, 16, 1.0, Direction::backward, steps(1e-2, 25));
  for (std::size_t k = 0; k < fwd.times.size(); ++k) {
    CHECK(max_position_error(fwd, k, [](Point x, double t) {
            return Point{x.x1 + (1 - std::exp(-s_nu * t)) / s_nu * std::sin(x.x2), x.x2};
          }) <= 1e-7);
    CHECK(max_position_error(bwd, k, [](Point x, double t) {
            return Point{x.x1 - (1 - std::exp(-s_nu * t)) / s_nu * std::sin(x.x2), x.x2};
          }) <= 1e-7);
  }
  CHECK_THROWS_AS(integrate_flow(src, 16, 2.0, Direction::forward, steps(1e-2)), std::invalid_argument);
  CHECK_THROWS_AS(integrate_flow(src, 16, 1.005, Direction::forward, steps(1e-2)), std::invalid_argument);
}

TEST_CASE("backward after forward is the identity along a random path") {
  const FourierGrid g(32);
  auto path = std::make_shared<const dynamics::SolutionPath>(
      dynamics::run(SystemSpec::navier_stokes(0.01), smooth_field(g, 9), 0.5, {5e-3, 1, {}, {}}));
  const auto src = VelocitySource::from_path(path);
  const FlowMap fwd = integrate_flow(src, 16, 0.5, Direction::forward, steps(5e-3, 50));
  const FlowMap bwd = integrate_flow(src, 16, 0.5, Direction::backward, steps(5e-3, 50));
  for (std::size_t k = 1; k < fwd.times.size(); ++k) {
    std::vector<Point> back = fwd.positions[k];
    transport_points(src, back, fwd.times[k], 0.0, 5e-3);
    std::vector<Point> ahead = bwd.positions[k];
    transport_points(src, ahead, 0.0, bwd.times[k], 5e-3);
    double e = 0.0;
    for (std::size_t s = 0; s < back.size(); ++s)
      e = std::max({e, torus_distance(back[s], fwd.seed(s)), torus_distance(ahead[s], fwd.seed(s))});
    CHECK(e <= 1e-8);
  }
}

TEST_CASE("frozen Taylor-Green: stream function, volume and inverse") {
  const FourierGrid g(16);
  const auto src = VelocitySource::frozen(dynamics::taylor_green(g));
  const int m = 64;
  const FlowMap fwd = integrate_flow(src, m, 1.0, Direction::forward, steps(1e-2, 10));
  double drift = 0.0;
  for (std::size_t k = 0; k < fwd.times.size(); ++k)
    for (std::size_t s = 0; s < fwd.seed_count(); ++s) {
      const Point x = fwd.positions[k][s];
      const Point x0 = fwd.seed(s);
      drift = std::max(drift, std::abs(std::sin(x.x1) * std::sin(x.x2) - std::sin(x0.x1) * std::sin(x0.x2)));
    }
  CHECK(drift <= 1e-6);
  const FlowQuality q = volume_check(fwd, src);
  MESSAGE("TG compressibility " << q.compressibility << " inverse residual " << q.inverse_residual);
  CHECK(q.compressibility >= 1.0 - 8.0 / m);
  CHECK(q.compressibility <= 1.0 + 8.0 / m);
  CHECK(q.inverse_residual <= 1e-8);
  CHECK_THROWS_AS(compressibility(fwd, 5), std::invalid_argument);
  CHECK_THROWS_AS(volume_check(integrate_flow(src, 8, 1.0, Direction::forward, steps(0.1)), src),
                  std::invalid_argument);
}

TEST_CASE("flow runs are identical across thread counts") {
  const FourierGrid g(16);
  const auto src = VelocitySource::frozen(smooth_field(g, 2));
  FlowOptions one = steps(1e-2, 10), many = steps(1e-2, 10);
  many.threads = 3;
  const FlowMap a = integrate_flow(src, 32, 0.5, Direction::forward, one);
  const FlowMap b = integrate_flow(src, 32, 0.5, Direction::forward, many);
  bool same = true;
  for (std::size_t k = 0; k < a.times.size(); ++k)
    for (std::size_t s = 0; s < a.seed_count(); ++s)
      same = same && a.positions[k][s].x1 == b.positions[k][s].x1 && a.positions[k][s].x2 == b.positions[k][s].x2;
  CHECK(same);
}

TEST_CASE("flow distance: identity vs shear and errors") {
  const FourierGrid g(16);
  const auto zero = VelocitySource::frozen(SpectralVector(g));
  const auto shear = VelocitySource::frozen(dynamics::shear_flow(g));
  const FlowMap id = integrate_flow(zero, 32, 1.0, Direction::forward, steps(1e-2, 10));
  const FlowMap sh = integrate_flow(shear, 32, 1.0, Direction::forward, steps(1e-2, 10));
  CHECK(flow_distance(sh, sh) == 0.0);
  // (int T^2 sin^2 x2 dx)^(1/2) = T pi sqrt(2)
  CHECK(flow_distance(id, sh) == doctest::Approx(kPi * std::sqrt(2.0)).epsilon(1e-10));
  const FlowMap other = integrate_flow(zero, 16, 1.0, Direction::forward, steps(1e-2, 10));
  CHECK_THROWS_AS(flow_distance(id, other), std::invalid_argument);
}

TEST_CASE("Groenwall comparison of nearby flows") {
  const FourierGrid g(32);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SpectralVector u = smooth_field(g, seed);
    for (double eps : {1e-2, 1e-3}) {
      SpectralVector delta = smooth_field(g, seed + 100);
      delta *= eps;
      const auto su = VelocitySource::frozen(u);
      const auto sv = VelocitySource::frozen(u + delta);
      const FlowMap x = integrate_flow(su, 32, 1.0, Direction::forward, steps(1e-2, 5));
      const FlowMap y = integrate_flow(sv, 32, 1.0, Direction::forward, steps(1e-2, 5));
      const double d = flow_distance(x, y);
      const double bound = gronwall_flow_bound(su, sv, 1.0);
      CHECK(d > 0.0);
      CHECK(d <= bound);
    }
  }
  auto path_u = std::make_shared<const dynamics::SolutionPath>(
      dynamics::run(SystemSpec::navier_stokes(0.01), smooth_field(g, 4), 0.5, {1e-2, 1, {}, {}}));
  SpectralVector v0 = smooth_field(g, 4) + 1e-2 * smooth_field(g, 44);
  auto path_v = std::make_shared<const dynamics::SolutionPath>(
      dynamics::run(SystemSpec::navier_stokes(0.01), v0, 0.5, {1e-2, 1, {}, {}}));
  const auto su = VelocitySource::from_path(path_u);
  const auto sv = VelocitySource::from_path(path_v);
  const double d = flow_distance(integrate_flow(su, 32, 0.5, Direction::forward, steps(1e-2)),
                                 integrate_flow(sv, 32, 0.5, Direction::forward, steps(1e-2)));
  CHECK(d <= gronwall_flow_bound(su, sv, 0.5));
}

TEST_CASE("pushforward under shear") {
  const FourierGrid g(16);
  const auto src = VelocitySource::frozen(dynamics::shear_flow(g));
  const int m = 64;
  const FlowMap bwd = integrate_flow(src, m, 1.0, Direction::backward, steps(1e-2, 10));
  const FourierGrid seeds(m);

  const ScalarPath same = pushforward(test::from_function(g, [](double, double y) { return std::sin(y); }), bwd);
  for (const auto& s : same.states)
    CHECK(test::max_coeff_diff(s, test::from_function(seeds, [](double, double y) { return std::sin(y); })) <= 1e-12);

  const SpectralScalar rho0 = test::from_function(g, [](double x, double) { return std::sin(x); });
  const ScalarPath rho = pushforward(rho0, bwd);
  double err = 0.0;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    const double t = rho.times[k];
    const auto p = to_physical(rho.states[k]);
    for (int i1 = 0; i1 < m; ++i1)
      for (int i2 = 0; i2 < m; ++i2) {
        const double want = std::sin(seeds.coordinate(i1) - t * std::sin(seeds.coordinate(i2)));
        err = std::max(err, std::abs(p.at(i1, i2) - want));
      }
    CHECK(std::abs(l2_norm(rho.states[k]) - l2_norm(rho0)) <= 1e-8 * l2_norm(rho0));
  }
  CHECK(err <= 1e-8);
  CHECK_THROWS_AS(pushforward(rho0, integrate_flow(src, m, 1.0, Direction::forward, steps(0.1))),
                  std::invalid_argument);
}

TEST_CASE("pushforward under Taylor-Green conserves Lp norms") {
  const FourierGrid g(16);
  const auto src = VelocitySource::frozen(dynamics::taylor_green(g));
  const FlowMap bwd = integrate_flow(src, 64, 1.0, Direction::backward, steps(1e-2, 20));
  const SpectralScalar rho0 = test::from_function(g, [](double x, double y) { return std::cos(x + 2 * y); });
  const ScalarPath rho = pushforward(rho0, bwd);
  const SpectralScalar r0 = resample(rho0, FourierGrid(64));
  for (double p : {1.0, 2.0, 4.0}) {
    // |f| has kinks, so the grid quadrature of the L1 norm is only second order
    const double tol = p == 1.0 ? 2e-3 : 1e-6;
    const double n0 = lp_norm(r0, p);
    for (const auto& s : rho.states) CHECK(std::abs(lp_norm(s, p) - n0) <= tol * n0);
  }
  for (const auto& s : rho.states) CHECK(std::abs(l2_norm(s) - l2_norm(r0)) <= 1e-8 * l2_norm(r0));
}

TEST_CASE("renormalization residual") {
  const FourierGrid g(16);
  const auto src = VelocitySource::frozen(dynamics::shear_flow(g));
  const FlowMap bwd = integrate_flow(src, 64, 1.0, Direction::backward, steps(1e-2));
  const SpectralScalar rho0 = test::from_function(g, [](double x, double) { return std::sin(x); });
  const ScalarPath rho = pushforward(rho0, bwd);

  const double r = renormalize_check(rho, kClamp, src);
  MESSAGE("clamp residual " << r);
  CHECK(r <= 1e-6);
  CHECK(renormalize_check(rho, {[](double) { return 0.0; }, 0.0}, src) == 0.0);

  ScalarPath corrupted = rho;
  for (std::size_t k = 0; k < corrupted.size(); ++k) corrupted.states[k] *= std::exp(-corrupted.times[k]);
  const double bad = renormalize_check(corrupted, kClamp, src);
  MESSAGE("corrupted residual " << bad);
  CHECK(bad > 1.0);

  CHECK_THROWS_AS(renormalize_check(rho, {[](double x) { return x + 1.0; }, 1.0}, src), std::invalid_argument);
  CHECK_THROWS_AS(renormalize_check(rho, {[](double x) { return 3.0 * x; }, 1.0}, src), std::invalid_argument);
}

TEST_CASE("flow CSV and manifest") {
  const FourierGrid g(16);
  const FlowMap flow =
      integrate_flow(VelocitySource::frozen(dynamics::shear_flow(g)), 2, 0.2, Direction::forward, steps(0.1));
  std::ostringstream os;
  write_flow_csv(os, flow);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "seed_i,seed_j,time,x1,x2");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 3 * 4);
  CHECK(os.str().find("\n1,0,0,3.1415926535897931,0\n") != std::string::npos);

  const auto j = nlohmann::json::parse(flow_manifest_json(flow));
  CHECK(j["M"] == 2);
  CHECK(j["direction"] == "forward");
  CHECK(j["T"].get<double>() == doctest::Approx(0.2));
  CHECK(j["dt"].get<double>() == 0.1);
}
