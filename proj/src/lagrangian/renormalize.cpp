#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "egwp/lagrangian/flow.hpp"
#include "egwp/spectral/operators.hpp"

namespace egwp::lagrangian {
namespace {

using spectral::kTwoPi;

struct TimeFactor {
  double (*value)(double t, double T);
  double (*rate)(double t, double T);
};

constexpr double kPi = kTwoPi / 2.0;

const TimeFactor kTimeFactors[] = {
    {[](double, double) { return 1.0; }, [](double, double) { return 0.0; }},
    {[](double t, double T) { return t / T; }, [](double, double T) { return 1.0 / T; }},
    {[](double t, double T) { return std::cos(kPi * t / T); },
     [](double t, double T) { return -kPi / T * std::sin(kPi * t / T); }},
};

// Spatial factors cos(k . x) and sin(k . x).
struct SpaceMode {
  int k1, k2;
  bool cosine;
};

const SpaceMode kSpaceModes[] = {{1, 0, true},  {1, 0, false}, {0, 1, true}, {0, 1, false},
                                 {1, 1, true},  {1, -1, false}, {2, 1, true}, {1, 2, false}};

void check_beta(const Renormalization& beta, double lo, double hi) {
  if (!beta.fn) throw std::invalid_argument("renormalize_check: beta is empty");
  if (std::abs(beta.fn(0.0)) > 0.0) throw std::invalid_argument("renormalize_check: beta(0) must be 0");
  if (!(beta.lipschitz >= 0.0)) throw std::invalid_argument("renormalize_check: Lipschitz constant must be >= 0");
  lo = std::min(lo, -1.0) - 1.0;
  hi = std::max(hi, 1.0) + 1.0;
  const int n = 512;
  double prev = beta.fn(lo);
  for (int i = 1; i <= n; ++i) {
    const double x0 = lo + (hi - lo) * (i - 1) / n;
    const double x1 = lo + (hi - lo) * i / n;
    const double cur = beta.fn(x1);
    if (!std::isfinite(cur)) throw std::invalid_argument("renormalize_check: beta is not finite");
    if (std::abs(cur - prev) > beta.lipschitz * (x1 - x0) * (1.0 + 1e-9) + 1e-15)
      throw std::invalid_argument("renormalize_check: beta violates its Lipschitz constant");
    prev = cur;
  }
}

// Composite Simpson on an odd number of uniform samples, trapezoid otherwise.
double integrate_uniform(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  if (n % 2 == 1) {
    double s = f.front() + f.back();
    for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return s * h / 3.0;
  }
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < n; ++i) s += f[i];
  return s * h;
}

}  // namespace

double renormalize_check(const dynamics::ScalarPath& rho, const Renormalization& beta,
                         const VelocitySource& velocity) {
  rho.validate();
  const spectral::FourierGrid& g = rho.grid();
  const double T = rho.end_time();
  if (!(T > 0.0)) throw std::invalid_argument("renormalize_check: path must span a positive time");
  if (T > velocity.end_time() * (1.0 + 1e-12)) throw std::invalid_argument("renormalize_check: velocity ends early");

  std::vector<std::vector<double>> beta_samples;
  double lo = 0.0, hi = 0.0;
  for (const auto& state : rho.states) {
    const spectral::PhysicalScalar phys = spectral::to_physical(state);
    std::vector<double> v(phys.samples().begin(), phys.samples().end());
    for (double x : v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    beta_samples.push_back(std::move(v));
  }
  check_beta(beta, lo, hi);
  for (auto& v : beta_samples)
    for (double& x : v) x = beta.fn(x);

  const std::size_t nm = std::size(kSpaceModes);
  const std::size_t points = g.points();
  // Per spatial mode: m(x), d1 m(x), d2 m(x) on the grid.
  std::vector<std::vector<double>> m(nm), d1(nm), d2(nm);
  for (std::size_t q = 0; q < nm; ++q) {
    const SpaceMode& sm = kSpaceModes[q];
    m[q].resize(points);
    d1[q].resize(points);
    d2[q].resize(points);
    for (int i1 = 0; i1 < g.size(); ++i1)
      for (int i2 = 0; i2 < g.size(); ++i2) {
        const double arg = sm.k1 * g.coordinate(i1) + sm.k2 * g.coordinate(i2);
        const double val = sm.cosine ? std::cos(arg) : std::sin(arg);
        const double der = sm.cosine ? -std::sin(arg) : std::cos(arg);
        const std::size_t f = g.flat(i1, i2);
        m[q][f] = val;
        d1[q][f] = sm.k1 * der;
        d2[q][f] = sm.k2 * der;
      }
  }

  // For each time: sum_x beta m and sum_x beta (u . grad m), times cell area.
  const std::size_t nt = rho.size();
  std::vector<std::vector<double>> mass(nm, std::vector<double>(nt)), flux(nm, std::vector<double>(nt));
  for (std::size_t n = 0; n < nt; ++n) {
    const SpectralVector u = spectral::resample(velocity.at(rho.times[n]), g);
    const auto u1 = spectral::to_physical(u[0]);
    const auto u2 = spectral::to_physical(u[1]);
    const auto& b = beta_samples[n];
    for (std::size_t q = 0; q < nm; ++q) {
      double sm = 0.0, sf = 0.0;
      for (std::size_t f = 0; f < points; ++f) {
        sm += b[f] * m[q][f];
        sf += b[f] * (u1.samples()[f] * d1[q][f] + u2.samples()[f] * d2[q][f]);
      }
      mass[q][n] = sm * g.cell_area();
      flux[q][n] = sf * g.cell_area();
    }
  }

  double worst = 0.0;
  std::vector<double> integrand(nt);
  for (const TimeFactor& a : kTimeFactors)
    for (std::size_t q = 0; q < nm; ++q) {
      for (std::size_t n = 0; n < nt; ++n) {
        const double t = rho.times[n];
        integrand[n] = a.rate(t, T) * mass[q][n] + a.value(t, T) * flux[q][n];
      }
      const double bulk = integrate_uniform(integrand, rho.dt);
      const double boundary = a.value(T, T) * mass[q].back() - a.value(0.0, T) * mass[q].front();
      worst = std::max(worst, std::abs(bulk - boundary));
    }
  return worst;
}

}  // namespace egwp::lagrangian
