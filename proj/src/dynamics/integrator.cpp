#include "egwp/dynamics/integrator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "egwp/error.hpp"
#include "egwp/log.hpp"
#include "egwp/spectral/norms.hpp"
#include "egwp/spectral/operators.hpp"

namespace egwp::dynamics {
namespace {

using spectral::Complex;
using Planes = std::vector<SpectralScalar>;

// Lawson-type RK4: the linear diffusion is integrated exactly through the
// factors exp(-D |k|^2 h) and only the nonlinear part sees the RK stages.
class IntegratingFactorRk4 {
 public:
  IntegratingFactorRk4(const FourierGrid& grid, const std::vector<double>& diffusivities, double dt)
      : dt_(dt), half_(diffusivities.size()), full_(diffusivities.size()) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step: dt must be positive and finite");
    const int n = grid.size();
    for (std::size_t p = 0; p < diffusivities.size(); ++p) {
      half_[p].resize(grid.points());
      full_[p].resize(grid.points());
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2) {
          const double k1 = grid.wavenumber(i1), k2 = grid.wavenumber(i2);
          const double rate = diffusivities[p] * (k1 * k1 + k2 * k2);
          half_[p][grid.flat(i1, i2)] = std::exp(-rate * 0.5 * dt);
          full_[p][grid.flat(i1, i2)] = std::exp(-rate * dt);
        }
    }
  }

  template <class Rhs>
  Planes advance(const Planes& u, double t, Rhs&& rhs) const {
    const double h = dt_;
    const Planes k1 = rhs(t, u);
    Planes stage = u;
    for (std::size_t p = 0; p < u.size(); ++p)
      transform(stage[p], [&](std::size_t i, Complex x) { return half_[p][i] * (x + 0.5 * h * k1[p].coeffs()[i]); });
    const Planes k2 = rhs(t + 0.5 * h, stage);
    for (std::size_t p = 0; p < u.size(); ++p)
      for (std::size_t i = 0; i < stage[p].coeffs().size(); ++i)
        stage[p].coeffs()[i] = half_[p][i] * u[p].coeffs()[i] + 0.5 * h * k2[p].coeffs()[i];
    const Planes k3 = rhs(t + 0.5 * h, stage);
    for (std::size_t p = 0; p < u.size(); ++p)
      for (std::size_t i = 0; i < stage[p].coeffs().size(); ++i)
        stage[p].coeffs()[i] = full_[p][i] * u[p].coeffs()[i] + h * half_[p][i] * k3[p].coeffs()[i];
    const Planes k4 = rhs(t + h, stage);
    Planes out = u;
    for (std::size_t p = 0; p < u.size(); ++p)
      for (std::size_t i = 0; i < out[p].coeffs().size(); ++i) {
        const double e = full_[p][i], eh = half_[p][i];
        out[p].coeffs()[i] = e * u[p].coeffs()[i] +
                             h / 6.0 *
                                 (e * k1[p].coeffs()[i] + 2.0 * eh * (k2[p].coeffs()[i] + k3[p].coeffs()[i]) +
                                  k4[p].coeffs()[i]);
      }
    return out;
  }

 private:
  template <class F>
  static void transform(SpectralScalar& f, F&& fn) {
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) f.coeffs()[i] = fn(i, f.coeffs()[i]);
  }

  double dt_;
  std::vector<std::vector<double>> half_;
  std::vector<std::vector<double>> full_;
};

bool all_finite(const Planes& planes) {
  for (const auto& p : planes)
    for (const Complex& c : p.coeffs())
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

// Puts a velocity back on the admissible lattice: dealiased, truncated for
// Galerkin systems, exactly zero-mean and divergence-free.
SpectralVector admissible_velocity(SpectralScalar a, SpectralScalar b, const SystemSpec& spec) {
  a.coeffs()[0] = b.coeffs()[0] = 0.0;
  SpectralVector u = spectral::make_divergence_free(std::move(a), std::move(b));
  spectral::dealias_inplace(u);
  if (spec.kind == SystemKind::euler_galerkin) spectral::galerkin_project_inplace(u, spec.galerkin_n);
  return spectral::leray_project(u);
}

// Time derivative of the velocity without the diffusion term.
SpectralVector velocity_rhs(const SpectralVector& u, const SystemSpec& spec) {
  SpectralVector r = nonlinear_term(u);
  if (spec.kind == SystemKind::euler_galerkin) spectral::galerkin_project_inplace(r, spec.galerkin_n);
  r *= -1.0;
  return r;
}

SpectralScalar scalar_rhs(const SpectralVector& u, const SpectralScalar& rho) {
  SpectralScalar r = spectral::advective_product(u, rho);
  r.coeffs()[0] = 0.0;
  r *= -1.0;
  return r;
}

void require_finite(const Planes& planes, double t_before, const char* what) {
  if (!all_finite(planes)) {
    std::ostringstream os;
    os << what << ": non-finite values after the step from t=" << t_before;
    throw BlowUp(os.str(), t_before);
  }
}

std::size_t step_count(double T, const RunOptions& options) {
  if (!(options.dt > 0.0)) throw std::invalid_argument("run: dt must be positive");
  if (options.store_every < 1) throw std::invalid_argument("run: store_every must be >= 1");
  if (!(T >= 0.0)) throw std::invalid_argument("run: T must be >= 0");
  const double m = std::round(T / options.dt);
  if (std::abs(m * options.dt - T) > 1e-9 * std::max(1.0, T))
    throw std::invalid_argument("run: T must be an integer multiple of dt");
  const auto steps = static_cast<std::size_t>(m);
  if (steps % static_cast<std::size_t>(options.store_every) != 0)
    throw std::invalid_argument("run: number of steps must be a multiple of store_every");
  return steps;
}

class CflMonitor {
 public:
  CflMonitor(double dt, const FourierGrid& grid) : dt_(dt), limit_(0.5 * grid.spacing()) {}

  void check(const SpectralVector& u, double t, std::size_t step) {
    if (warned_ || step % 50 != 0) return;
    const double umax = spectral::sup_norm(u);
    if (dt_ * umax > limit_) {
      std::ostringstream os;
      os << "CFL: dt*max|u| = " << dt_ * umax << " exceeds " << limit_ << " at t=" << t;
      warn(os.str());
      warned_ = true;
    }
  }

 private:
  double dt_;
  double limit_;
  bool warned_ = false;
};

void check_initial_velocity(const SystemSpec& spec, const SpectralVector& u0) {
  spec.validate(u0.grid());
  if (!spec.evolves_velocity()) throw std::invalid_argument("run: spec does not evolve a velocity field");
  const double scale = std::max(u0[0].max_abs_coeff(), u0[1].max_abs_coeff());
  if (u0.divergence_defect() > 1e-10) throw InvalidField("run: initial velocity is not divergence-free");
  if (spec.kind == SystemKind::euler_galerkin) {
    const SpectralVector p = spectral::galerkin_project(u0, spec.galerkin_n);
    SpectralVector d = u0 - p;
    if (std::max(d[0].max_abs_coeff(), d[1].max_abs_coeff()) > 1e-12 * scale)
      throw InvalidField("run: Galerkin initial datum must satisfy Pi_n u0 = u0");
  } else {
    const SpectralVector d = u0 - spectral::dealias(u0);
    if (std::max(d[0].max_abs_coeff(), d[1].max_abs_coeff()) > 1e-12 * scale)
      warn("run: initial velocity has modes above the dealias cutoff; they are discarded");
  }
}

}  // namespace

SpectralVector nonlinear_term(const SpectralVector& u) {
  return spectral::leray_project(spectral::advective_product(u, u));
}

SpectralVector step(const SystemSpec& spec, const SpectralVector& u, double dt) {
  spec.validate(u.grid());
  if (!spec.evolves_velocity()) throw std::invalid_argument("step: spec does not evolve a velocity field");
  const IntegratingFactorRk4 rk(u.grid(), {spec.nu, spec.nu}, dt);
  const Planes next = rk.advance({u[0], u[1]}, 0.0, [&](double, const Planes& s) {
    const SpectralVector r = velocity_rhs(spectral::make_divergence_free(s[0], s[1]), spec);
    return Planes{r[0], r[1]};
  });
  require_finite(next, 0.0, "step");
  return admissible_velocity(next[0], next[1], spec);
}

SpectralScalar step_scalar(double kappa, const SpectralScalar& rho, const VelocitySource& velocity, double t,
                           double dt) {
  if (!(kappa >= 0.0)) throw std::invalid_argument("step_scalar: diffusivity must be >= 0");
  spectral::require_same_grid(rho.grid(), velocity.grid(), "step_scalar");
  const IntegratingFactorRk4 rk(rho.grid(), {kappa}, dt);
  const Planes next = rk.advance({rho}, t, [&](double s, const Planes& state) {
    return Planes{scalar_rhs(velocity.at(s), state[0])};
  });
  require_finite(next, t, "step_scalar");
  SpectralScalar out = next[0];
  out.coeffs()[0] = rho.coeffs()[0];
  spectral::dealias_inplace(out);
  return out;
}

SolutionPath run(const SystemSpec& spec, const SpectralVector& u0, double T, const RunOptions& options) {
  if (spec.kind == SystemKind::coupled) throw std::invalid_argument("run: use run_coupled for coupled systems");
  check_initial_velocity(spec, u0);
  const std::size_t steps = step_count(T, options);
  const IntegratingFactorRk4 rk(u0.grid(), {spec.nu, spec.nu}, options.dt);
  CflMonitor cfl(options.dt, u0.grid());

  SolutionPath path;
  path.spec = spec;
  path.dt = options.dt * options.store_every;
  path.integration_dt = options.dt;
  SpectralVector u = admissible_velocity(u0[0], u0[1], spec);
  path.times.push_back(0.0);
  path.states.push_back(u);
  if (options.on_velocity) options.on_velocity(0.0, u);

  auto rhs = [&](double, const Planes& s) {
    const SpectralVector r = velocity_rhs(spectral::make_divergence_free(s[0], s[1]), spec);
    return Planes{r[0], r[1]};
  };
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * options.dt;
    cfl.check(u, t, i);
    const Planes next = rk.advance({u[0], u[1]}, t, rhs);
    require_finite(next, t, "run");
    u = admissible_velocity(next[0], next[1], spec);
    const double t_next = static_cast<double>(i + 1) * options.dt;
    if (options.on_velocity) options.on_velocity(t_next, u);
    if ((i + 1) % static_cast<std::size_t>(options.store_every) == 0) {
      path.times.push_back(static_cast<double>(path.times.size()) * path.dt);
      path.states.push_back(u);
    }
  }
  return path;
}

ScalarPath run_scalar(const SystemSpec& spec, const SpectralScalar& rho0, const VelocitySource& velocity, double T,
                      const RunOptions& options) {
  if (spec.kind != SystemKind::advection_diffusion)
    throw std::invalid_argument("run_scalar: spec must be advection_diffusion");
  spec.validate(rho0.grid());
  spectral::require_same_grid(rho0.grid(), velocity.grid(), "run_scalar");
  const std::size_t steps = step_count(T, options);
  if (T > velocity.end_time() * (1.0 + 1e-12)) throw std::invalid_argument("run_scalar: velocity path ends before T");
  const IntegratingFactorRk4 rk(rho0.grid(), {spec.kappa}, options.dt);

  ScalarPath path;
  path.spec = spec;
  path.dt = options.dt * options.store_every;
  path.integration_dt = options.dt;
  SpectralScalar rho = spectral::dealias(rho0);
  const Complex mean = rho.coeffs()[0];
  path.times.push_back(0.0);
  path.states.push_back(rho);
  if (options.on_scalar) options.on_scalar(0.0, rho);

  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * options.dt;
    const Planes next = rk.advance({rho}, t, [&](double s, const Planes& state) {
      return Planes{scalar_rhs(velocity.at(s), state[0])};
    });
    require_finite(next, t, "run_scalar");
    rho = next[0];
    rho.coeffs()[0] = mean;
    spectral::dealias_inplace(rho);
    const double t_next = static_cast<double>(i + 1) * options.dt;
    if (options.on_scalar) options.on_scalar(t_next, rho);
    if ((i + 1) % static_cast<std::size_t>(options.store_every) == 0) {
      path.times.push_back(static_cast<double>(path.times.size()) * path.dt);
      path.states.push_back(rho);
    }
  }
  return path;
}

CoupledPaths run_coupled(const SystemSpec& spec, const SpectralVector& u0, const SpectralScalar& rho0, double T,
                         const RunOptions& options) {
  if (spec.kind != SystemKind::coupled) throw std::invalid_argument("run_coupled: spec must be coupled");
  check_initial_velocity(spec, u0);
  spectral::require_same_grid(u0.grid(), rho0.grid(), "run_coupled");
  const std::size_t steps = step_count(T, options);
  const IntegratingFactorRk4 rk(u0.grid(), {spec.nu, spec.nu, spec.kappa}, options.dt);
  CflMonitor cfl(options.dt, u0.grid());

  CoupledPaths out;
  for (auto* meta : {&out.velocity.spec, &out.scalar.spec}) *meta = spec;
  out.velocity.dt = out.scalar.dt = options.dt * options.store_every;
  out.velocity.integration_dt = out.scalar.integration_dt = options.dt;

  SpectralVector u = admissible_velocity(u0[0], u0[1], spec);
  SpectralScalar rho = spectral::dealias(rho0);
  const Complex mean = rho.coeffs()[0];
  auto store = [&](double t) {
    out.velocity.times.push_back(t);
    out.velocity.states.push_back(u);
    out.scalar.times.push_back(t);
    out.scalar.states.push_back(rho);
  };
  store(0.0);
  if (options.on_velocity) options.on_velocity(0.0, u);
  if (options.on_scalar) options.on_scalar(0.0, rho);

  auto rhs = [&](double, const Planes& s) {
    const SpectralVector v = spectral::make_divergence_free(s[0], s[1]);
    const SpectralVector r = velocity_rhs(v, spec);
    return Planes{r[0], r[1], scalar_rhs(v, s[2])};
  };
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * options.dt;
    cfl.check(u, t, i);
    const Planes next = rk.advance({u[0], u[1], rho}, t, rhs);
    require_finite(next, t, "run_coupled");
    u = admissible_velocity(next[0], next[1], spec);
    rho = next[2];
    rho.coeffs()[0] = mean;
    spectral::dealias_inplace(rho);
    const double t_next = static_cast<double>(i + 1) * options.dt;
    if (options.on_velocity) options.on_velocity(t_next, u);
    if (options.on_scalar) options.on_scalar(t_next, rho);
    if ((i + 1) % static_cast<std::size_t>(options.store_every) == 0)
      store(static_cast<double>(out.velocity.times.size()) * out.velocity.dt);
  }
  return out;
}

}  // namespace egwp::dynamics
