#include "egwp/harness/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "egwp/analysis/bounds.hpp"
#include "egwp/analysis/dissipation.hpp"
#include "egwp/analysis/stability.hpp"
#include "egwp/dynamics/diagnostics.hpp"
#include "egwp/dynamics/initial_data.hpp"
#include "egwp/dynamics/integrator.hpp"
#include "egwp/lagrangian/flow.hpp"
#include "egwp/spectral/norms.hpp"
#include "egwp/spectral/operators.hpp"
#include "egwp/spectral/snapshot.hpp"

namespace egwp::harness {

using dynamics::RunOptions;
using dynamics::SystemSpec;
using dynamics::VelocitySource;
using spectral::FourierGrid;
using spectral::Sampling;
using spectral::SpectralScalar;
using spectral::SpectralVector;

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::blow_up: return "blow_up";
    case RunStatus::unresolved: return "unresolved";
  }
  return "?";
}

void ExperimentResult::check(const std::string& name, bool passed, const std::string& detail) {
  assertions.push_back({name, passed, detail});
}

void ExperimentResult::metric(const std::string& name, double value) { metrics.emplace_back(name, value); }

bool ExperimentResult::all_passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

OutputSink::OutputSink(std::filesystem::path dir, ExperimentResult& result) : dir_(std::move(dir)), result_(result) {}

std::filesystem::path OutputSink::path_for(const std::string& name) {
  if (std::find(result_.files.begin(), result_.files.end(), name) == result_.files.end()) result_.files.push_back(name);
  return dir_ / name;
}

std::ofstream OutputSink::open(const std::string& name) {
  std::ofstream os(path_for(name));
  if (!os) throw std::runtime_error("cannot write " + (dir_ / name).string());
  return os;
}

namespace {

constexpr double kPi = std::numbers::pi;

std::string g17(double x) { return fmt::format("{:.17g}", x); }

std::string le(double value, double bound) { return fmt::format("{:.6e} <= {:.6e}", value, bound); }

std::vector<double> halvings(double start, int count) {
  std::vector<double> out;
  for (int m = 0; m < count; ++m) out.push_back(start * std::ldexp(1.0, -m));
  return out;
}

SpectralVector random_field(const ExperimentConfig& c, const FourierGrid& g, std::uint64_t seed) {
  dynamics::RandomFieldSpec spec;
  spec.seed = seed;
  spec.kmax = c.kmax;
  spec.slope = c.slope;
  spec.l2_norm = c.l2_norm;
  return dynamics::random_velocity(g, spec);
}

SpectralVector initial_velocity(const ExperimentConfig& c, const FourierGrid& g, std::uint64_t seed) {
  if (c.field == "taylor_green") return dynamics::taylor_green(g);
  if (c.field == "shear") return dynamics::shear_flow(g);
  return random_field(c, g, seed);
}

RunOptions run_options(const ExperimentConfig& c) {
  RunOptions o;
  o.dt = c.dt;
  o.store_every = c.store_every;
  return o;
}

SpectralScalar sampled(const FourierGrid& g, double (*f)(double, double)) {
  spectral::PhysicalScalar p(g);
  for (int i1 = 0; i1 < g.size(); ++i1)
    for (int i2 = 0; i2 < g.size(); ++i2) p.at(i1, i2) = f(g.coordinate(i1), g.coordinate(i2));
  return spectral::to_spectral(p);
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

void write_diagnostics(OutputSink& out, const std::string& name, const dynamics::DiagnosticSeries& s) {
  auto os = out.open(name);
  dynamics::write_csv(os, s);
}

void write_velocity(OutputSink& out, const std::string& name, const SpectralVector& u, double t) {
  spectral::write_snapshot(out.path_for(name), spectral::make_snapshot(u, t));
}

void tg_stationarity(const ExperimentConfig& c, OutputSink& out, ExperimentResult& r) {
  const FourierGrid g(c.n);
  const SpectralVector u0 = initial_velocity(c, g, c.seed);
  const double n0 = spectral::l2_norm(u0);
  double drift = 0.0;
  dynamics::DiagnosticAccumulator acc(0.0);
  RunOptions o = run_options(c);
  o.on_velocity = [&](double t, const SpectralVector& u) {
    drift = std::max(drift, spectral::l2_norm(u - u0) / n0);
    acc.add(t, u);
  };
  const auto path = dynamics::run(SystemSpec::euler_galerkin(g.dealias_cutoff()), u0, c.T, o);
  r.runs.emplace_back("euler_galerkin", RunStatus::ok);
  write_diagnostics(out, "diagnostics.csv", acc.series());
  write_velocity(out, "final_velocity.bin", path.states.back(), path.end_time());
  r.metric("relative_drift", drift);
  r.check("drift", drift <= c.tol("drift", 1e-8), le(drift, c.tol("drift", 1e-8)));
}

void ns_decay(const ExperimentConfig& c, OutputSink& out, ExperimentResult& r) {
  const FourierGrid g(c.n);
  const double nu = c.nu.empty() ? 0.1 : c.nu.front();
  const SpectralVector u0 = initial_velocity(c, g, c.seed);
  dynamics::DiagnosticAccumulator acc(nu);
  RunOptions o = run_options(c);
  o.on_velocity = [&](double t, const SpectralVector& u) { acc.add(t, u); };
  const auto path = dynamics::run(SystemSpec::navier_stokes(nu), u0, c.T, o);
  r.runs.emplace_back("navier_stokes", RunStatus::ok);
  const auto& d = acc.series();
  write_diagnostics(out, "diagnostics.csv", d);
  write_velocity(out, "final_velocity.bin", path.states.back(), path.end_time());

  const double e0 = d.energy.front();
  const double balance = d.max_abs_balance_residual() / e0;
  r.metric("balance_residual", balance);
  r.check("balance", balance <= c.tol("balance", 1e-7), le(balance, c.tol("balance", 1e-7)));
  // single-shell data decays as exp(-nu |k|^2 t)
  const int shell = c.field == "taylor_green" ? 2 : c.field == "shear" ? 1 : 0;
  if (shell) {
    const double ratio = spectral::l2_norm(path.states.back()) / std::sqrt(e0);
    const double expected = std::exp(-nu * shell * c.T);
    const double err = std::abs(ratio - expected) / expected;
    r.metric("decay_error", err);
    r.check("decay", err <= c.tol("decay", 1e-7), le(err, c.tol("decay", 1e-7)));
  }
}

void energy_conservation(const ExperimentConfig& c, OutputSink& out, ExperimentResult& r) {
  const FourierGrid g(c.n);
  const SpectralVector u0 = initial_velocity(c, g, c.seed);
  const SystemSpec spec = SystemSpec::euler_galerkin(g.dealias_cutoff());
  std::vector<double> drifts;
  auto os = out.open("energy_order.csv");
  os << "dt,drift\n";
  for (double dt : {c.dt, 0.5 * c.dt}) {
    RunOptions o = run_options(c);
    o.dt = dt;
    o.store_every = dt == c.dt ? c.store_every : 2 * c.store_every;
    dynamics::DiagnosticAccumulator acc(0.0);
    o.on_velocity = [&](double t, const SpectralVector& u) { acc.add(t, u); };
    const auto path = dynamics::run(spec, u0, c.T, o);
    r.runs.emplace_back(fmt::format("euler_galerkin_dt_{}", g17(dt)), RunStatus::ok);
    drifts.push_back(acc.series().relative_energy_drift());
    os << g17(dt) << ',' << g17(drifts.back()) << '\n';
    if (dt == c.dt) {
      write_diagnostics(out, "diagnostics.csv", acc.series());
      write_velocity(out, "final_velocity.bin", path.states.back(), path.end_time());
    }
  }
  r.metric("relative_drift", drifts[0]);
  r.metric("relative_drift_half_dt", drifts[1]);
  if (drifts[1] > 0.0) r.metric("drift_ratio", drifts[0] / drifts[1]);
  r.check("drift", drifts[0] <= c.tol("drift", 1e-9), le(drifts[0], c.tol("drift", 1e-9)));
}

void vanishing_viscosity(const ExperimentConfig& c, OutputSink& out, ExperimentResult& r) {
  const FourierGrid g(c.n);
  const std::vector<double> nus = c.nu.empty() ? halvings(0.1, 5) : c.nu;
  analysis::DissipationOptions o;
  o.T = c.T;
  o.dt = c.dt;
  o.store_every = c.store_every;
  o.base_resolution = c.n;
  o.max_resolution = c.max_resolution;
  o.residual_threshold = c.tol("balance", 1e-6);
  const auto rows = analysis::anomalous_dissipation_series(initial_velocity(c, g, c.seed), nus, o);
  {
    auto os = out.open("dissipation.csv");
    analysis::write_dissipation_csv(os, rows);
  }
  auto os = out.open("resolution.csv");
  os << "nu,N,balance_residual,capped,resolved\n";
  std::vector<double> gaps, diss;
  for (const auto& row : rows) {
    os << g17(row.nu) << ',' << row.resolution << ',' << g17(row.balance_residual) << ',' << row.capped << ','
       << row.resolved << '\n';
    r.runs.emplace_back(fmt::format("nu_{}", g17(row.nu)), row.resolved ? RunStatus::ok : RunStatus::unresolved);
    gaps.push_back(row.sup_gap);
    diss.push_back(row.dissipation);
  }
  if (c.field == "taylor_green") {
    const double e0 = 2 * kPi * kPi;
    for (const auto& row : rows) {
      const double closed = 0.5 * e0 * (1.0 - std::exp(-4.0 * row.nu * c.T));
      const double err = std::abs(row.dissipation - closed) / closed;
      r.check(fmt::format("closed_form_nu_{}", g17(row.nu)), err <= c.tol("closed_form", 1e-6),
              le(err, c.tol("closed_form", 1e-6)));
    }
  }
  r.check("sup_gap_decreasing", strictly_decreasing(gaps));
  r.check("dissipation_decreasing", strictly_decreasing(diss));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    r.metric(fmt::format("gap_ratio_{}", i), gaps[i - 1] / gaps[i]);
    r.metric(fmt::format("dissipation_ratio_{}", i), diss[i - 1] / diss[i]);
  }
}

void galerkin_convergence(const ExperimentConfig& c, OutputSink& out, ExperimentResult& r) {
  const FourierGrid g(c.n);
  const std::vector<int> ns = c.galerkin_n.empty() ? std::vector<int>{8, 16, 32} : c.galerkin_n;
  const SpectralVector u0 = initial_velocity(c, g, c.seed);
  const auto reference = dynamics::run(SystemSpec::euler_galerkin(c.reference_n),
                                       spectral::galerkin_project(u0, c.reference_n), c.T, run_options(c));
  r.runs.emplace_back(fmt::format("reference_n_{}", c.reference_n), RunStatus::ok);
  std::vector<double> errors;
  auto os = out.open("convergence.csv");
  os << "n,sup_error\n";
  for (int n : ns) {
    const auto path =
        dynamics::run(SystemSpec::euler_galerkin(n), spectral::galerkin_project(u0, n), c.T, run_options(c));
    r.runs.emplace_back(fmt::format("n_{}", n), RunStatus::ok);
    double err = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i)
      err = std::max(err, spectral::l2_norm(path.states[i] - reference.states[i]));
    errors.push_back(err);
    os << n << ',' << g17(err) << '\n';
    r.metric(fmt::format("sup_error_n_{}", n), err);
  }
  r.check("error_decreasing", strictly_decreasing(errors));
}

void weak_strong(const ExperimentConfig& c, OutputSink& out, ExperimentResult& r) {
  const FourierGrid g(c.n);
  const std::vector<double> eps = c.epsilon.empty() ? std::vector<double>{1e-2, 1e-3} : c.epsilon;
  const SystemSpec spec = SystemSpec::euler_galerkin(g.dealias_cutoff());
  const double tol = c.tol("factor", 1e-3);
  auto os = out.open("stability.csv");
  os << "lhs,weight,rhs,satisfied\n";
  int satisfied = 0, dissipative = 0, total = 0;
  for (int i = 0; i < c.pairs; ++i) {
    const std::uint64_t seed = c.seed + i;
    const SpectralVector v0 = initial_velocity(c, g, seed);
    const SpectralVector delta = random_field(c, g, seed + 1000003);
    const auto v = dynamics::run(spec, v0, c.T, run_options(c));
    for (double e : eps) {
      const auto u = dynamics::run(spec, v0 + e * delta, c.T, run_options(c));
      const auto rep = analysis::weak_strong_report(u, v, tol);
      os << g17(rep.lhs) << ',' << g17(rep.gronwall_weight) << ',' << g17(rep.rhs) << ',' << rep.satisfied << '\n';
      satisfied += rep.satisfied;
      dissipative += rep.dissipative_satisfied;
      ++total;
    }
    r.runs.emplace_back(fmt::format("pair_{}", i), RunStatus::ok);
  }
  r.check("satisfied", satisfied == total, fmt::format("{}/{}", satisfied, total));
  r.check("dissipative_satisfied", dissipative == total, fmt::format("{}/{}", dissipative, total));
}

// psi with u = (d2 psi, -d1 psi): psi_k = curl_k / |k|^2
SpectralScalar stream_function(const SpectralVector& u) {
  SpectralScalar psi = spectral::curl2d(u);
  const FourierGrid& g = psi.grid();
  for (int i1 = 0; i1 < g.size(); ++i1)
    for (int i2 = 0; i2 < g.size(); ++i2) {
      const int k1 = g.wavenumber(i1), k2 = g.wavenumber(i2);
      const int kk = k1 * k1 + k2 * k2;
      psi.coeffs()[g.flat(i1, i2)] = kk ? psi.coeffs()[g.flat(i1, i2)] / static_cast<double>(kk) : 0.0;
    }
  return psi;
}

void rlf_certification(const ExperimentConfig& c, OutputSink& out, ExperimentResult& r) {
  const FourierGrid g(c.n);
  const SpectralVector u = initial_velocity(c, g, c.seed);
  const auto src = VelocitySource::frozen(u);
  lagrangian::FlowOptions fo{c.dt, c.store_every, c.threads};
  const auto fwd = lagrangian::integrate_flow(src, c.particles, c.T, lagrangian::Direction::forward, fo);
  r.runs.emplace_back("forward_flow", RunStatus::ok);
  const auto q = lagrangian::volume_check(fwd, src, 4, c.threads);

  const lagrangian::TrigSeries psi(stream_function(u));
  double stream = 0.0;
  for (const auto& positions : fwd.positions)
    for (std::size_t s = 0; s < fwd.seed_count(); ++s)
      stream = std::max(stream, std::abs(psi.value(positions[s]) - psi.value(fwd.seed(s))));

  {
    auto os = out.open("flow.csv");
    lagrangian::write_flow_csv(os, fwd);
  }
  out.open("flow.json") << lagrangian::flow_manifest_json(fwd) << '\n';
  auto os = out.open("quality.csv");
  os << "compressibility,inverse_residual,stream_drift\n"
     << g17(q.compressibility) << ',' << g17(q.inverse_residual) << ',' << g17(stream) << '\n';

  const double band = c.tol("compressibility", 8.0 / c.particles);
  r.metric("compressibility", q.compressibility);
  r.metric("inverse_residual", q.inverse_residual);
  r.metric("stream_drift", stream);
  r.check("inverse_residual", q.inverse_residual <= c.tol("inverse", 1e-8),
          le(q.inverse_residual, c.tol("inverse", 1e-8)));
  r.check("compressibility", std::abs(q.compressibility - 1.0) <= band, le(std::abs(q.compressibility - 1.0), band));
  r.check("stream_function", stream <= c.tol("stream", 1e-6), le(stream, c.tol("stream", 1e-6)));
}

void transport(const ExperimentConfig& c, OutputSink& out, ExperimentResult& r) {
  const FourierGrid g(c.n);
  const auto src = VelocitySource::frozen(dynamics::shear_flow(g));
  lagrangian::FlowOptions fo{c.dt, c.store_every, c.threads};
  const auto bwd = lagrangian::integrate_flow(src, c.particles, c.T, lagrangian::Direction::backward, fo);
  r.runs.emplace_back("backward_flow", RunStatus::ok);
  const SpectralScalar rho0 = sampled(g, [](double x, double) { return std::sin(x); });
  const auto rho = lagrangian::pushforward(rho0, bwd);
  const FourierGrid seeds(c.particles);
  const double n0 = spectral::l2_norm(rho0);

  auto os = out.open("transport.csv");
  os << "time,max_error,l2_norm\n";
  double err = 0.0, l2 = 0.0;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    const double t = rho.times[k];
    const auto p = spectral::to_physical(rho.states[k]);
    double e = 0.0;
    for (int i1 = 0; i1 < seeds.size(); ++i1)
      for (int i2 = 0; i2 < seeds.size(); ++i2)
        e = std::max(e, std::abs(p.at(i1, i2) - std::sin(seeds.coordinate(i1) - t * std::sin(seeds.coordinate(i2)))));
    const double n = spectral::l2_norm(rho.states[k]);
    os << g17(t) << ',' << g17(e) << ',' << g17(n) << '\n';
    err = std::max(err, e);
    l2 = std::max(l2, std::abs(n - n0) / n0);
  }
  const lagrangian::Renormalization clamp{[](double x) { return std::clamp(x, -1.0, 1.0); }, 1.0};
  const double renorm = lagrangian::renormalize_check(rho, clamp, src);
  r.metric("max_error", err);
  r.metric("l2_drift", l2);
  r.metric("renormalization_residual", renorm);
  r.check("pointwise", err <= c.tol("pointwise", 1e-8), le(err, c.tol("pointwise", 1e-8)));
  r.check("l2_conserved", l2 <= c.tol("l2", 1e-8), le(l2, c.tol("l2", 1e-8)));
  r.check("renormalized", renorm <= c.tol("renormalize", 1e-6), le(renorm, c.tol("renormalize", 1e-6)));
}

void scalar_diffusivity(const ExperimentConfig& c, OutputSink& out, ExperimentResult& r) {
  const FourierGrid g(c.n);
  const std::vector<double> kappas = c.kappa.empty() ? halvings(0.1, 5) : c.kappa;
  const auto src = VelocitySource::frozen(dynamics::shear_flow(g));
  const SpectralScalar rho0 = sampled(g, [](double, double y) { return std::sin(y); });
  const double e0 = spectral::l2_norm_squared(rho0);
  auto os = out.open("scalar_dissipation.csv");
  os << "kappa,dissipation,closed_form\n";
  for (double kappa : kappas) {
    dynamics::DiagnosticAccumulator acc(kappa);
    RunOptions o = run_options(c);
    o.on_scalar = [&](double t, const SpectralScalar& rho) { acc.add(t, rho); };
    dynamics::run_scalar(SystemSpec::advection_diffusion(kappa), rho0, src, c.T, o);
    r.runs.emplace_back(fmt::format("kappa_{}", g17(kappa)), RunStatus::ok);
    const double d = acc.series().dissipation_running.back();
    const double closed = 0.5 * e0 * (1.0 - std::exp(-2.0 * kappa * c.T));
    os << g17(kappa) << ',' << g17(d) << ',' << g17(closed) << '\n';
    const double err = std::abs(d - closed) / closed;
    r.check(fmt::format("closed_form_kappa_{}", g17(kappa)), err <= c.tol("closed_form", 1e-6),
            le(err, c.tol("closed_form", 1e-6)));
    // (1 - exp(-2x)) / 2x lies in [1 - x, 1]
    const double slope = d / (kappa * c.T * e0);
    r.check(fmt::format("linear_kappa_{}", g17(kappa)), std::abs(slope - 1.0) <= kappa * c.T,
            le(std::abs(slope - 1.0), kappa * c.T));
  }
}

void radii(const ExperimentConfig& c, OutputSink& out, ExperimentResult& r) {
  const FourierGrid g(c.n);
  std::vector<std::pair<std::string, SpectralVector>> phis = {{"taylor_green", dynamics::taylor_green(g)},
                                                              {"shear", dynamics::shear_flow(g)}};
  for (std::uint64_t s = c.seed; s < c.seed + 3; ++s)
    phis.emplace_back(fmt::format("random_{}", s), random_field(c, g, s));
  const std::vector<int> ks = c.k.empty() ? std::vector<int>{1, 2, 4} : c.k;
  const std::vector<double> cs = c.C.empty() ? std::vector<double>{0.01, 0.1} : c.C;

  auto os = out.open("radii.csv");
  os << "phi_id,k,T,C,radius\n";
  bool in_k = true, in_c = true;
  for (const auto& [id, phi] : phis) {
    std::vector<std::vector<double>> logs(cs.size(), std::vector<double>(ks.size()));
    for (std::size_t ic = 0; ic < cs.size(); ++ic)
      for (std::size_t ik = 0; ik < ks.size(); ++ik) {
        const auto rad = analysis::residual_radius(phi, {cs[ic], 3.0, c.T, ks[ik]});
        logs[ic][ik] = rad.log_value;
        os << id << ',' << ks[ik] << ',' << g17(c.T) << ',' << g17(cs[ic]) << ',' << g17(rad.value()) << '\n';
      }
    for (std::size_t ic = 0; ic < cs.size(); ++ic)
      for (std::size_t ik = 1; ik < ks.size(); ++ik)
        if (ks[ik] > ks[ik - 1]) in_k = in_k && logs[ic][ik] < logs[ic][ik - 1];
    for (std::size_t ik = 0; ik < ks.size(); ++ik)
      for (std::size_t ic = 1; ic < cs.size(); ++ic)
        if (cs[ic] > cs[ic - 1]) in_c = in_c && logs[ic][ik] < logs[ic - 1][ik];
  }
  r.check("decreasing_in_k", in_k);
  r.check("decreasing_in_C", in_c);
}

void growth_calibration(const ExperimentConfig& c, OutputSink& out, ExperimentResult& r) {
  const FourierGrid g(c.n);
  const SystemSpec spec = SystemSpec::euler_galerkin(g.dealias_cutoff());
  auto samples_for = [&](std::uint64_t seed) {
    const SpectralVector u0 = random_field(c, g, seed);
    const double w = spectral::sup_norm(spectral::curl2d(u0), Sampling::oversampled);
    const double h = spectral::hs_norm(u0, 3.0);
    std::vector<analysis::GrowthSample> s;
    RunOptions o = run_options(c);
    long step = 0;
    o.on_velocity = [&](double t, const SpectralVector& u) {
      if (step++ % c.store_every == 0) s.push_back({w, h, t, spectral::grad_sup(u, Sampling::oversampled)});
    };
    o.store_every = static_cast<int>(std::lround(c.T / c.dt));
    dynamics::run(spec, u0, c.T, o);
    r.runs.emplace_back(fmt::format("seed_{}", seed), RunStatus::ok);
    return s;
  };

  std::vector<std::vector<analysis::GrowthSample>> training, heldout;
  std::vector<analysis::GrowthSample> pooled;
  for (int i = 0; i < c.training_runs; ++i) {
    training.push_back(samples_for(c.seed + i));
    pooled.insert(pooled.end(), training.back().begin(), training.back().end());
  }
  for (int i = 0; i < c.heldout_runs; ++i) heldout.push_back(samples_for(c.seed + 100000 + i));
  const double C = analysis::calibrate_growth_constant(pooled);

  auto os = out.open("growth.csv");
  os << "role,run,t,grad_sup,bound\n";
  double worst = 0.0;
  for (auto* set : {&training, &heldout})
    for (std::size_t i = 0; i < set->size(); ++i)
      for (const auto& s : (*set)[i]) {
        const double bound = analysis::growth_bound(s.vorticity_sup, s.hs_norm, s.t, C);
        os << (set == &training ? "training" : "heldout") << ',' << i << ',' << g17(s.t) << ',' << g17(s.grad_sup)
           << ',' << g17(bound) << '\n';
      }
  for (const auto& run : heldout) worst = std::max(worst, analysis::worst_growth_ratio(run, C));
  r.metric("C", C);
  r.metric("worst_heldout_ratio", worst);
  r.check("heldout_bounded", worst <= 1.0, le(worst, 1.0));
}

void flow_stability(const ExperimentConfig& c, OutputSink& out, ExperimentResult& r) {
  const FourierGrid g(c.n);
  const std::vector<double> eps = c.epsilon.empty() ? std::vector<double>{1e-2, 1e-3} : c.epsilon;
  lagrangian::FlowOptions fo{c.dt, c.store_every, c.threads};
  auto os = out.open("flow_stability.csv");
  os << "pair,epsilon,distance,bound\n";
  int held = 0, total = 0;
  for (int i = 0; i < c.pairs; ++i) {
    const SpectralVector u = initial_velocity(c, g, c.seed + i);
    const SpectralVector delta = random_field(c, g, c.seed + i + 1000003);
    const auto su = VelocitySource::frozen(u);
    const auto x = lagrangian::integrate_flow(su, c.particles, c.T, lagrangian::Direction::forward, fo);
    for (double e : eps) {
      const auto sv = VelocitySource::frozen(u + e * delta);
      const auto y = lagrangian::integrate_flow(sv, c.particles, c.T, lagrangian::Direction::forward, fo);
      const double d = lagrangian::flow_distance(x, y);
      const double bound = lagrangian::gronwall_flow_bound(su, sv, c.T);
      os << i << ',' << g17(e) << ',' << g17(d) << ',' << g17(bound) << '\n';
      held += d <= bound;
      ++total;
    }
    r.runs.emplace_back(fmt::format("pair_{}", i), RunStatus::ok);
  }
  r.check("distance_bounded", held == total, fmt::format("{}/{}", held, total));
}

}  // namespace

const std::vector<ExperimentInfo>& experiments() {
  static const std::vector<ExperimentInfo> list = {
      {"tg_stationarity", "Galerkin Euler from the initial field; sup-t relative L2 drift", {{"drift", "1e-8"}},
       tg_stationarity},
      {"ns_decay", "Navier-Stokes with the first scheme.nu; energy balance and closed-form decay",
       {{"balance", "1e-7"}, {"decay", "1e-7"}}, ns_decay},
      {"energy_conservation", "Galerkin Euler energy drift at dt and dt/2", {{"drift", "1e-9"}}, energy_conservation},
      {"vanishing_viscosity", "dissipation and sup gap against Galerkin Euler over scheme.nu",
       {{"balance", "1e-6"}, {"closed_form", "1e-6"}}, vanishing_viscosity},
      {"galerkin_convergence", "sup-t L2 error of n in scheme.galerkin_n against scheme.reference_n", {},
       galerkin_convergence},
      {"weak_strong", "stability inequality on seeded perturbed pairs", {{"factor", "1e-3"}}, weak_strong},
      {"rlf_certification", "frozen-field particle flow: inverse, compressibility, stream function",
       {{"inverse", "1e-8"}, {"compressibility", "8/M"}, {"stream", "1e-6"}}, rlf_certification},
      {"transport", "pushforward of sin x1 under frozen shear", {{"pointwise", "1e-8"}, {"l2", "1e-8"}, {"renormalize", "1e-6"}},
       transport},
      {"scalar_diffusivity", "sin x2 under frozen shear over scheme.kappa", {{"closed_form", "1e-6"}},
       scalar_diffusivity},
      {"radii", "residual radii over scheme.k and scheme.C", {}, radii},
      {"growth_calibration", "calibrate C on training runs, check the gradient bound on held-out runs", {},
       growth_calibration},
      {"flow_stability", "flow distance of perturbed frozen fields against the Gronwall bound", {}, flow_stability},
  };
  return list;
}

const ExperimentInfo* find_experiment(const std::string& name) {
  for (const auto& e : experiments())
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace egwp::harness
