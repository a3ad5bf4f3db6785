#include "egwp/lagrangian/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <memory>

#include "egwp/error.hpp"
#include "egwp/spectral/norms.hpp"
#include "egwp/spectral/operators.hpp"

namespace egwp::lagrangian {
namespace {

using spectral::Complex;
using spectral::kTwoPi;

// Powers e^{i k x} for k in [-kmax, kmax], stored at index k + kmax.
void fill_powers(std::vector<Complex>& out, double x, int kmax) {
  out.resize(2 * kmax + 1);
  out[kmax] = 1.0;
  const Complex w = std::polar(1.0, x);
  for (int k = 1; k <= kmax; ++k) {
    out[kmax + k] = out[kmax + k - 1] * w;
    out[kmax - k] = std::conj(out[kmax + k]);
  }
}

// Runs fn(begin, end) over [0, n) split into contiguous blocks.
template <class Fn>
void parallel_blocks(std::size_t n, int threads, Fn&& fn) {
  const auto t = static_cast<std::size_t>(std::clamp(threads, 1, 256));
  if (t == 1 || n < 2 * t) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t block = (n + t - 1) / t;
  for (std::size_t b = 0; b < n; b += block) pool.emplace_back([&fn, b, block, n] { fn(b, std::min(n, b + block)); });
  for (auto& th : pool) th.join();
}

// Velocity at one time, as a blend of at most two cached series.
struct StageField {
  const TrigSeries* lo;
  const TrigSeries* hi;
  double weight;
  double sign;

  Point operator()(Point x) const {
    Point a = lo->vector_value(x);
    if (weight != 0.0) {
      const Point b = hi->vector_value(x);
      a.x1 = (1.0 - weight) * a.x1 + weight * b.x1;
      a.x2 = (1.0 - weight) * a.x2 + weight * b.x2;
    }
    return {sign * a.x1, sign * a.x2};
  }
};

class SeriesCache {
 public:
  explicit SeriesCache(const VelocitySource& v) : velocity_(v) {}

  // Must not be called while StageFields from earlier lookups are in use.
  void trim() {
    if (cache_.size() > 16) cache_.clear();
  }

  StageField at(double t, double sign) {
    const auto br = velocity_.bracket(t);
    return {&get(br.lo), &get(br.hi), br.weight, sign};
  }

 private:
  const TrigSeries& get(const SpectralVector* state) {
    auto& slot = cache_[state];
    if (!slot) slot = std::make_unique<TrigSeries>(*state);
    return *slot;
  }

  const VelocitySource& velocity_;
  std::unordered_map<const SpectralVector*, std::unique_ptr<TrigSeries>> cache_;
};

// One RK4 step of size h from time t. For autonomous sources the sign of h
// flips the field instead of the clock.
void rk4_step(SeriesCache& cache, bool autonomous, std::vector<Point>& points, double t, double h, int threads) {
  const double sign = autonomous && h < 0.0 ? -1.0 : 1.0;
  const double ha = autonomous ? std::abs(h) : h;
  cache.trim();
  const StageField f0 = cache.at(autonomous ? 0.0 : t, sign);
  const StageField f1 = cache.at(autonomous ? 0.0 : t + 0.5 * h, sign);
  const StageField f2 = cache.at(autonomous ? 0.0 : t + h, sign);
  parallel_blocks(points.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      const Point x = points[s];
      const Point k1 = f0(x);
      const Point k2 = f1({x.x1 + 0.5 * ha * k1.x1, x.x2 + 0.5 * ha * k1.x2});
      const Point k3 = f1({x.x1 + 0.5 * ha * k2.x1, x.x2 + 0.5 * ha * k2.x2});
      const Point k4 = f2({x.x1 + ha * k3.x1, x.x2 + ha * k3.x2});
      points[s].x1 = x.x1 + ha / 6.0 * (k1.x1 + 2.0 * (k2.x1 + k3.x1) + k4.x1);
      points[s].x2 = x.x2 + ha / 6.0 * (k1.x2 + 2.0 * (k2.x2 + k3.x2) + k4.x2);
    }
  });
}

std::vector<Point> lattice(int m) {
  std::vector<Point> seeds(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) seeds[static_cast<std::size_t>(i) * m + j] = {kTwoPi * i / m, kTwoPi * j / m};
  return seeds;
}

}  // namespace

TrigSeries::TrigSeries(const SpectralScalar& f) {
  const auto& g = f.grid();
  for (int i1 = 0; i1 < g.size(); ++i1)
    for (int i2 = 0; i2 < g.size(); ++i2) {
      const int k1 = g.wavenumber(i1), k2 = g.wavenumber(i2);
      const Complex c = f.coeffs()[g.flat(i1, i2)];
      if (c == Complex{}) continue;
      double w = 1.0;
      if (!(k1 == 0 && k2 == 0) && !g.is_nyquist(k1) && !g.is_nyquist(k2)) {
        if (!(k1 > 0 || (k1 == 0 && k2 > 0))) continue;
        w = 2.0;
      }
      modes_.push_back({k1, k2, w * c, 0.0});
      k1_max_ = std::max(k1_max_, std::abs(k1));
      k2_max_ = std::max(k2_max_, std::abs(k2));
    }
}

TrigSeries::TrigSeries(const SpectralVector& u) {
  const auto& g = u.grid();
  for (int i1 = 0; i1 < g.size(); ++i1)
    for (int i2 = 0; i2 < g.size(); ++i2) {
      const int k1 = g.wavenumber(i1), k2 = g.wavenumber(i2);
      const std::size_t i = g.flat(i1, i2);
      const Complex a = u[0].coeffs()[i], b = u[1].coeffs()[i];
      if (a == Complex{} && b == Complex{}) continue;
      double w = 1.0;
      if (!(k1 == 0 && k2 == 0) && !g.is_nyquist(k1) && !g.is_nyquist(k2)) {
        if (!(k1 > 0 || (k1 == 0 && k2 > 0))) continue;
        w = 2.0;
      }
      modes_.push_back({k1, k2, w * a, w * b});
      k1_max_ = std::max(k1_max_, std::abs(k1));
      k2_max_ = std::max(k2_max_, std::abs(k2));
    }
}

template <bool Vector>
void TrigSeries::accumulate(Point x, double& first, double& second) const {
  thread_local std::vector<Complex> e1, e2;
  fill_powers(e1, x.x1, k1_max_);
  fill_powers(e2, x.x2, k2_max_);
  double s1 = 0.0, s2 = 0.0;
  for (const Mode& m : modes_) {
    const Complex phase = e1[m.k1 + k1_max_] * e2[m.k2 + k2_max_];
    s1 += (m.a * phase).real();
    if constexpr (Vector) s2 += (m.b * phase).real();
  }
  first = s1;
  second = s2;
}

double TrigSeries::value(Point x) const {
  double a = 0.0, b = 0.0;
  accumulate<false>(x, a, b);
  return a;
}

Point TrigSeries::vector_value(Point x) const {
  Point out;
  accumulate<true>(x, out.x1, out.x2);
  return out;
}

std::vector<Point> eval_velocity(const SpectralVector& u, std::span<const Point> points) {
  const TrigSeries series(u);
  std::vector<Point> out;
  out.reserve(points.size());
  for (const Point& p : points) {
    if (!std::isfinite(p.x1) || !std::isfinite(p.x2)) throw std::invalid_argument("eval_velocity: non-finite point");
    out.push_back(series.vector_value(p));
  }
  return out;
}

std::string to_string(Direction d) { return d == Direction::forward ? "forward" : "backward"; }

Point FlowMap::seed(std::size_t s) const {
  const auto m = static_cast<std::size_t>(seeds_per_side);
  return {kTwoPi * static_cast<double>(s / m) / seeds_per_side, kTwoPi * static_cast<double>(s % m) / seeds_per_side};
}

Point wrap(Point p) {
  auto w = [](double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r >= kTwoPi ? 0.0 : r;
  };
  return {w(p.x1), w(p.x2)};
}

double torus_distance(Point a, Point b) {
  auto d = [](double x, double y) {
    const double r = std::fmod(std::abs(x - y), kTwoPi);
    return std::min(r, kTwoPi - r);
  };
  return std::hypot(d(a.x1, b.x1), d(a.x2, b.x2));
}

void transport_points(const VelocitySource& velocity, std::vector<Point>& points, double t0, double t1, double dt,
                      int threads) {
  if (!(dt > 0.0)) throw std::invalid_argument("transport_points: dt must be positive");
  const double span = t1 - t0;
  if (span == 0.0) return;
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(std::abs(span) / dt - 1e-9)));
  const double h = span / static_cast<double>(steps);
  SeriesCache cache(velocity);
  const bool autonomous = velocity.autonomous();
  for (std::size_t n = 0; n < steps; ++n)
    rk4_step(cache, autonomous, points, t0 + static_cast<double>(n) * h, h, threads);
}

FlowMap integrate_flow(const VelocitySource& velocity, int seeds_per_side, double T, Direction direction,
                       const FlowOptions& options) {
  if (seeds_per_side < 1) throw std::invalid_argument("integrate_flow: need at least one seed per side");
  if (!(options.dt > 0.0) || options.record_every < 1)
    throw std::invalid_argument("integrate_flow: dt must be positive and record_every >= 1");
  const double stride = options.dt * options.record_every;
  const double records = std::round(T / stride);
  if (T < 0.0 || std::abs(records * stride - T) > 1e-9 * std::max(1.0, T))
    throw std::invalid_argument("integrate_flow: T must be a multiple of dt * record_every");
  if (T > velocity.end_time() * (1.0 + 1e-12)) throw std::invalid_argument("integrate_flow: velocity ends before T");

  FlowMap flow;
  flow.seeds_per_side = seeds_per_side;
  flow.direction = direction;
  flow.dt = options.dt;
  const std::vector<Point> seeds = lattice(seeds_per_side);
  const auto count = static_cast<std::size_t>(records);
  for (std::size_t r = 0; r <= count; ++r) flow.times.push_back(static_cast<double>(r) * stride);

  flow.positions.push_back(seeds);
  if (direction == Direction::forward || velocity.autonomous()) {
    // Autonomous inverse maps are forward maps of -u, one pass suffices.
    const double sign = direction == Direction::forward ? 1.0 : -1.0;
    SeriesCache cache(velocity);
    std::vector<Point> pts = seeds;
    for (std::size_t r = 0; r < count; ++r) {
      for (int n = 0; n < options.record_every; ++n) {
        const double t = (static_cast<double>(r) * options.record_every + n) * options.dt;
        rk4_step(cache, velocity.autonomous(), pts, sign * t, sign * options.dt, options.threads);
      }
      flow.positions.push_back(pts);
    }
  } else {
    for (std::size_t r = 1; r <= count; ++r) {
      std::vector<Point> pts = seeds;
      transport_points(velocity, pts, flow.times[r], 0.0, options.dt, options.threads);
      flow.positions.push_back(std::move(pts));
    }
  }
  return flow;
}

double compressibility(const FlowMap& flow, int bins_per_side) {
  const int m = flow.seeds_per_side;
  if (bins_per_side < 1 || m % bins_per_side != 0)
    throw std::invalid_argument("compressibility: bins_per_side must divide the seeds per side");
  const double h = kTwoPi / m;
  const double width = kTwoPi / bins_per_side;
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins_per_side) * bins_per_side, 0);
  for (const Point& p : flow.final_positions()) {
    const Point w = wrap(p);
    auto bin = [&](double x) {
      const auto b = static_cast<int>(std::floor((x + 0.5 * h) / width));
      return ((b % bins_per_side) + bins_per_side) % bins_per_side;
    };
    ++counts[static_cast<std::size_t>(bin(w.x1)) * bins_per_side + bin(w.x2)];
  }
  const double expected = static_cast<double>(flow.seed_count()) / static_cast<double>(counts.size());
  return static_cast<double>(*std::max_element(counts.begin(), counts.end())) / expected;
}

double inverse_residual(const FlowMap& forward, const VelocitySource& velocity, int threads) {
  if (forward.direction != Direction::forward) throw std::invalid_argument("inverse_residual: need a forward map");
  std::vector<Point> pts = forward.final_positions();
  transport_points(velocity, pts, forward.times.back(), 0.0, forward.dt, threads);
  double worst = 0.0;
  for (std::size_t s = 0; s < pts.size(); ++s) worst = std::max(worst, torus_distance(pts[s], forward.seed(s)));
  return worst;
}

FlowQuality volume_check(const FlowMap& forward, const VelocitySource& velocity, int bins_per_side, int threads) {
  if (forward.seeds_per_side < 16) throw std::invalid_argument("volume_check: need at least 16 seeds per side");
  return {compressibility(forward, bins_per_side), inverse_residual(forward, velocity, threads)};
}

double flow_distance(const FlowMap& x, const FlowMap& y) {
  if (x.seeds_per_side != y.seeds_per_side || x.times.size() != y.times.size())
    throw std::invalid_argument("flow_distance: flows have different seeds or times");
  for (std::size_t k = 0; k < x.times.size(); ++k)
    if (std::abs(x.times[k] - y.times[k]) > 1e-12 * std::max(1.0, x.times[k]))
      throw std::invalid_argument("flow_distance: flows recorded at different times");
  double sum = 0.0;
  for (std::size_t s = 0; s < x.seed_count(); ++s) {
    double sup = 0.0;
    for (std::size_t k = 0; k < x.times.size(); ++k)
      sup = std::max(sup, torus_distance(x.positions[k][s], y.positions[k][s]));
    sum += sup * sup;
  }
  const double h = kTwoPi / x.seeds_per_side;
  return std::sqrt(sum * h * h);
}

double gronwall_flow_bound(const VelocitySource& u, const VelocitySource& v, double T, int samples) {
  if (samples < 2) throw std::invalid_argument("gronwall_flow_bound: need at least two samples");
  const double h = T / (samples - 1);
  double integral = 0.0, sup_gap = 0.0, previous = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = i * h;
    const SpectralVector ut = u.at(t);
    const double g = spectral::grad_sup(ut, spectral::Sampling::oversampled);
    if (i > 0) integral += 0.5 * h * (previous + g);
    previous = g;
    const SpectralVector vt = v.at(t);
    spectral::require_same_grid(ut.grid(), vt.grid(), "gronwall_flow_bound");
    sup_gap = std::max(sup_gap, spectral::l2_norm(ut - vt));
  }
  return std::exp(integral) * T * sup_gap;
}

dynamics::ScalarPath pushforward(const SpectralScalar& rho0, const FlowMap& backward) {
  if (backward.direction != Direction::backward) throw std::invalid_argument("pushforward: need a backward map");
  const int m = backward.seeds_per_side;
  const spectral::FourierGrid grid(m);
  const TrigSeries series(rho0);
  dynamics::ScalarPath path;
  path.spec = dynamics::SystemSpec::advection_diffusion(0.0);
  path.dt = backward.times.size() > 1 ? backward.times[1] - backward.times[0] : 0.0;
  path.integration_dt = backward.dt;
  for (std::size_t k = 0; k < backward.times.size(); ++k) {
    std::vector<double> samples(grid.points());
    for (std::size_t s = 0; s < samples.size(); ++s) samples[s] = series.value(backward.positions[k][s]);
    path.times.push_back(backward.times[k]);
    path.states.push_back(spectral::to_spectral(spectral::PhysicalScalar(grid, std::move(samples))));
  }
  return path;
}

}  // namespace egwp::lagrangian
