#include "egwp/spectral/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "egwp/error.hpp"
#include "fft.hpp"

namespace egwp::spectral {
namespace {

constexpr Complex kI{0.0, 1.0};

// Calls fn(k1, k2, flat) for every lattice mode.
template <class Fn>
void for_each_mode(const FourierGrid& g, Fn&& fn) {
  const int n = g.size();
  for (int i1 = 0; i1 < n; ++i1) {
    const int k1 = g.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) fn(k1, g.wavenumber(i2), g.flat(i1, i2));
  }
}

std::vector<double> synth(const SpectralScalar& f) {
  std::vector<double> out(f.grid().points());
  detail::synthesize(f.coeffs(), out, f.grid().size());
  return out;
}

SpectralScalar analyze(const FourierGrid& g, std::span<const double> samples) {
  SpectralScalar out(g);
  detail::analyze(samples, out.coeffs(), g.size());
  return out;
}

// Axis map for resampling between grids of size n and m (see header).
struct AxisTarget {
  int index[2];
  double weight[2];
  int count = 0;
};

AxisTarget axis_target(int k, int n, int m) {
  AxisTarget t;
  if (m > n && k == n / 2) {
    t.index[0] = n / 2;
    t.index[1] = m - n / 2;
    t.weight[0] = t.weight[1] = 0.5;
    t.count = 2;
  } else if (std::abs(k) <= m / 2) {
    t.index[0] = ((k % m) + m) % m;
    t.weight[0] = 1.0;
    t.count = 1;
  }
  return t;
}

}  // namespace

PhysicalScalar to_physical(const SpectralScalar& f) {
  if (!f.is_hermitian())
    throw InvalidField("to_physical: coefficients are not Hermitian (defect " +
                       std::to_string(f.hermitian_defect()) + ")");
  return PhysicalScalar(f.grid(), synth(f));
}

SpectralScalar to_spectral(const PhysicalScalar& g) { return analyze(g.grid(), g.samples()); }

SpectralScalar resample(const SpectralScalar& f, const FourierGrid& target) {
  const int n = f.grid().size();
  const int m = target.size();
  SpectralScalar out(target);
  if (f.grid() == target) return f;
  for (int i1 = 0; i1 < n; ++i1) {
    const AxisTarget a = axis_target(f.grid().wavenumber(i1), n, m);
    for (int i2 = 0; i2 < n; ++i2) {
      const AxisTarget b = axis_target(f.grid().wavenumber(i2), n, m);
      const Complex c = f.coeffs()[f.grid().flat(i1, i2)];
      for (int p = 0; p < a.count; ++p)
        for (int q = 0; q < b.count; ++q)
          out.coeffs()[target.flat(a.index[p], b.index[q])] += a.weight[p] * b.weight[q] * c;
    }
  }
  return out;
}

SpectralVector resample(const SpectralVector& u, const FourierGrid& target) {
  SpectralScalar a = resample(u[0], target);
  SpectralScalar b = resample(u[1], target);
  if (u.divergence_free()) return make_divergence_free(std::move(a), std::move(b));
  return SpectralVector(std::move(a), std::move(b));
}

SpectralScalar differentiate(const SpectralScalar& f, int axis) {
  if (axis != 0 && axis != 1) throw std::invalid_argument("differentiate: axis must be 0 or 1");
  const FourierGrid& g = f.grid();
  SpectralScalar out(g);
  for_each_mode(g, [&](int k1, int k2, std::size_t i) {
    if (g.is_nyquist(k1) || g.is_nyquist(k2)) return;
    out.coeffs()[i] = kI * static_cast<double>(axis == 0 ? k1 : k2) * f.coeffs()[i];
  });
  return out;
}

SpectralVector gradient(const SpectralScalar& f) {
  SpectralScalar a = differentiate(f, 0);
  SpectralScalar b = differentiate(f, 1);
  a.coeffs()[0] = b.coeffs()[0] = 0.0;
  return SpectralVector(std::move(a), std::move(b));
}

SpectralVector perp_gradient(const SpectralScalar& f) {
  SpectralScalar a = differentiate(f, 1);
  a *= -1.0;
  return make_divergence_free(std::move(a), differentiate(f, 0));
}

SpectralScalar divergence(const SpectralVector& u) {
  return differentiate(u[0], 0) + differentiate(u[1], 1);
}

SpectralScalar curl2d(const SpectralVector& u) {
  return differentiate(u[1], 0) - differentiate(u[0], 1);
}

SpectralScalar laplacian(const SpectralScalar& f) {
  SpectralScalar out(f.grid());
  for_each_mode(f.grid(), [&](int k1, int k2, std::size_t i) {
    out.coeffs()[i] = -static_cast<double>(k1 * k1 + k2 * k2) * f.coeffs()[i];
  });
  return out;
}

SpectralVector biot_savart(const SpectralScalar& omega) {
  const double scale = omega.max_abs_coeff();
  if (std::abs(omega.coeffs()[0]) > 1e-12 * scale)
    throw InvalidField("biot_savart: vorticity must have zero mean");
  const FourierGrid& g = omega.grid();
  SpectralScalar a(g), b(g);
  for_each_mode(g, [&](int k1, int k2, std::size_t i) {
    if ((k1 == 0 && k2 == 0) || g.is_nyquist(k1) || g.is_nyquist(k2)) return;
    const Complex w = omega.coeffs()[i] / static_cast<double>(k1 * k1 + k2 * k2);
    a.coeffs()[i] = kI * static_cast<double>(k2) * w;
    b.coeffs()[i] = -kI * static_cast<double>(k1) * w;
  });
  return make_divergence_free(std::move(a), std::move(b));
}

SpectralVector leray_project(const SpectralVector& v) {
  const FourierGrid& g = v.grid();
  SpectralScalar a(g), b(g);
  for_each_mode(g, [&](int k1, int k2, std::size_t i) {
    if ((k1 == 0 && k2 == 0) || g.is_nyquist(k1) || g.is_nyquist(k2)) return;
    // (I - k k^T / |k|^2) v written as k_perp (k_perp . v) / |k|^2
    const double kk = k1 * k1 + k2 * k2;
    const Complex s = (static_cast<double>(k2) * v[0].coeffs()[i] - static_cast<double>(k1) * v[1].coeffs()[i]) / kk;
    a.coeffs()[i] = static_cast<double>(k2) * s;
    b.coeffs()[i] = -static_cast<double>(k1) * s;
  });
  return make_divergence_free(std::move(a), std::move(b));
}

SpectralScalar galerkin_project(const SpectralScalar& f, int n) {
  if (n < 1) throw std::invalid_argument("galerkin_project: n must be >= 1, got " + std::to_string(n));
  SpectralScalar out = f;
  const long long n2 = static_cast<long long>(n) * n;
  for_each_mode(f.grid(), [&](int k1, int k2, std::size_t i) {
    if (static_cast<long long>(k1) * k1 + static_cast<long long>(k2) * k2 > n2) out.coeffs()[i] = 0.0;
  });
  return out;
}

void galerkin_project_inplace(SpectralVector& u, int n) {
  if (n < 1) throw std::invalid_argument("galerkin_project: n must be >= 1, got " + std::to_string(n));
  const long long n2 = static_cast<long long>(n) * n;
  for_each_mode(u.grid(), [&](int k1, int k2, std::size_t i) {
    if (static_cast<long long>(k1) * k1 + static_cast<long long>(k2) * k2 > n2)
      u[0].coeffs()[i] = u[1].coeffs()[i] = 0.0;
  });
}

SpectralVector galerkin_project(const SpectralVector& u, int n) {
  SpectralVector out = u;
  galerkin_project_inplace(out, n);
  return out;
}

void dealias_inplace(SpectralScalar& f) {
  const int c = f.grid().dealias_cutoff();
  for_each_mode(f.grid(), [&](int k1, int k2, std::size_t i) {
    if (std::abs(k1) > c || std::abs(k2) > c) f.coeffs()[i] = 0.0;
  });
}

void dealias_inplace(SpectralVector& u) {
  dealias_inplace(u[0]);
  dealias_inplace(u[1]);
}

SpectralScalar dealias(const SpectralScalar& f) {
  SpectralScalar out = f;
  dealias_inplace(out);
  return out;
}

SpectralVector dealias(const SpectralVector& u) {
  SpectralVector out = u;
  dealias_inplace(out);
  return out;
}

SpectralVector advective_product(const SpectralVector& u, const SpectralVector& v) {
  require_same_grid(u.grid(), v.grid(), "advective_product");
  const FourierGrid& g = u.grid();
  const SpectralVector ud = dealias(u);
  const SpectralVector vd = dealias(v);
  const auto u1 = synth(ud[0]);
  const auto u2 = synth(ud[1]);
  std::vector<double> prod(g.points());
  SpectralScalar comps[2] = {SpectralScalar(g), SpectralScalar(g)};
  for (int c = 0; c < 2; ++c) {
    const auto d1 = synth(differentiate(vd[c], 0));
    const auto d2 = synth(differentiate(vd[c], 1));
    for (std::size_t j = 0; j < prod.size(); ++j) prod[j] = u1[j] * d1[j] + u2[j] * d2[j];
    comps[c] = analyze(g, prod);
    dealias_inplace(comps[c]);
  }
  // Products of zero-mean fields can carry a mean; the vector type forbids it.
  comps[0].coeffs()[0] = comps[1].coeffs()[0] = 0.0;
  SpectralVector out(std::move(comps[0]), std::move(comps[1]));
  return out;
}

SpectralScalar advective_product(const SpectralVector& u, const SpectralScalar& f) {
  require_same_grid(u.grid(), f.grid(), "advective_product");
  const FourierGrid& g = u.grid();
  const SpectralVector ud = dealias(u);
  const SpectralScalar fd = dealias(f);
  const auto u1 = synth(ud[0]);
  const auto u2 = synth(ud[1]);
  const auto d1 = synth(differentiate(fd, 0));
  const auto d2 = synth(differentiate(fd, 1));
  std::vector<double> prod(g.points());
  for (std::size_t j = 0; j < prod.size(); ++j) prod[j] = u1[j] * d1[j] + u2[j] * d2[j];
  SpectralScalar out = analyze(g, prod);
  dealias_inplace(out);
  return out;
}

SpectralScalar pressure_recover(const SpectralVector& u) {
  const SpectralVector nl = advective_product(u, u);
  const FourierGrid& g = u.grid();
  SpectralScalar p(g);
  for_each_mode(g, [&](int k1, int k2, std::size_t i) {
    if ((k1 == 0 && k2 == 0) || g.is_nyquist(k1) || g.is_nyquist(k2)) return;
    const Complex div = kI * (static_cast<double>(k1) * nl[0].coeffs()[i] + static_cast<double>(k2) * nl[1].coeffs()[i]);
    p.coeffs()[i] = div / static_cast<double>(k1 * k1 + k2 * k2);
  });
  return p;
}

}  // namespace egwp::spectral
