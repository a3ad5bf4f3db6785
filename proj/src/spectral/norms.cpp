#include "egwp/spectral/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "egwp/spectral/operators.hpp"
#include "fft.hpp"

namespace egwp::spectral {
namespace {

constexpr double kDomainArea = kTwoPi * kTwoPi;

std::vector<double> sampled(const SpectralScalar& f, Sampling sampling) {
  if (sampling == Sampling::oversampled) {
    const FourierGrid fine(2 * f.grid().size());
    std::vector<double> out(fine.points());
    detail::synthesize(resample(f, fine).coeffs(), out, fine.size());
    return out;
  }
  std::vector<double> out(f.grid().points());
  detail::synthesize(f.coeffs(), out, f.grid().size());
  return out;
}

double cell_area(const SpectralScalar& f, Sampling sampling) {
  const double n = f.grid().size() * (sampling == Sampling::oversampled ? 2.0 : 1.0);
  return kDomainArea / (n * n);
}

void require_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
}

// Sequential quadrature of pointwise magnitudes; p = inf gives the max.
double reduce(const std::vector<double>& mag, double p, double area) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : mag) m = std::max(m, v);
    return m;
  }
  double sum = 0.0;
  for (double v : mag) sum += std::pow(v, p);
  return std::pow(sum * area, 1.0 / p);
}

}  // namespace

double l2_norm_squared(const SpectralScalar& f) {
  double sum = 0.0;
  for (const Complex& c : f.coeffs()) sum += std::norm(c);
  return kDomainArea * sum;
}

double l2_norm_squared(const SpectralVector& u) { return l2_norm_squared(u[0]) + l2_norm_squared(u[1]); }
double l2_norm(const SpectralScalar& f) { return std::sqrt(l2_norm_squared(f)); }
double l2_norm(const SpectralVector& u) { return std::sqrt(l2_norm_squared(u)); }

double gradient_l2_squared(const SpectralScalar& f) {
  const FourierGrid& g = f.grid();
  const int n = g.size();
  double sum = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    const double k1 = g.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double k2 = g.wavenumber(i2);
      sum += (k1 * k1 + k2 * k2) * std::norm(f.coeffs()[g.flat(i1, i2)]);
    }
  }
  return kDomainArea * sum;
}

double gradient_l2_squared(const SpectralVector& u) {
  return gradient_l2_squared(u[0]) + gradient_l2_squared(u[1]);
}

double hs_norm(const SpectralScalar& f, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("hs_norm: s must be >= 0");
  const FourierGrid& g = f.grid();
  const int n = g.size();
  double sum = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    const double k1 = g.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const double k2 = g.wavenumber(i2);
      sum += std::pow(1.0 + k1 * k1 + k2 * k2, s) * std::norm(f.coeffs()[g.flat(i1, i2)]);
    }
  }
  return std::sqrt(kDomainArea * sum);
}

double hs_norm(const SpectralVector& u, double s) {
  const double a = hs_norm(u[0], s);
  const double b = hs_norm(u[1], s);
  return std::sqrt(a * a + b * b);
}

double lp_norm(const SpectralScalar& f, double p, Sampling sampling) {
  require_p(p);
  std::vector<double> v = sampled(f, sampling);
  for (double& x : v) x = std::abs(x);
  return reduce(v, p, cell_area(f, sampling));
}

double lp_norm(const SpectralVector& u, double p, Sampling sampling) {
  require_p(p);
  std::vector<double> a = sampled(u[0], sampling);
  const std::vector<double> b = sampled(u[1], sampling);
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = std::hypot(a[j], b[j]);
  return reduce(a, p, cell_area(u[0], sampling));
}

double sup_norm(const SpectralScalar& f, Sampling sampling) {
  return lp_norm(f, std::numeric_limits<double>::infinity(), sampling);
}

double sup_norm(const SpectralVector& u, Sampling sampling) {
  return lp_norm(u, std::numeric_limits<double>::infinity(), sampling);
}

double grad_sup(const SpectralVector& u, Sampling sampling) {
  std::vector<double> frob;
  for (int c = 0; c < 2; ++c)
    for (int axis = 0; axis < 2; ++axis) {
      const std::vector<double> d = sampled(differentiate(u[c], axis), sampling);
      if (frob.empty()) frob.assign(d.size(), 0.0);
      for (std::size_t j = 0; j < d.size(); ++j) frob[j] += d[j] * d[j];
    }
  double m = 0.0;
  for (double v : frob) m = std::max(m, v);
  return std::sqrt(m);
}

double wp_norm(const SpectralVector& u, double p, Sampling sampling) {
  return l2_norm(u) + lp_norm(curl2d(u), p, sampling);
}

double norm(const SpectralScalar& f, const Norm& kind) {
  switch (kind.kind) {
    case Norm::Kind::l2: return l2_norm(f);
    case Norm::Kind::hs: return hs_norm(f, kind.parameter);
    case Norm::Kind::lp: return lp_norm(f, kind.parameter, kind.sampling);
    case Norm::Kind::sup: return sup_norm(f, kind.sampling);
    case Norm::Kind::grad_sup: return sup_norm(gradient(f), kind.sampling);
    case Norm::Kind::wp: break;
  }
  throw std::invalid_argument("norm: W^p is defined for velocity fields only");
}

double norm(const SpectralVector& u, const Norm& kind) {
  switch (kind.kind) {
    case Norm::Kind::l2: return l2_norm(u);
    case Norm::Kind::hs: return hs_norm(u, kind.parameter);
    case Norm::Kind::lp: return lp_norm(u, kind.parameter, kind.sampling);
    case Norm::Kind::sup: return sup_norm(u, kind.sampling);
    case Norm::Kind::grad_sup: return grad_sup(u, kind.sampling);
    case Norm::Kind::wp: return wp_norm(u, kind.parameter, kind.sampling);
  }
  throw std::invalid_argument("norm: unknown kind");
}

}  // namespace egwp::spectral
