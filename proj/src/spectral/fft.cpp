#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace egwp::spectral::detail {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  PlanPair get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    const auto count = static_cast<std::size_t>(n) * n;
    auto* in = fftw_alloc_complex(count);
    auto* out = fftw_alloc_complex(count);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    p.forward = fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, flags);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

struct Scratch {
  std::vector<std::complex<double>> a, b;
  void fit(std::size_t count) {
    if (a.size() != count) {
      a.assign(count, {});
      b.assign(count, {});
    }
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

fftw_complex* raw(std::vector<std::complex<double>>& v) {
  return reinterpret_cast<fftw_complex*>(v.data());
}

}  // namespace

void synthesize(std::span<const std::complex<double>> coeffs, std::span<double> samples, int n) {
  const PlanPair plans = cache().get(n);
  Scratch& s = scratch();
  s.fit(coeffs.size());
  std::copy(coeffs.begin(), coeffs.end(), s.a.begin());
  fftw_execute_dft(plans.backward, raw(s.a), raw(s.b));
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = s.b[i].real();
}

void analyze(std::span<const double> samples, std::span<std::complex<double>> coeffs, int n) {
  const PlanPair plans = cache().get(n);
  Scratch& s = scratch();
  s.fit(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) s.a[i] = samples[i];
  fftw_execute_dft(plans.forward, raw(s.a), raw(s.b));
  const double scale = 1.0 / static_cast<double>(samples.size());
  // Real input: enforce exact Hermitian symmetry, c(-k) = conj(c(k)).
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const std::size_t f = static_cast<std::size_t>(i1) * n + i2;
      const std::size_t g = static_cast<std::size_t>((n - i1) % n) * n + (n - i2) % n;
      coeffs[f] = 0.5 * scale * (s.b[f] + std::conj(s.b[g]));
    }
}

}  // namespace egwp::spectral::detail
