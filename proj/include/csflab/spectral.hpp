#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

namespace csflab::spectral {

// Trigonometric differentiation and interpolation on the uniform periodic
// grid u_j = 2*pi*j/n (n even). Backed by FFTW; plans are cached per thread,
// with planning serialized through a process-wide mutex.

namespace detail {

inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanSet {
  int n = 0;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit PlanSet(int size) : n(size) {
    real = fftw_alloc_real(n);
    cplx = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd = fftw_plan_dft_r2c_1d(n, real, cplx, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(n, cplx, real, FFTW_ESTIMATE);
  }

  PlanSet(const PlanSet&) = delete;
  PlanSet& operator=(const PlanSet&) = delete;

  ~PlanSet() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(cplx);
  }
};

inline PlanSet& plans_for(int n) {
  thread_local std::map<int, std::unique_ptr<PlanSet>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::make_unique<PlanSet>(n)).first;
  }
  return *it->second;
}

}  // namespace detail

// Normalized spectrum: f(u) = c[0] + sum_{k=1}^{n/2-1} 2 Re(c[k] e^{iku})
//                             + Re(c[n/2]) cos((n/2) u).
struct Spectrum {
  int n = 0;
  std::vector<std::complex<double>> c;  // size n/2 + 1
};

inline Spectrum analyze(const std::vector<double>& f) {
  const int n = static_cast<int>(f.size());
  auto& p = detail::plans_for(n);
  for (int j = 0; j < n; ++j) p.real[j] = f[j];
  fftw_execute(p.fwd);
  Spectrum s;
  s.n = n;
  s.c.resize(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) {
    s.c[k] = std::complex<double>(p.cplx[k][0], p.cplx[k][1]) / double(n);
  }
  return s;
}

inline std::vector<double> synthesize(const Spectrum& s) {
  auto& p = detail::plans_for(s.n);
  for (int k = 0; k <= s.n / 2; ++k) {
    p.cplx[k][0] = s.c[k].real();
    p.cplx[k][1] = s.c[k].imag();
  }
  fftw_execute(p.bwd);
  std::vector<double> out(s.n);
  for (int j = 0; j < s.n; ++j) out[j] = p.real[j];
  return out;
}

// Multiplies the spectrum by (ik)^order. The Nyquist mode is zeroed for odd
// orders and gets the real factor (-1)^(order/2) (n/2)^order for even orders.
inline Spectrum differentiate(Spectrum s, int order) {
  const int half = s.n / 2;
  const std::complex<double> iu(0.0, 1.0);
  for (int k = 0; k < half; ++k) {
    std::complex<double> factor = 1.0;
    for (int m = 0; m < order; ++m) factor *= iu * double(k);
    s.c[k] *= factor;
  }
  if (order % 2 == 1) {
    s.c[half] = 0.0;
  } else {
    double factor = 1.0;
    for (int m = 0; m < order; m += 2) factor *= -double(half) * double(half);
    s.c[half] *= factor;
  }
  return s;
}

inline std::vector<double> derivative(const std::vector<double>& f, int order) {
  return synthesize(differentiate(analyze(f), order));
}

// Evaluates the interpolant (or a derivative of it) at an arbitrary u.
inline double eval(const Spectrum& s, double u, int order = 0) {
  const int half = s.n / 2;
  const std::complex<double> iu(0.0, 1.0);
  double acc = 0.0;
  for (int k = 0; k < half; ++k) {
    std::complex<double> term = s.c[k] * std::exp(iu * (double(k) * u));
    for (int m = 0; m < order; ++m) term *= iu * double(k);
    acc += (k == 0) ? term.real() : 2.0 * term.real();
  }
  // Nyquist term: Re(c) cos((n/2) u) with the even-order derivative factor.
  if (order % 2 == 0) {
    double factor = 1.0;
    for (int m = 0; m < order; m += 2) factor *= -double(half) * double(half);
    acc += s.c[half].real() * factor * std::cos(double(half) * u);
  }
  return acc;
}

// Antiderivative F with F(0) = 0 of the interpolant. The mean mode c[0]
// contributes the linear term c[0] * u.
inline double eval_antiderivative(const Spectrum& s, double u) {
  const int half = s.n / 2;
  const std::complex<double> iu(0.0, 1.0);
  double acc = s.c[0].real() * u;
  for (int k = 1; k < half; ++k) {
    const std::complex<double> term =
        s.c[k] / (iu * double(k)) * (std::exp(iu * (double(k) * u)) - 1.0);
    acc += 2.0 * term.real();
  }
  acc += s.c[half].real() * std::sin(double(half) * u) / double(half);
  return acc;
}

}  // namespace csflab::spectral
