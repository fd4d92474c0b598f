#pragma once
// Small GSL wrappers shared by the fitting and tune-up code.

#include <gsl/gsl_errno.h>
#include <gsl/gsl_fft_real.h>
#include <gsl/gsl_min.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include <utility>

namespace dualrail::detail {

struct GslQuiet {
  gsl_error_handler_t* old;
  GslQuiet() : old(gsl_set_error_handler_off()) {}
  ~GslQuiet() { gsl_set_error_handler(old); }
};

// Brent minimization of f on [lo, hi] seeded at mid; falls back to the best end.
template <class F>
std::pair<double, double> brent_min(F f, double lo, double mid, double hi, double tol) {
  double flo = f(lo), fmid = f(mid), fhi = f(hi);
  if (!(fmid < flo && fmid < fhi)) {
    if (fmid <= flo && fmid <= fhi) return {mid, fmid};
    return flo < fhi ? std::pair{lo, flo} : std::pair{hi, fhi};
  }
  GslQuiet quiet;
  gsl_function fn;
  fn.function = [](double x, void* p) { return (*static_cast<F*>(p))(x); };
  fn.params = &f;
  gsl_min_fminimizer* m = gsl_min_fminimizer_alloc(gsl_min_fminimizer_brent);
  gsl_min_fminimizer_set_with_values(m, &fn, mid, fmid, lo, flo, hi, fhi);
  for (int it = 0; it < 200; ++it) {
    if (gsl_min_fminimizer_iterate(m) != GSL_SUCCESS) break;
    if (gsl_min_fminimizer_x_upper(m) - gsl_min_fminimizer_x_lower(m) < tol) break;
  }
  std::pair<double, double> out{gsl_min_fminimizer_x_minimum(m), gsl_min_fminimizer_f_minimum(m)};
  gsl_min_fminimizer_free(m);
  return out;
}

// Dominant angular frequency of a uniformly sampled trace (zero-padded real FFT).
inline double dominant_frequency(const std::vector<double>& y, double dt) {
  const size_t n = y.size();
  const size_t m = std::max<size_t>(1024, 16 * n);
  std::vector<double> buf(m, 0.0);
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
  for (size_t i = 0; i < n; ++i) buf[i] = y[i] - mean;
  gsl_fft_real_wavetable* wt = gsl_fft_real_wavetable_alloc(m);
  gsl_fft_real_workspace* ws = gsl_fft_real_workspace_alloc(m);
  gsl_fft_real_transform(buf.data(), 1, m, wt, ws);
  gsl_fft_real_wavetable_free(wt);
  gsl_fft_real_workspace_free(ws);
  // Halfcomplex layout: buf[2k-1], buf[2k] hold Re, Im of bin k.
  auto power = [&](size_t k) {
    if (k == 0) return buf[0] * buf[0];
    if (2 * k == m) return buf[m - 1] * buf[m - 1];
    return buf[2 * k - 1] * buf[2 * k - 1] + buf[2 * k] * buf[2 * k];
  };
  size_t best = 1;
  for (size_t k = 1; k <= m / 2; ++k)
    if (power(k) > power(best)) best = k;
  double kk = double(best);
  if (best > 1 && best < m / 2) {
    const double a = power(best - 1), b = power(best), c = power(best + 1);
    const double den = a - 2 * b + c;
    if (den != 0) kk += 0.5 * (a - c) / den;
  }
  return 6.283185307179586476925286766559 * kk / (double(m) * dt);
}

}  // namespace dualrail::detail
