#include "dualrail/tuneup.hpp"

#include "numeric.hpp"

#include <gsl/gsl_blas.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_fft_real.h>
#include <gsl/gsl_min.h>
#include <gsl/gsl_multifit.h>
#include <gsl/gsl_multifit_nlinear.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <optional>

namespace dualrail {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

const ModeLayout kCheckLayout{2, 2, 2};

using detail::brent_min;
using detail::GslQuiet;
using detail::dominant_frequency;

// Closed-system propagator; exact exponential when the schedule allows it.
Mat check_unitary(const DriveSchedule& s, const ModeLayout& l) {
  try {
    return unitary_from_hamiltonian(drive_frame_hamiltonian(s, build_mode_operators(l)), s.total_duration);
  } catch (const std::invalid_argument&) {
    return schedule_unitary(s, l);
  }
}

}  // namespace

ChevronData simulate_chevron(double g_bs, double omega0, const std::vector<double>& times,
                             const std::vector<double>& freqs, const ChevronSimOptions& opt) {
  if (times.empty() || freqs.empty()) throw std::invalid_argument("chevron grids must be nonempty");
  const ModeLayout l{2, 2, 2};
  const ModeOperators ops = build_mode_operators(l);
  const double tmax = *std::max_element(times.begin(), times.end());
  std::vector<double> samples;
  for (double t : times) samples.push_back(opt.ramp + t);
  ChevronData d{freqs, times, {}};
  const CollapseSet cs = opt.noise ? collapse_operators(*opt.noise, ops) : CollapseSet{};
  for (double w : freqs) {
    DriveSchedule s;
    s.coupling = {0.0, AncillaPair::GE, 0.5};
    s.beamsplitter = {g_bs, w - omega0, 0.0, opt.ramp, tmax};
    s.total_duration = opt.ramp + tmax;
    std::vector<double> row;
    const PureState psi = basis_state(l, 0, 1);
    if (cs.empty()) {
      auto tr = evolve_schrodinger(s, psi, samples);
      if (tr.truncation) throw std::runtime_error("truncation in chevron simulation");
      for (const auto& st : tr.states) row.push_back(expectation(ops.n_b, st).real());
    } else {
      auto tr = evolve_lindblad(s, MixedState::from_pure(psi), cs, samples);
      for (const auto& st : tr.states) row.push_back(expectation(ops.n_b, st).real());
    }
    d.p1.push_back(std::move(row));
  }
  return d;
}

double chevron_model(double g_bs, double omega0, double A, double c, double phi, double omega, double t) {
  const double d = omega - omega0;
  const double W = std::sqrt(g_bs * g_bs + d * d);
  const double x = 0.5 * W * t + phi;
  const double r = W > 0 ? d / W : 1.0;
  const double s = std::sin(x), co = std::cos(x);
  return A * (co * co + r * r * s * s) + c;
}

namespace {

struct ChevronFitData {
  const ChevronData* d;
};

int chevron_residuals(const gsl_vector* x, void* params, gsl_vector* f) {
  const auto* d = static_cast<ChevronFitData*>(params)->d;
  const double g = gsl_vector_get(x, 0), w0 = gsl_vector_get(x, 1), A = gsl_vector_get(x, 2),
               c = gsl_vector_get(x, 3), ph = gsl_vector_get(x, 4);
  size_t k = 0;
  for (size_t i = 0; i < d->freqs.size(); ++i)
    for (size_t j = 0; j < d->times.size(); ++j)
      gsl_vector_set(f, k++, chevron_model(g, w0, A, c, ph, d->freqs[i], d->times[j]) - d->p1[i][j]);
  return GSL_SUCCESS;
}

ChevronFitResult run_lm(const ChevronData& d, const std::array<double, 5>& x0, int max_iter, bool& ok) {
  GslQuiet quiet;
  ChevronFitData fd{&d};
  const size_t n = d.freqs.size() * d.times.size();
  gsl_multifit_nlinear_fdf fdf;
  fdf.f = chevron_residuals;
  fdf.df = nullptr;
  fdf.fvv = nullptr;
  fdf.n = n;
  fdf.p = 5;
  fdf.params = &fd;
  gsl_multifit_nlinear_parameters prm = gsl_multifit_nlinear_default_parameters();
  gsl_multifit_nlinear_workspace* w = gsl_multifit_nlinear_alloc(gsl_multifit_nlinear_trust, &prm, n, 5);
  gsl_vector_const_view xv = gsl_vector_const_view_array(x0.data(), 5);
  gsl_multifit_nlinear_init(&xv.vector, &fdf, w);
  int info = 0;
  const int status = gsl_multifit_nlinear_driver(max_iter, 1e-14, 1e-14, 0.0, nullptr, nullptr, &info, w);
  ChevronFitResult r;
  const gsl_vector* x = gsl_multifit_nlinear_position(w);
  r.g_bs = std::abs(gsl_vector_get(x, 0));
  r.omega0 = gsl_vector_get(x, 1);
  r.A = gsl_vector_get(x, 2);
  r.c = gsl_vector_get(x, 3);
  r.phi = std::remainder(gsl_vector_get(x, 4), kPi);
  r.residual_norm = gsl_blas_dnrm2(gsl_multifit_nlinear_residual(w));
  r.iterations = int(gsl_multifit_nlinear_niter(w));
  gsl_matrix* cov = gsl_matrix_alloc(5, 5);
  gsl_multifit_nlinear_covar(gsl_multifit_nlinear_jac(w), 0.0, cov);
  const double dof = n > 5 ? double(n - 5) : 1.0;
  const double s2 = r.residual_norm * r.residual_norm / dof;
  for (int k = 0; k < 5; ++k) r.std_errors.push_back(std::sqrt(std::max(0.0, gsl_matrix_get(cov, k, k) * s2)));
  gsl_matrix_free(cov);
  gsl_multifit_nlinear_free(w);
  ok = status == GSL_SUCCESS;
  return r;
}

}  // namespace

ChevronFitResult fit_chevron(const ChevronData& d, int max_iter) {
  if (d.freqs.empty() || d.times.size() < 4 || d.p1.size() != d.freqs.size())
    throw std::invalid_argument("chevron data too small or ragged");
  const double dt = d.times[1] - d.times[0];
  for (size_t j = 1; j < d.times.size(); ++j)
    if (std::abs(d.times[j] - d.times[j - 1] - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw std::invalid_argument("chevron time grid must be uniform");
  // Resonance: the column with the largest contrast.
  size_t ic = 0;
  double best_contrast = -1;
  for (size_t i = 0; i < d.freqs.size(); ++i) {
    const auto [lo, hi] = std::minmax_element(d.p1[i].begin(), d.p1[i].end());
    if (*hi - *lo > best_contrast) {
      best_contrast = *hi - *lo;
      ic = i;
    }
  }
  const double g0 = dominant_frequency(d.p1[ic], dt);
  ChevronFitResult best;
  best.residual_norm = std::numeric_limits<double>::infinity();
  bool any_ok = false;
  for (double scale : {1.0, 0.97, 1.03, 0.9, 1.1})
    for (double ph : {0.0, 0.3, -0.3}) {
      bool ok = false;
      ChevronFitResult r = run_lm(d, {g0 * scale, d.freqs[ic], 1.0, 0.0, ph}, max_iter, ok);
      if (r.residual_norm < best.residual_norm) {
        best = r;
        any_ok = ok;
      }
    }
  if (!any_ok && best.residual_norm > 1e-6 * std::sqrt(double(d.freqs.size() * d.times.size())))
    throw FitError("chevron fit did not converge", best);
  return best;
}

double AmplitudePolynomial::operator()(double x) const {
  double acc = 0.0;
  for (size_t k = coeffs.size(); k-- > 0;) acc = (acc + coeffs[k]) * x;
  return acc;
}

AmplitudePolynomial fit_amplitude_polynomial(const std::vector<double>& dac, const std::vector<double>& g) {
  if (dac.size() != g.size()) throw std::invalid_argument("dac and g_bs sizes differ");
  if (dac.size() < 6) throw std::invalid_argument("need at least 6 points for a degree-5 fit");
  const size_t n = dac.size();
  gsl_matrix* X = gsl_matrix_alloc(n, 5);
  gsl_vector* y = gsl_vector_alloc(n);
  gsl_vector* c = gsl_vector_alloc(5);
  gsl_matrix* cov = gsl_matrix_alloc(5, 5);
  for (size_t i = 0; i < n; ++i) {
    double p = 1.0;
    for (size_t k = 0; k < 5; ++k) gsl_matrix_set(X, i, k, p *= dac[i]);
    gsl_vector_set(y, i, g[i]);
  }
  double chisq = 0;
  gsl_multifit_linear_workspace* w = gsl_multifit_linear_alloc(n, 5);
  gsl_multifit_linear(X, y, c, cov, &chisq, w);
  gsl_multifit_linear_free(w);
  AmplitudePolynomial poly;
  for (size_t k = 0; k < 5; ++k) poly.coeffs.push_back(gsl_vector_get(c, k));
  poly.residual_rms = std::sqrt(chisq / double(n));
  gsl_matrix_free(X);
  gsl_vector_free(y);
  gsl_vector_free(c);
  gsl_matrix_free(cov);
  const auto [lo, hi] = std::minmax_element(dac.begin(), dac.end());
  auto deriv = [&](double x) {
    double acc = 0.0;
    for (size_t k = poly.coeffs.size(); k-- > 0;) acc = acc * x + double(k + 1) * poly.coeffs[k];
    return acc;
  };
  const int probes = 200;
  const double s0 = deriv(*lo);
  for (int i = 0; i <= probes; ++i) {
    const double x = *lo + (*hi - *lo) * i / probes;
    if (deriv(x) * s0 < 0) poly.monotonic = false;
  }
  return poly;
}

double transfer_cost(const DriveSchedule& s) {
  const ModeLayout& l = kCheckLayout;
  const int i00g = l.index(0, 0, 0), i00e = l.index(0, 0, 1);
  const int i01 = l.index(0, 1, 0), i10 = l.index(1, 0, 0);
  Mat U;
  try {
    U = unitary_from_hamiltonian(drive_frame_hamiltonian(s, build_mode_operators(l)), s.total_duration);
  } catch (const std::invalid_argument&) {
    // Time-dependent envelope: the three columns are independent runs.
    auto col = [&](int k) { return propagate(s, basis_state(l, k / 4, (k / 2) % 2, k % 2)).amp; };
    auto f0 = std::async(std::launch::async, col, i00g);
    auto f1 = std::async(std::launch::async, col, i01);
    Vec c10 = col(i10);
    U = Mat::Zero(l.total(), l.total());
    U.col(i00g) = f0.get();
    U.col(i01) = f1.get();
    U.col(i10) = c10;
  }
  return (1 - std::norm(U(i00e, i00g))) + (1 - std::norm(U(i01, i01))) + (1 - std::norm(U(i10, i10)));
}

SquareCheckParams to_square(const CheckParams& p, const SquareTuneOptions& o) {
  return {p.T_p, p.g_bs, p.amplitude, p.detuning, p.delta, o.t_r, o.t_ramp, 0.0};
}

namespace {

std::array<double, 5> pack(const CheckParams& p) { return {p.g_bs, p.delta, p.T_p, p.amplitude, p.detuning}; }

CheckParams unpack(const std::array<double, 5>& v, const CheckParams& base) {
  CheckParams p = base;
  p.g_bs = v[0];
  p.delta = v[1];
  p.T_p = v[2];
  p.amplitude = v[3];
  p.detuning = v[4];
  return p;
}

struct SquareProblem {
  std::array<double, 5> scale, lo, hi;
  CheckParams base;
  const SquareTuneOptions* opt;
  double best = std::numeric_limits<double>::infinity();
  std::array<double, 5> best_x{};

  std::array<double, 5> physical(const gsl_vector* x) const {
    std::array<double, 5> v;
    for (int k = 0; k < 5; ++k) v[k] = std::clamp(gsl_vector_get(x, k) * scale[k], lo[k], hi[k]);
    return v;
  }
  double eval(const std::array<double, 5>& v) {
    double c;
    try {
      c = transfer_cost(erasure_check_schedule({opt->chi, AncillaPair::GE, 0.5}, to_square(unpack(v, base), *opt)));
    } catch (const std::invalid_argument&) {
      c = 3.0;
    }
    if (c < best) {
      best = c;
      best_x = v;
    }
    return c;
  }
};

}  // namespace

TuneupResult tune_square_erasure_check(const CheckParams& guess, const Bounds& bounds, const SquareTuneOptions& opt) {
  if (opt.chi == 0) throw std::invalid_argument("chi must be nonzero");
  SquareProblem pb;
  pb.opt = &opt;
  pb.base = guess;
  const auto g = pack(guess);
  pb.lo = pack(bounds.lo);
  pb.hi = pack(bounds.hi);
  for (int k = 0; k < 5; ++k)
    if (g[k] < pb.lo[k] || g[k] > pb.hi[k]) throw std::invalid_argument("initial guess outside bounds");
  // Work in units of the guess; the pulse detuning has no natural size, so borrow |chi|.
  for (int k = 0; k < 5; ++k) pb.scale[k] = std::abs(g[k]) > 0 ? std::abs(g[k]) : 1.0;
  pb.scale[4] = std::abs(opt.chi);
  TuneupResult res;
  const double c0 = pb.eval(g);
  res.cost_trace.push_back(c0);
  if (c0 < opt.target_cost) {
    res.params = guess;
    res.converged = true;
    return res;
  }
  gsl_multimin_function fn;
  fn.n = 5;
  fn.params = &pb;
  fn.f = [](const gsl_vector* x, void* p) {
    auto* pr = static_cast<SquareProblem*>(p);
    return pr->eval(pr->physical(x));
  };
  gsl_vector* x0 = gsl_vector_alloc(5);
  gsl_vector* step = gsl_vector_alloc(5);
  for (int k = 0; k < 5; ++k) {
    gsl_vector_set(x0, k, g[k] / pb.scale[k]);
    // A zero parameter stays put under relative steps, except the detuning.
    gsl_vector_set(step, k, std::abs(g[k]) > 0 ? 0.02 : 0.0);
  }
  gsl_vector_set(step, 4, 0.01);
  gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 5);
  gsl_multimin_fminimizer_set(m, &fn, x0, step);
  for (int it = 0; it < opt.max_iter; ++it) {
    const int st = gsl_multimin_fminimizer_iterate(m);
    ++res.iterations;
    res.cost_trace.push_back(pb.best);
    if (st != GSL_SUCCESS) break;
    if (pb.best < opt.target_cost) break;
    if (gsl_multimin_fminimizer_size(m) < opt.step_tolerance) break;
  }
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(x0);
  gsl_vector_free(step);
  res.params = unpack(pb.best_x, guess);
  res.converged = pb.best < opt.target_cost;
  return res;
}

DriveSchedule gaussian_check_schedule(double chi, const CheckParams& p, double n_chop) {
  ChoppedGaussian gp{p.amplitude, p.sigma, n_chop, p.detuning, 0.0};
  DriveSchedule s;
  s.coupling = {chi, AncillaPair::GE, 0.5};
  s.beamsplitter = {p.g_bs, p.delta, 0.0, 0.0, gp.duration()};
  s.pulses = {{gp, 0.0}};
  s.total_duration = gp.duration();
  s.validate();
  return s;
}

namespace {

double excitation_from(const DriveSchedule& s, int na, int nb) {
  const ModeLayout& l = kCheckLayout;
  const PureState out = propagate(s, basis_state(l, na, nb, 0));
  double pe = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) pe += std::norm(out.amp(l.index(a, b, 1)));
  return pe;
}

double return_infidelity(const DriveSchedule& s) {
  const ModeLayout& l = kCheckLayout;
  auto f = [&](int na, int nb) {
    const PureState out = propagate(s, basis_state(l, na, nb, 0));
    return 1 - std::norm(out.amp(l.index(na, nb, 0)));
  };
  auto a = std::async(std::launch::async, f, 0, 1);
  const double b = f(1, 0);
  return 0.5 * (a.get() + b);
}

double pi_amplitude_guess(double sigma, double n_chop) {
  return 0.5 * kPi / gaussian_area(ChoppedGaussian{1.0, sigma, n_chop, 0.0, 0.0});
}

// Step 3 / 6: maximize P(e) from |0,0,g>.
double calibrate_pi(const GaussianTuneConfig& cfg, CheckParams p) {
  const double a0 = pi_amplitude_guess(p.sigma, cfg.n_chop);
  auto f = [&](double a) {
    p.amplitude = a;
    return 1 - excitation_from(gaussian_check_schedule(cfg.chi, p, cfg.n_chop), 0, 0);
  };
  return brent_min(f, 0.8 * a0, a0, 1.2 * a0, 1e-7 * a0).first;
}

}  // namespace

std::vector<SelectivityPoint> selectivity_sweep(const GaussianTuneConfig& cfg, double g_bs, double area_sigma_product,
                                                const std::vector<double>& sigmas) {
  std::vector<SelectivityPoint> out;
  for (double s : sigmas) {
    CheckParams p;
    p.g_bs = g_bs;
    p.delta = 0.5 * cfg.chi;
    p.sigma = s;
    p.amplitude = area_sigma_product / s;
    const DriveSchedule sch = gaussian_check_schedule(cfg.chi, p, cfg.n_chop);
    out.push_back({s, std::max(excitation_from(sch, 0, 1), excitation_from(sch, 1, 0))});
  }
  return out;
}

std::vector<double> return_infidelity_scan(const GaussianTuneConfig& cfg, double sigma, double amplitude,
                                           const std::vector<double>& g_grid) {
  std::vector<double> out;
  for (double g : g_grid) {
    CheckParams p;
    p.g_bs = g;
    p.delta = 0.5 * cfg.chi;
    p.sigma = sigma;
    p.amplitude = amplitude;
    out.push_back(return_infidelity(gaussian_check_schedule(cfg.chi, p, cfg.n_chop)));
  }
  return out;
}

namespace {

// Lowest grid local minimum of y, refined by Brent on f; nullopt when the grid has none.
template <class F>
std::optional<std::pair<double, double>> refine_first_min(const std::vector<double>& x, const std::vector<double>& y,
                                                          F f, double tol) {
  std::optional<std::pair<double, double>> best;
  for (size_t i = 1; i + 1 < x.size(); ++i)
    if (y[i] <= y[i - 1] && y[i] <= y[i + 1]) {
      auto r = brent_min(f, x[i - 1], x[i], x[i + 1], tol);
      if (!best || r.second < best->second) best = r;
    }
  return best;
}

}  // namespace

TuneupResult tune_gaussian_erasure_check(const GaussianTuneConfig& cfg) {
  const double X = std::abs(cfg.chi);
  if (X == 0) throw std::invalid_argument("chi must be nonzero");
  if (!(cfg.g_bs > 0.5 * std::sqrt(3.0) * X && cfg.g_bs < cfg.g_bs_max))
    throw std::invalid_argument("g_bs start must lie between (sqrt3/2)|chi| and g_bs_max");
  if (cfg.sigma <= 0) throw std::invalid_argument("sigma must be positive");
  TuneupResult res;
  CheckParams p;
  p.g_bs = cfg.g_bs;
  p.delta = 0.5 * cfg.chi;
  p.sigma = cfg.sigma;
  p.amplitude = calibrate_pi(cfg, p);
  double best = std::numeric_limits<double>::infinity();
  bool selected = false;
  for (int loop = 0; loop < cfg.max_loops; ++loop) {
    ++res.iterations;
    if (!selected) {
      // Step 4: selectivity at fixed A sigma.
      std::vector<double> sig;
      for (int k = 0; k < cfg.sigma_points; ++k)
        sig.push_back(p.sigma * std::pow(cfg.sigma_span, double(k) / (cfg.sigma_points - 1)));
      const auto sweep = selectivity_sweep(cfg, p.g_bs, p.amplitude * p.sigma, sig);
      auto it = std::find_if(sweep.begin(), sweep.end(),
                             [&](const SelectivityPoint& s) { return s.excitation < cfg.selectivity_threshold; });
      if (it == sweep.end()) break;
      p.sigma = it->sigma;
      p.amplitude = calibrate_pi(cfg, p);
      selected = true;
    }
    // Step 5: look for a full revolution by raising g_bs, else by stretching sigma.
    std::vector<double> gg;
    for (int k = 0; k < cfg.g_points; ++k) gg.push_back(p.g_bs + (cfg.g_bs_max - p.g_bs) * k / (cfg.g_points - 1));
    const auto inf = return_infidelity_scan(cfg, p.sigma, p.amplitude, gg);
    auto fg = [&](double g) {
      CheckParams q = p;
      q.g_bs = g;
      return return_infidelity(gaussian_check_schedule(cfg.chi, q, cfg.n_chop));
    };
    std::optional<std::pair<double, double>> hit;
    for (size_t i = 1; i + 1 < gg.size() && !hit; ++i)
      if (inf[i] <= inf[i - 1] && inf[i] <= inf[i + 1]) hit = brent_min(fg, gg[i - 1], gg[i], gg[i + 1], 1e-9 * X);
    if (hit) {
      p.g_bs = hit->first;
    } else {
      std::vector<double> ss, vals;
      for (int k = 0; k < cfg.g_points; ++k) ss.push_back(p.sigma * (1.0 + double(k) / (cfg.g_points - 1)));
      auto fs = [&](double s) {
        CheckParams q = p;
        q.sigma = s;
        q.amplitude = p.amplitude * p.sigma / s;
        return return_infidelity(gaussian_check_schedule(cfg.chi, q, cfg.n_chop));
      };
      for (double s : ss) vals.push_back(fs(s));
      auto r = refine_first_min(ss, vals, fs, 1e-9 * p.sigma);
      if (!r) break;
      p.amplitude *= p.sigma / r->first;
      p.sigma = r->first;
    }
    // Step 6: no Stark shifts in the model, so only the pi pulse needs a touch-up.
    p.amplitude = calibrate_pi(cfg, p);
    // Step 7.
    const DriveSchedule s = gaussian_check_schedule(cfg.chi, p, cfg.n_chop);
    const double ret = return_infidelity(s);
    const double miss = 1 - excitation_from(s, 0, 0);
    best = std::min(best, ret + miss);
    res.cost_trace.push_back(best);
    if (ret < cfg.return_tolerance && miss < 1e-3) {
      res.converged = true;
      break;
    }
  }
  p.T_p = 2 * cfg.n_chop * p.sigma;
  res.params = p;
  if (res.cost_trace.empty()) res.cost_trace.push_back(1.0);
  return res;
}

std::vector<AlignmentRow> spectroscopy_alignment(const SquareCheckParams& tuned, double chi,
                                                 const std::vector<double>& T_p_candidates,
                                                 const AlignmentOptions& opt) {
  const double X = std::abs(chi);
  const double span = opt.span > 0 ? opt.span : 0.5 * X;
  const ModeLayout& l = kCheckLayout;
  const ModeOperators ops = build_mode_operators(l);
  const CollapseSet cs = opt.noise ? collapse_operators(*opt.noise, ops) : CollapseSet{};
  const double area = tuned.amplitude * (tuned.T_p - tuned.t_r);
  std::vector<AlignmentRow> rows;
  for (double T : T_p_candidates) {
    SquareCheckParams p = tuned;
    p.T_p = T;
    p.amplitude = area / (T - p.t_r);
    // P(e | N unchanged) for the given input.
    auto response = [&](double dw, int na, int nb) {
      SquareCheckParams q = p;
      q.detuning = dw;
      const DriveSchedule s = erasure_check_schedule({chi, AncillaPair::GE, 0.5}, q);
      const Mat PN = total_photon_projector(l, na + nb).m;
      if (cs.empty()) {
        const Vec out = check_unitary(s, l) * basis_state(l, na, nb).amp;
        const double keep = (PN * out).squaredNorm();
        return (ops.proj_e * PN * out).squaredNorm() / keep;
      }
      const MixedState r = propagate(s, MixedState::from_pure(basis_state(l, na, nb)), cs);
      return (ops.proj_e * PN * r.rho).trace().real() / (PN * r.rho).trace().real();
    };
    AlignmentRow row;
    row.T_p = T;
    for (int k = 0; k < opt.points; ++k) {
      const double dw = -span + 2 * span * k / (opt.points - 1);
      row.detunings.push_back(dw);
      row.p00.push_back(response(dw, 0, 0));
      row.p01.push_back(response(dw, 0, 1));
      row.p10.push_back(response(dw, 1, 0));
    }
    const double tol = 1e-6 * X;
    {
      std::vector<double> neg(row.p00.size());
      std::transform(row.p00.begin(), row.p00.end(), neg.begin(), [](double v) { return -v; });
      const size_t i = std::min_element(neg.begin(), neg.end()) - neg.begin();
      const size_t j = std::clamp<size_t>(i, 1, neg.size() - 2);
      row.peak_00 =
          brent_min([&](double w) { return -response(w, 0, 0); }, row.detunings[j - 1], row.detunings[j],
                    row.detunings[j + 1], tol)
              .first;
    }
    // Logical minima: the grid local minimum closest to zero detuning.
    auto nearest_min = [&](const std::vector<double>& y, int na, int nb) {
      size_t pick = y.size() / 2;
      double dist = std::numeric_limits<double>::infinity();
      for (size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] <= y[i - 1] && y[i] <= y[i + 1] && std::abs(row.detunings[i]) < dist) {
          dist = std::abs(row.detunings[i]);
          pick = i;
        }
      return brent_min([&](double w) { return response(w, na, nb); }, row.detunings[pick - 1], row.detunings[pick],
                       row.detunings[pick + 1], tol)
          .first;
    };
    row.min_01 = nearest_min(row.p01, 0, 1);
    row.min_10 = nearest_min(row.p10, 1, 0);
    row.gap = std::max(std::abs(row.peak_00 - row.min_01), std::abs(row.peak_00 - row.min_10));
    row.split = std::abs(row.min_01 - row.min_10);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dualrail
