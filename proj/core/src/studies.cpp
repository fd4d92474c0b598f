#include "dualrail/studies.hpp"

#include <gsl/gsl_blas.h>
#include <gsl/gsl_fit.h>
#include <gsl/gsl_multifit.h>
#include <gsl/gsl_multifit_nlinear.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dualrail/tuneup.hpp"
#include "numeric.hpp"

namespace dualrail {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

double SystemParams::clip_g(double g, std::vector<std::string>* warnings) const {
  if (std::abs(g) <= g_bs_max) return g;
  if (warnings) {
    std::ostringstream os;
    os << "g_bs/2pi = " << g / kTwoPi << " MHz clipped to " << g_bs_max / kTwoPi << " MHz";
    warnings->push_back(os.str());
  }
  return std::copysign(g_bs_max, g);
}

void SystemParams::validate() const {
  for (double v : {chi_bob, chi_alice, alpha, chi_tr, chi_ct})
    if (!std::isfinite(v) || v == 0) throw std::invalid_argument("dispersive shifts and anharmonicity must be nonzero");
  if (!(kappa_readout > 0) || !(g_bs_max > 0) || !(nbar_readout >= 0) || !(chi_cr >= 0))
    throw std::invalid_argument("kappa, g_bs_max, nbar and chi_cr must be positive");
}

unsigned resolve_jobs(int jobs) {
  if (jobs > 0) return unsigned(jobs);
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  if (n == 1) return {a};
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

// ---- spectroscopy -------------------------------------------------------

double ProbeParams::half_linewidth() const {
  // sinc^2 half maximum at x = 1.39156
  return 2.0 * 1.3915573904 / duration;
}

ProbeParams default_probe(double chi) {
  const double X = std::abs(chi);
  return {X / 80.0, 20.0 * kTwoPi / X};
}

namespace {

struct ProbeKit {
  ModeLayout layout;
  ModeOperators ops;
  std::vector<Vec> inputs;
};

ProbeKit probe_kit(const SpectroscopyConfig& c) {
  if (c.N < 0) throw std::invalid_argument("N must be >= 0");
  const int d = std::max(2, c.N + 1);
  ProbeKit k{{d, d, 2}, {}, {}};
  k.ops = build_mode_operators(k.layout);
  switch (c.input) {
    case SpectroInput::Alice: k.inputs.push_back(basis_state(k.layout, c.N, 0).amp); break;
    case SpectroInput::Bob: k.inputs.push_back(basis_state(k.layout, 0, c.N).amp); break;
    case SpectroInput::Mixed:
      for (int na = 0; na <= c.N; ++na) k.inputs.push_back(basis_state(k.layout, na, c.N - na).amp);
      break;
  }
  return k;
}

double probe_response(const SpectroscopyConfig& c, const ProbeKit& k, double g, double dw) {
  DriveSchedule s;
  s.coupling = {c.chi, AncillaPair::GE, 0.5};
  s.beamsplitter = {g, c.delta, 0.0, 0.0, c.probe.duration};
  s.pulses = {{SquarePulse{c.probe.amplitude, c.probe.duration, 0.0, dw, 0.0}, 0.0}};
  s.total_duration = c.probe.duration;
  const Mat U = unitary_from_hamiltonian(drive_frame_hamiltonian(s, k.ops), s.total_duration);
  double pe = 0;
  for (const Vec& v : k.inputs) pe += (k.ops.proj_e * (U * v)).squaredNorm();
  return pe / double(k.inputs.size());
}

Ridge extract_ridge(const SpectroscopyConfig& c, const ProbeKit& k, double g) {
  Ridge r;
  r.g_bs = g;
  if (c.dw_grid.size() < 2) throw std::invalid_argument("need a detuning range");
  const auto [lo_it, hi_it] = std::minmax_element(c.dw_grid.begin(), c.dw_grid.end());
  const double h = 0.25 * c.probe.half_linewidth();
  const int n = std::max(3, int(std::ceil((*hi_it - *lo_it) / h)) + 1);
  const auto x = linspace(*lo_it, *hi_it, n);
  std::vector<double> y;
  for (double w : x) y.push_back(probe_response(c, k, g, w));
  const double ymax = *std::max_element(y.begin(), y.end());
  const double floor = std::max(1e-3, c.ridge_threshold * ymax);
  std::vector<int> cand;
  for (int i = 1; i + 1 < n; ++i)
    if (y[i] >= y[i - 1] && y[i] > y[i + 1] && y[i] >= floor) cand.push_back(i);
  // Square-pulse sidelobes: weak maxima close to a much stronger one.
  const double window = 10.0 * c.probe.half_linewidth();
  for (int i : cand) {
    bool sidelobe = false;
    for (int j : cand)
      if (j != i && std::abs(x[j] - x[i]) < window && y[i] < c.sidelobe_ratio * y[j]) sidelobe = true;
    if (sidelobe) continue;
    auto best = detail::brent_min([&](double w) { return -probe_response(c, k, g, w); }, x[i - 1], x[i], x[i + 1],
                                  1e-6 * h);
    r.peaks.push_back(best.first);
    r.heights.push_back(-best.second);
  }
  const auto lines = oracle_lines(c.N, g, c.delta, c.chi);
  for (double p : r.peaks) {
    double d = std::numeric_limits<double>::infinity();
    for (double l : lines) d = std::min(d, std::abs(p - l));
    r.deviation.push_back(d);
  }
  return r;
}

}  // namespace

double probe_response(const SpectroscopyConfig& c, double g_bs, double dw) {
  return probe_response(c, probe_kit(c), g_bs, dw);
}

std::vector<double> oracle_lines(int N, double g_bs, double delta, double chi) {
  std::vector<double> w;
  for (const auto& l : transition_frequencies_general(N, g_bs, delta, chi)) w.push_back(l.omega);
  std::sort(w.begin(), w.end());
  std::vector<double> out;
  for (double v : w)
    if (out.empty() || std::abs(v - out.back()) > 1e-9 * std::max(1.0, std::abs(v))) out.push_back(v);
  return out;
}

Ridge extract_ridge(const SpectroscopyConfig& c, double g_bs) { return extract_ridge(c, probe_kit(c), g_bs); }

SpectroscopyMap study_spectroscopy_map(const SpectroscopyConfig& c) {
  if (c.probe.amplitude <= 0 || c.probe.duration <= 0) throw std::invalid_argument("probe must be positive");
  SpectroscopyMap m;
  m.tolerance = c.probe.half_linewidth();
  for (double g : c.g_grid)
    if (c.probe.amplitude > 0.1 * std::max(g, std::abs(c.chi))) {
      std::ostringstream os;
      os << "probe amplitude not small against max(g_bs, |chi|) at g_bs/2pi = " << g / kTwoPi << " MHz";
      m.warnings.push_back(os.str());
      break;
    }
  const ProbeKit kit = probe_kit(c);
  m.pe = parallel_map(c.g_grid.size(), c.jobs, [&](std::size_t i) {
    std::vector<double> col;
    for (double w : c.dw_grid) col.push_back(probe_response(c, kit, c.g_grid[i], w));
    return col;
  });
  m.ridges = parallel_map(c.g_grid.size(), c.jobs, [&](std::size_t i) { return extract_ridge(c, kit, c.g_grid[i]); });
  for (double g : c.g_grid) m.oracle.push_back(oracle_lines(c.N, g, c.delta, c.chi));
  for (const auto& r : m.ridges)
    for (double d : r.deviation) m.max_deviation = std::max(m.max_deviation, d);
  return m;
}

SpectroscopyMap study_nonsymmetric_spectrum(SpectroscopyConfig c) {
  c.delta = c.chi;
  return study_spectroscopy_map(c);
}

// ---- power Rabi ---------------------------------------------------------

namespace {

struct SinData {
  const std::vector<double>* x;
  const std::vector<double>* y;
};

int sin_residuals(const gsl_vector* p, void* d, gsl_vector* f) {
  const auto* s = static_cast<SinData*>(d);
  const double w = gsl_vector_get(p, 0), a = gsl_vector_get(p, 1), c = gsl_vector_get(p, 2),
               ph = gsl_vector_get(p, 3);
  for (std::size_t i = 0; i < s->x->size(); ++i)
    gsl_vector_set(f, i, c + a * std::cos(w * (*s->x)[i] + ph) - (*s->y)[i]);
  return GSL_SUCCESS;
}

}  // namespace

SinusoidFit fit_sinusoid(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 8) throw std::invalid_argument("sinusoid fit needs >= 8 points");
  const double dx = x[1] - x[0];
  const double w0 = detail::dominant_frequency(y, dx);
  const auto [mn, mx] = std::minmax_element(y.begin(), y.end());
  detail::GslQuiet quiet;
  SinData sd{&x, &y};
  gsl_multifit_nlinear_fdf fdf;
  fdf.f = sin_residuals;
  fdf.df = nullptr;
  fdf.fvv = nullptr;
  fdf.n = x.size();
  fdf.p = 4;
  fdf.params = &sd;
  SinusoidFit best;
  best.residual_norm = std::numeric_limits<double>::infinity();
  gsl_multifit_nlinear_parameters prm = gsl_multifit_nlinear_default_parameters();
  for (double ph0 : {0.0, 0.5 * kPi, kPi, -0.5 * kPi}) {
    gsl_multifit_nlinear_workspace* w = gsl_multifit_nlinear_alloc(gsl_multifit_nlinear_trust, &prm, x.size(), 4);
    double p0[4] = {w0, 0.5 * (*mx - *mn), 0.5 * (*mx + *mn), ph0};
    gsl_vector_view pv = gsl_vector_view_array(p0, 4);
    gsl_multifit_nlinear_init(&pv.vector, &fdf, w);
    int info;
    gsl_multifit_nlinear_driver(400, 1e-13, 1e-13, 0.0, nullptr, nullptr, &info, w);
    const gsl_vector* p = gsl_multifit_nlinear_position(w);
    const double res = gsl_blas_dnrm2(gsl_multifit_nlinear_residual(w));
    if (res < best.residual_norm) {
      best = {std::abs(gsl_vector_get(p, 0)), gsl_vector_get(p, 1), gsl_vector_get(p, 2), gsl_vector_get(p, 3), res};
      if (gsl_vector_get(p, 0) < 0) best.phase = -best.phase;
      if (best.amplitude < 0) {
        best.amplitude = -best.amplitude;
        best.phase += kPi;
      }
      best.phase = std::remainder(best.phase, kTwoPi);
    }
    gsl_multifit_nlinear_free(w);
  }
  return best;
}

PowerRabiResult study_power_rabi(const PowerRabiConfig& c) {
  const double X = std::abs(c.chi);
  const double T = c.duration > 0 ? c.duration : 40.0 * kTwoPi / X;
  const double amax = c.max_amplitude > 0 ? c.max_amplitude : X / 40.0;
  const auto amps = linspace(0.0, amax, c.amplitude_points);
  SpectroscopyConfig sc;
  sc.N = 1;
  sc.chi = c.chi;
  sc.delta = 0.5 * c.chi;
  sc.input = SpectroInput::Mixed;
  const double Wl = 0.5 * X;
  auto rabi = [&](double g, int dm) {
    PowerRabiPoint pt;
    pt.g_bs = g;
    pt.delta_m = dm;
    const double Om = larmor_frequency(g, c.chi);
    pt.drive_freq = 0.5 * c.chi + dm * Om;
    pt.predicted = dm == 0 ? g / Om : Wl / Om;
    std::vector<double> y;
    for (double a : amps) {
      SpectroscopyConfig s = sc;
      s.probe = {a, T};
      y.push_back(a == 0 ? 0.0 : probe_response(s, g, pt.drive_freq));
    }
    const SinusoidFit f = fit_sinusoid(amps, y);
    // P = sin^2(el A T): angular frequency in A is 2 el T.
    pt.rate = f.omega / (2 * T);
    // judge contrast on the data; a slow sinusoid fitted to a flat tail can have any amplitude
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    pt.null_point = !(*hi - *lo >= c.min_contrast);
    return pt;
  };
  std::vector<std::pair<double, int>> jobs{{0.0, -1}};
  for (int dm : c.delta_m)
    for (double g : c.g_grid) jobs.push_back({g, dm});
  auto pts = parallel_map(jobs.size(), c.jobs, [&](std::size_t i) { return rabi(jobs[i].first, jobs[i].second); });
  PowerRabiResult r;
  r.anchor_rate = pts.front().rate;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    pts[i].normalized = pts[i].null_point ? std::numeric_limits<double>::quiet_NaN() : pts[i].rate / r.anchor_rate;
    r.points.push_back(pts[i]);
  }
  return r;
}

// ---- error scaling ------------------------------------------------------

namespace {

DriveSchedule scaling_schedule(double chi, double g, double T) {
  return erasure_check_schedule({chi, AncillaPair::GE, 0.5}, {T, g, 0.5 * kPi / T, 0.0, 0.5 * chi, 0, 0, 0});
}

struct GTProblem {
  double chi, g0, T0;
};

double gt_cost(const gsl_vector* x, void* p) {
  const auto* pr = static_cast<GTProblem*>(p);
  const double g = gsl_vector_get(x, 0) * pr->g0, T = gsl_vector_get(x, 1) * pr->T0;
  if (g <= 0 || T <= 0) return 3.0;
  return transfer_cost(scaling_schedule(pr->chi, g, T));
}

double quadratic_linear_term(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  gsl_matrix* A = gsl_matrix_alloc(n, 3);
  gsl_vector* b = gsl_vector_alloc(n);
  gsl_vector* c = gsl_vector_alloc(3);
  gsl_matrix* cov = gsl_matrix_alloc(3, 3);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_matrix_set(A, i, 0, 1.0);
    gsl_matrix_set(A, i, 1, x[i]);
    gsl_matrix_set(A, i, 2, x[i] * x[i]);
    gsl_vector_set(b, i, y[i]);
  }
  double chisq;
  gsl_multifit_linear_workspace* w = gsl_multifit_linear_alloc(n, 3);
  gsl_multifit_linear(A, b, c, cov, &chisq, w);
  const double lin = gsl_vector_get(c, 1);
  gsl_multifit_linear_free(w);
  gsl_matrix_free(A);
  gsl_vector_free(b);
  gsl_vector_free(c);
  gsl_matrix_free(cov);
  return lin;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(std::abs(y[i])));
  }
  double c0, c1, c00, c01, c11, ss;
  gsl_fit_linear(lx.data(), 1, ly.data(), 1, lx.size(), &c0, &c1, &c00, &c01, &c11, &ss);
  return c1;
}

}  // namespace

ScalingPoint optimize_scaling_point(double chi, int n, int m, bool optimize) {
  const ErasureCheckGuess g = erasure_check_guess(chi, n, m);
  ScalingPoint pt;
  pt.n = n;
  pt.m = m;
  pt.g_bs = g.g_bs;
  pt.T_p = g.T_p;
  GTProblem pr{chi, g.g_bs, g.T_p};
  gsl_vector* x = gsl_vector_alloc(2);
  gsl_vector_set_all(x, 1.0);
  pt.coherent_cost = gt_cost(x, &pr);
  if (optimize) {
    gsl_multimin_function fn{gt_cost, 2, &pr};
    gsl_vector* step = gsl_vector_alloc(2);
    gsl_vector_set_all(step, 0.005);
    gsl_multimin_fminimizer* mm = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
    gsl_multimin_fminimizer_set(mm, &fn, x, step);
    for (int it = 0; it < 3000; ++it) {
      if (gsl_multimin_fminimizer_iterate(mm) != GSL_SUCCESS) break;
      if (gsl_multimin_fminimizer_size(mm) < 1e-11) break;
    }
    if (mm->fval < pt.coherent_cost) {
      pt.g_bs = gsl_vector_get(mm->x, 0) * g.g_bs;
      pt.T_p = gsl_vector_get(mm->x, 1) * g.T_p;
      pt.coherent_cost = mm->fval;
    }
    gsl_multimin_fminimizer_free(mm);
    gsl_vector_free(step);
  }
  gsl_vector_free(x);
  return pt;
}

ScalingResult study_error_scaling(const ScalingConfig& c, ScalingChannel ch) {
  if (c.rates.size() < 3) throw std::invalid_argument("need at least three rates for a quadratic fit");
  const double X = std::abs(c.chi);
  std::vector<std::pair<int, int>> grid;
  for (int n : c.n)
    for (int k : c.m_factors) grid.push_back({n, k * n});
  ScalingResult res;
  res.channel = ch;
  res.points = parallel_map(grid.size(), c.jobs, [&](std::size_t i) {
    ScalingPoint pt = optimize_scaling_point(c.chi, grid[i].first, grid[i].second, c.optimize);
    const DriveSchedule s = scaling_schedule(c.chi, pt.g_bs, pt.T_p);
    std::vector<double> er, pa;
    for (double r : c.rates) {
      NoiseParams nz = NoiseParams::none();
      if (r > 0) (ch == ScalingChannel::Decay ? nz.t1_ge : nz.tphi_ge) = 1.0 / (r * X);
      const CheckMetrics m = evaluate_check(s, nz);
      er.push_back(m.p_flag);
      pa.push_back(m.p_pauli);
    }
    pt.erasure_slope = quadratic_linear_term(c.rates, er);
    pt.pauli_slope = quadratic_linear_term(c.rates, pa);
    return pt;
  });
  auto at = [&](int n, int m) -> const ScalingPoint& {
    for (const auto& p : res.points)
      if (p.n == n && p.m == m) return p;
    throw std::logic_error("missing grid point");
  };
  std::vector<int> ns = c.n;
  std::sort(ns.begin(), ns.end());
  const std::vector<int> fit_n(ns.end() - std::min<std::size_t>(c.fit_last, ns.size()), ns.end());
  const int kmax = *std::max_element(c.m_factors.begin(), c.m_factors.end());
  std::vector<double> tx, ty;
  for (int n : fit_n) {
    const auto& p = at(n, kmax * n);
    tx.push_back(p.T_p * X);
    ty.push_back(p.erasure_slope);
  }
  res.erasure_vs_T = loglog_slope(tx, ty);
  res.fixed_g_exponent = ch == ScalingChannel::Dephasing ? -4.0 : -2.0;
  std::vector<double> off;
  for (int n : ns) {
    std::vector<double> gx, py;
    for (int k : c.m_factors) {
      gx.push_back(at(n, k * n).g_bs / X);
      py.push_back(at(n, k * n).pauli_slope);
    }
    res.pauli_vs_g_per_n.push_back(loglog_slope(gx, py));
  }
  double sum = 0;
  for (int n : fit_n) {
    sum += res.pauli_vs_g_per_n[std::find(ns.begin(), ns.end(), n) - ns.begin()];
    // Offset of log p after removing the fixed g dependence.
    double o = 0;
    for (int k : c.m_factors) {
      const auto& p = at(n, k * n);
      o += std::log(std::abs(p.pauli_slope)) - res.fixed_g_exponent * std::log(p.g_bs / X);
    }
    off.push_back(std::exp(o / double(c.m_factors.size())));
  }
  res.pauli_vs_g = sum / double(fit_n.size());
  std::vector<double> tn;
  for (int n : fit_n) tn.push_back(at(n, kmax * n).T_p * X);
  res.pauli_vs_T = loglog_slope(tn, off);
  return res;
}

// ---- scheme comparison and projected rates ----------------------------

DriveSchedule table_two_check(double chi, AncillaPair pair, double g_bs, double T_p) {
  return erasure_check_schedule({chi, pair, 0.5}, {T_p, g_bs, 0.5 * kPi / T_p, 0.0, 0.5 * chi, 0, 0, 0});
}

std::vector<SchemeRow> study_scheme_comparison(const SchemeConfig& c) {
  struct Cell {
    const char* scheme;
    const char* levels;
    AncillaPair pair;
    bool parity;
    double ref_e, ref_p;
  };
  const std::vector<Cell> cells = {{"joint-photon-number", "g-e", AncillaPair::GE, false, 0.0061, 0.0016},
                                   {"joint-photon-number", "g-f", AncillaPair::GF, false, 0.0292, 0.0010},
                                   {"joint-parity", "g-e", AncillaPair::GE, true, 0.0140, 0.0023},
                                   {"joint-parity", "g-f", AncillaPair::GF, true, 0.0543, 0.000048}};
  const NoiseParams nz = c.noise.transmon_only();
  return parallel_map(cells.size(), c.jobs, [&](std::size_t i) {
    const Cell& k = cells[i];
    const DriveSchedule s = k.parity ? joint_parity_schedule(c.chi, k.pair) : table_two_check(c.chi, k.pair, c.g_bs, c.T_p);
    const CheckMetrics m = evaluate_check(s, nz);
    return SchemeRow{k.scheme, k.levels, m.p_flag, m.p_pauli, k.ref_e, k.ref_p};
  });
}

NoiseParams ProjectionConfig::projected_noise() {
  NoiseParams n;
  n.t1_a = n.t1_b = 1000.0;
  n.t1_ge = 200.0;
  n.tphi_ge = 200.0;
  return n;
}

ProjectionResult study_performance_projection(const ProjectionConfig& c) {
  const DriveSchedule s = table_two_check(c.chi, AncillaPair::GE, c.g_bs, c.T_p);
  CheckMetricsOptions o;
  o.pre_idle = c.tau_ro;
  o.post_select_logical = true;
  const CheckMetrics full = evaluate_check(s, c.noise, o);
  const CheckMetrics tr = evaluate_check(s, c.noise.transmon_only(), o);
  ProjectionResult r;
  r.p_intrinsic = full.p00;
  r.p_pauli_induced = full.p_pauli;
  r.p_fp = tr.p_flag;
  r.readout = readout_induced_dephasing(c.system.nbar_readout, c.system.kappa_readout, c.system.chi_cr,
                                        c.readout_duration);
  r.chi_cr_estimate = cross_chi_estimate(c.system.chi_tr, c.system.chi_ct, c.system.alpha);
  return r;
}

CphaseParams cphase_operating_point(double chi) {
  const double X = std::abs(chi);
  CphaseParams p;
  p.g_bs = 1.4788 * X;
  p.n_chop = 2.0;
  p.sigma = 3.1995 * kTwoPi / X / (2 * p.n_chop);
  p.delta = 0.5 * chi;
  p.amplitude = 0.5 * kPi / gaussian_area(ChoppedGaussian{1.0, p.sigma, p.n_chop, 0.0, 0.0});
  return p;
}

ChannelStats sample_channel_stats(double p, double r_e, double p_fn, GateKind gate, std::uint64_t draws,
                                  std::uint64_t seed, int jobs) {
  constexpr std::uint64_t kChunk = 1u << 16;
  const std::uint64_t chunks = (draws + kChunk - 1) / kChunk;
  struct Count {
    std::uint64_t erased = 0, missed = 0, pauli = 0;
  };
  auto counts = parallel_map(chunks, jobs, [&](std::size_t c) {
    CounterRng rng(seed, c);
    Count k;
    const std::uint64_t n = std::min<std::uint64_t>(kChunk, draws - c * kChunk);
    for (std::uint64_t i = 0; i < n; ++i) {
      const GateErrorSample s = sample_gate_error_channel(p, r_e, p_fn, gate, rng);
      if (s.erased[0] || s.erased[1]) {
        ++k.erased;
        if (s.missed) ++k.missed;
      } else if (s.pauli[0] != Pauli::I || s.pauli[1] != Pauli::I) {
        ++k.pauli;
      }
    }
    return k;
  });
  Count t;
  for (const auto& k : counts) {
    t.erased += k.erased;
    t.missed += k.missed;
    t.pauli += k.pauli;
  }
  ChannelStats s;
  s.draws = draws;
  const double n = double(draws);
  s.erasure_freq = t.erased / n;
  s.missed_freq = t.missed / n;
  s.pauli_freq = t.pauli / n;
  s.erasure_expected = p * r_e;
  s.missed_expected = p * r_e * p_fn;
  s.erasure_sigma = std::sqrt(s.erasure_expected * (1 - s.erasure_expected) / n);
  s.missed_sigma = std::sqrt(s.missed_expected * (1 - s.missed_expected) / n);
  return s;
}

}  // namespace dualrail
