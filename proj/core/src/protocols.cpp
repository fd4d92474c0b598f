#include "dualrail/protocols.hpp"

#include <gsl/gsl_fit.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dualrail {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

double wrap(double x) { return std::remainder(x, 2 * kPi); }
}  // namespace

std::string to_string(Cardinal c) {
  switch (c) {
    case Cardinal::PlusX: return "+X";
    case Cardinal::MinusX: return "-X";
    case Cardinal::PlusY: return "+Y";
    case Cardinal::MinusY: return "-Y";
    case Cardinal::PlusZ: return "+Z";
    case Cardinal::MinusZ: return "-Z";
  }
  return "?";
}

Cardinal cardinal_from_string(const std::string& s) {
  for (Cardinal c : kCardinals)
    if (to_string(c) == s) return c;
  throw std::invalid_argument("unknown cardinal label " + s);
}

PureState prepare_cardinal(Cardinal c, const ModeLayout& l) {
  const Vec z0 = basis_state(l, 1, 0).amp, z1 = basis_state(l, 0, 1).amp;
  const double r = 1 / std::sqrt(2.0);
  const cplx i(0, 1);
  Vec v;
  switch (c) {
    case Cardinal::PlusZ: v = z0; break;
    case Cardinal::MinusZ: v = z1; break;
    case Cardinal::PlusX: v = r * (z0 + z1); break;
    case Cardinal::MinusX: v = r * (z0 - z1); break;
    case Cardinal::PlusY: v = r * (z0 + i * z1); break;
    case Cardinal::MinusY: v = r * (z0 - i * z1); break;
  }
  return {l, v};
}

ModeLayout dual_rail_layout(AncillaPair pair) { return {2, 2, pair == AncillaPair::GE ? 2 : 3}; }

Mat Channel::apply(const Mat& rho) const {
  Eigen::Map<const Vec> v(rho.data(), rho.size());
  Vec out = S * v;
  return Eigen::Map<const Mat>(out.data(), dim, dim);
}

Channel Channel::then(const Channel& next) const { return {dim, next.S * S}; }

Channel identity_channel(int dim) { return {dim, Mat::Identity(dim * dim, dim * dim)}; }

Channel unitary_channel(const Mat& U) {
  const int d = int(U.rows());
  Channel c{d, Mat(d * d, d * d)};
  Mat e = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      e(i, j) = 1.0;
      Mat out = U * e * U.adjoint();
      c.S.col(j * d + i) = Eigen::Map<const Vec>(out.data(), d * d);
      e(i, j) = 0.0;
    }
  return c;
}

Channel schedule_channel(const DriveSchedule& s, const ModeLayout& l, const CollapseSet& cs, const EvolveOptions& opt) {
  const int d = l.total();
  if (cs.empty() && s.total_duration >= 0) return unitary_channel(schedule_unitary(s, l, opt));
  Channel c{d, Mat(d * d, d * d)};
  Mat e = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      e(i, j) = 1.0;
      Mat out = propagate_operator(s, l, e, cs, opt);
      c.S.col(j * d + i) = Eigen::Map<const Vec>(out.data(), d * d);
      e(i, j) = 0.0;
    }
  return c;
}

Mat ancilla_ground_projector(const ModeLayout& l) { return build_mode_operators(l).proj_g; }

Mat project_ground(const Mat& rho, const ModeLayout& l) {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (int i = 0; i < l.total(); i += l.dim_q)
    for (int j = 0; j < l.total(); j += l.dim_q) out(i, j) = rho(i, j);
  return out;
}

Mat reset_flagged(const Mat& rho, const ModeLayout& l) {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (int i = 0; i < l.total(); i += l.dim_q)
    for (int j = 0; j < l.total(); j += l.dim_q)
      for (int q = 1; q < l.dim_q; ++q) out(i, j) += rho(i + q, j + q);
  return out;
}

namespace {

Mat bob_phase_flip(const Mat& rho, const ModeLayout& l, double p) {
  if (p <= 0) return rho;
  const ModeOperators ops = build_mode_operators(l);
  Mat Z = Mat::Zero(l.total(), l.total());
  for (int k = 0; k < l.total(); ++k) Z(k, k) = ops.n_b(k, k).real() > 0.5 && int(std::lround(ops.n_b(k, k).real())) % 2 ? -1.0 : 1.0;
  return (1 - p) * rho + p * Z * rho * Z;
}

MixedState normalized(const ModeLayout& l, const Mat& m) {
  const double t = m.trace().real();
  if (t <= 1e-300) return {l, Mat::Zero(m.rows(), m.cols())};
  return {l, m / t};
}

DriveSchedule idle_like(const DriveSchedule& ref, double duration) {
  return idle_schedule(ref.coupling, duration, ref.beamsplitter.delta);
}

}  // namespace

CheckOutcome run_erasure_check(const MixedState& rho, const DriveSchedule& check, const NoiseParams& noise,
                               const ReadoutModel& ro) {
  const ModeLayout& l = rho.layout;
  const ModeOperators ops = build_mode_operators(l);
  const CollapseSet cs = collapse_operators(noise, ops);
  CheckOutcome out;
  auto tr = evolve_lindblad(check, rho, cs, {check.total_duration});
  out.truncation = tr.truncation;
  MixedState cur = tr.states.back();
  const double pre = ro.tau_ro * ro.pre_projection_fraction;
  const double post = ro.tau_ro - pre;
  if (pre > 0) cur = propagate(idle_like(check, pre), cur, cs);
  Mat g = project_ground(cur.rho, l);
  Mat e = reset_flagged(cur.rho, l);
  if (post > 0) {
    const DriveSchedule idle = idle_like(check, post);
    g = propagate_operator(idle, l, g, cs);
    e = propagate_operator(idle, l, e, cs);
  }
  if (ro.add_readout_dephasing) {
    g = bob_phase_flip(g, l, ro.readout_pauli);
    e = bob_phase_flip(e, l, ro.readout_pauli);
  }
  out.p_flag = e.trace().real();
  out.unnorm_g = g;
  out.unnorm_e = e;
  out.post_g = normalized(l, g);
  out.post_e = normalized(l, e);
  return out;
}

double pauli_rate_from_fidelity(double f) {
  if (f < 0 || f > 1) throw std::invalid_argument("fidelity must be in [0,1]");
  return 1.5 * (1.0 - f);
}

CheckMetrics evaluate_check(const DriveSchedule& check, const NoiseParams& noise, const CheckMetricsOptions& opt) {
  const ModeLayout l = dual_rail_layout(check.coupling.pair);
  const ModeOperators ops = build_mode_operators(l);
  const CollapseSet cs = collapse_operators(noise, ops);
  Mat U = schedule_unitary(check, l, opt.evolve);
  if (opt.pre_idle > 0) U = U * schedule_unitary(idle_like(check, opt.pre_idle), l, opt.evolve);
  Mat P00 = total_photon_projector(l, 0).m;
  Mat P1 = total_photon_projector(l, 1).m;
  CheckMetrics m;
  double fsum = 0;
  for (size_t k = 0; k < kCardinals.size(); ++k) {
    const PureState psi = prepare_cardinal(kCardinals[k], l);
    MixedState r = MixedState::from_pure(psi);
    if (opt.pre_idle > 0) r = propagate(idle_like(check, opt.pre_idle), r, cs, opt.evolve);
    r = propagate(check, r, cs, opt.evolve);
    m.flag[k] = 1.0 - (ops.proj_g * r.rho).trace().real();
    m.p00 += (P00 * r.rho).trace().real();
    Mat keep = ops.proj_g;
    if (opt.post_select_logical) keep = P1 * ops.proj_g;
    Mat rg = keep * r.rho * keep;
    rg /= rg.trace().real();
    // Reference: noiseless output of the same sequence, post-selected on g.
    Vec ref = ops.proj_g * U * psi.amp;
    ref.normalize();
    m.fidelity[k] = (ref.adjoint() * rg * ref)(0, 0).real();
    m.p_flag += m.flag[k];
    fsum += m.fidelity[k];
  }
  m.p_flag /= 6;
  m.p00 /= 6;
  m.p_pauli = pauli_rate_from_fidelity(std::clamp(fsum / 6, 0.0, 1.0));
  return m;
}

double false_negative_rate(const DriveSchedule& check, const NoiseParams& noise, const ReadoutModel& readout) {
  const ModeLayout l = dual_rail_layout(check.coupling.pair);
  const MixedState vac = MixedState::from_pure(basis_state(l, 0, 0));
  // Cavities cannot leave |0,0> without heating, so post-selection on them is implicit.
  return 1.0 - run_erasure_check(vac, check, noise, readout).p_flag;
}

namespace {

struct RepeatMaps {
  ModeLayout layout;
  Channel before;  // pulse (or idle) then the pre-projection part of the readout
  Channel after;   // rest of the readout and the dead time
  Channel echo;
  Channel before_ideal, after_ideal;
};

RepeatMaps build_repeat_maps(const DriveSchedule& check, const NoiseParams& noise, const RepeatedCheckConfig& cfg) {
  RepeatMaps m;
  m.layout = dual_rail_layout(check.coupling.pair);
  const ModeOperators ops = build_mode_operators(m.layout);
  const CollapseSet cs = collapse_operators(noise, ops);
  const DriveSchedule body = cfg.mode == RepeatMode::Check ? check : idle_like(check, check.total_duration);
  const double pre = cfg.readout.tau_ro * cfg.readout.pre_projection_fraction;
  const double post = cfg.readout.tau_ro - pre + cfg.inter_check_idle;
  auto build = [&](const CollapseSet& c, Channel& before, Channel& after) {
    before = schedule_channel(body, m.layout, c);
    if (pre > 0) before = before.then(schedule_channel(idle_like(check, pre), m.layout, c));
    after = post > 0 ? schedule_channel(idle_like(check, post), m.layout, c) : identity_channel(m.layout.total());
  };
  build(cs, m.before, m.after);
  build({}, m.before_ideal, m.after_ideal);
  // Ideal instantaneous logical X: full swap of the two cavities.
  m.echo = unitary_channel(unitary_from_hamiltonian(0.5 * (ops.a * ops.b.adjoint() + ops.a.adjoint() * ops.b), kPi));
  return m;
}

struct Tracks {
  Mat pass;    // unnormalized, post-selected on every pass so far
  Mat uncond;  // flagged branches reset and kept
  Mat ideal;   // noiseless pass branch
};

void step(const RepeatMaps& m, Tracks& t) {
  const ModeLayout& l = m.layout;
  Mat p = m.before.apply(t.pass);
  t.pass = m.after.apply(project_ground(p, l));
  Mat u = m.before.apply(t.uncond);
  t.uncond = m.after.apply(project_ground(u, l) + reset_flagged(u, l));
  Mat i = m.before_ideal.apply(t.ideal);
  t.ideal = m.after_ideal.apply(project_ground(i, l));
}

void apply_echo(const RepeatMaps& m, Tracks& t) {
  t.pass = m.echo.apply(t.pass);
  t.uncond = m.echo.apply(t.uncond);
  t.ideal = m.echo.apply(t.ideal);
}

RepeatedCheckPoint measure(const RepeatMaps& m, const Tracks& t, int n) {
  const ModeLayout& l = m.layout;
  const Mat P1 = total_photon_projector(l, 1).m;
  const Mat P00 = total_photon_projector(l, 0).m;
  RepeatedCheckPoint pt;
  pt.n = n;
  pt.success = t.pass.trace().real();
  pt.p00 = (P00 * t.uncond).trace().real();
  Mat logical = P1 * t.pass * P1;
  const double lp = logical.trace().real();
  pt.eol_pass = pt.success > 0 ? lp / pt.success : 0.0;
  // Ideal reference is pure up to numerical noise; use its dominant eigenvector.
  Mat ideal = t.ideal / t.ideal.trace().real();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (ideal + ideal.adjoint()));
  Vec ref = es.eigenvectors().col(es.eigenvectors().cols() - 1);
  pt.fidelity = lp > 0 ? std::clamp((ref.adjoint() * logical * ref)(0, 0).real() / lp, 0.0, 1.0) : 0.0;
  return pt;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double c0, c1, cov00, cov01, cov11, sumsq;
  gsl_fit_linear(x.data(), 1, y.data(), 1, x.size(), &c0, &c1, &cov00, &cov01, &cov11, &sumsq);
  return c1;
}

}  // namespace

std::vector<RepeatedCheckPoint> repeated_check_experiment(Cardinal label, const DriveSchedule& check,
                                                          const NoiseParams& noise, const RepeatedCheckConfig& cfg) {
  if (cfg.n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  const RepeatMaps m = build_repeat_maps(check, noise, cfg);
  const PureState psi = prepare_cardinal(label, m.layout);
  const Mat r0 = psi.amp * psi.amp.adjoint();
  std::vector<RepeatedCheckPoint> out;
  // Prefix states after k checks without echo, reused for every n.
  std::vector<Tracks> prefix{{r0, r0, r0}};
  for (int k = 1; k <= cfg.n_max / 2; ++k) {
    Tracks t = prefix.back();
    step(m, t);
    prefix.push_back(t);
  }
  for (int n = 0; n <= cfg.n_max; ++n) {
    Tracks t;
    if (cfg.echo) {
      t = prefix[n / 2];
      if (n > 0) apply_echo(m, t);
      for (int k = n / 2; k < n; ++k) step(m, t);
    } else {
      t = prefix[std::min<size_t>(n, prefix.size() - 1)];
      for (int k = int(prefix.size()) - 1; k < n; ++k) step(m, t);
    }
    out.push_back(measure(m, t, n));
  }
  return out;
}

ErrorBudget repeated_check_budget(const DriveSchedule& check, const NoiseParams& noise, const RepeatedCheckConfig& cfg,
                                  std::vector<std::vector<RepeatedCheckPoint>>* traces) {
  if (cfg.n_max < 2) throw std::invalid_argument("need at least two checks for a slope");
  std::vector<double> n, lsucc(cfg.n_max, 0.0), lp00(cfg.n_max, 0.0), pauli(cfg.n_max, 0.0);
  ErrorBudget b;
  b.n_checks = cfg.n_max;
  std::vector<double> fid_last(6, 0.0);
  for (size_t c = 0; c < kCardinals.size(); ++c) {
    auto tr = repeated_check_experiment(kCardinals[c], check, noise, cfg);
    for (int k = 1; k <= cfg.n_max; ++k) {
      lsucc[k - 1] += -std::log(tr[k].success) / 6;
      lp00[k - 1] += -std::log(1 - tr[k].p00) / 6;
      pauli[k - 1] += tr[k].fidelity / 6;
    }
    fid_last[c] = tr.back().fidelity;
    if (traces) traces->push_back(std::move(tr));
  }
  for (int k = 1; k <= cfg.n_max; ++k) {
    n.push_back(k);
    pauli[k - 1] = pauli_rate_from_fidelity(std::clamp(pauli[k - 1], 0.0, 1.0));
  }
  b.p_erasure = fit_slope(n, lsucc);
  b.p_intrinsic = fit_slope(n, lp00);
  b.p_FP = b.p_erasure - b.p_intrinsic;
  b.p_Pauli = fit_slope(n, pauli);
  b.fidelities = fid_last;
  b.p_FN = false_negative_rate(check, noise, cfg.readout);
  return b;
}

LogicalMeasurement logical_measurement(const MixedState& rho, Axis axis, bool post_select) {
  const ModeLayout& l = rho.layout;
  const ModeOperators ops = build_mode_operators(l);
  const Mat G0 = ops.a * ops.b.adjoint();
  auto bs_rotation = [&](double phi, double alpha) {
    const cplx e = std::polar(1.0, phi);
    Mat G = e * G0 + std::conj(e) * G0.adjoint();
    return unitary_from_hamiltonian(0.5 * G, alpha);
  };
  Mat r = rho.rho;
  if (axis == Axis::X) {
    Mat U = bs_rotation(0.5 * kPi, -0.5 * kPi);
    r = U * r * U.adjoint();
  } else if (axis == Axis::Y) {
    Mat U = bs_rotation(0.0, 0.5 * kPi);
    r = U * r * U.adjoint();
  }
  double p10 = 0, p01 = 0;
  for (int q = 0; q < l.dim_q; ++q) {
    p10 += r(l.index(1, 0, q), l.index(1, 0, q)).real();
    p01 += r(l.index(0, 1, q), l.index(0, 1, q)).real();
  }
  LogicalMeasurement m;
  m.pass = p10 + p01;
  m.expectation = p10 - p01;
  if (post_select) m.expectation = m.pass > 0 ? m.expectation / m.pass : 0.0;
  return m;
}

ParityOutcome run_joint_parity_check(const MixedState& rho, AncillaPair variant, const NoiseParams& noise,
                                     const ParityOptions& opt, double chi) {
  const DriveSchedule s = joint_parity_schedule(chi, variant, opt);
  const ModeOperators ops = build_mode_operators(rho.layout);
  const MixedState out = propagate(s, rho, collapse_operators(noise, ops));
  ParityOutcome o;
  o.p_g = (ops.proj_g * out.rho).trace().real();
  o.p_e = (ops.proj_e * out.rho).trace().real();
  o.p_f = rho.layout.dim_q == 3 ? (ops.proj_f * out.rho).trace().real() : 0.0;
  o.variant = variant;
  o.final_state = out;
  return o;
}

namespace {

const std::array<std::pair<int, int>, 4> kCphaseStates = {{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};

struct CphaseRaw {
  std::array<double, 4> phase{};  // phi_s - phi_00
  std::array<double, 4> pop{};
  double leakage = 0.0;
};

CphaseRaw cphase_raw(const CphaseParams& p, double chi, const NoiseParams& noise) {
  const ModeLayout l{3, 3, 2};
  const ModeOperators ops = build_mode_operators(l);
  const DriveSchedule s = cphase_schedule({chi, AncillaPair::GE, 0.5}, p);
  const CollapseSet cs = collapse_operators(noise, ops);
  CphaseRaw r;
  const int i00 = l.index(0, 0, 0);
  if (cs.empty()) {
    const Mat U = schedule_unitary(s, l);
    const cplx a00 = U(i00, i00);
    for (int k = 0; k < 4; ++k) {
      const int i = l.index(kCphaseStates[k].first, kCphaseStates[k].second, 0);
      r.phase[k] = std::arg(U(i, i) * std::conj(a00));
      r.pop[k] = std::norm(U(i, i));
      r.leakage += (1.0 - (ops.proj_g * U.col(i)).squaredNorm()) / 4;
    }
    return r;
  }
  for (int k = 0; k < 4; ++k) {
    const int i = l.index(kCphaseStates[k].first, kCphaseStates[k].second, 0);
    Mat x = Mat::Zero(l.total(), l.total());
    x(i, i) = 1.0;
    Mat y = propagate_operator(s, l, x, cs);
    r.pop[k] = y(i, i).real();
    r.leakage += (1.0 - (ops.proj_g * y).trace().real()) / 4;
    if (k == 0) continue;
    Mat c = Mat::Zero(l.total(), l.total());
    c(i, i00) = 1.0;  // |s><00|
    Mat yc = propagate_operator(s, l, c, cs);
    r.phase[k] = std::arg(yc(i, i00));
  }
  return r;
}

}  // namespace

CphaseSummary cphase_joint_snap(const CphaseParams& p, double chi, const NoiseParams& noise,
                                const CphaseParams* reference) {
  CphaseRaw r = cphase_raw(p, chi, noise);
  CphaseSummary s;
  s.populations = r.pop;
  s.leakage = r.leakage;
  // With phi_00 as the zero, phi_s = phase[s].
  s.conditional_phase = wrap(-r.phase[1] - r.phase[2] + r.phase[3]);
  std::array<double, 4> ph = r.phase;
  if (reference) {
    const CphaseRaw ref = cphase_raw(*reference, chi, noise);
    for (int k = 0; k < 4; ++k) ph[k] = wrap(ph[k] - ref.phase[k]);
  }
  const double mean = (ph[1] + ph[2] + ph[3]) / 3;
  for (int k = 0; k < 4; ++k) s.phases[k] = wrap(ph[k] - mean);
  return s;
}

double calibrate_cphase_phase(CphaseParams p, double chi, double theta) {
  const NoiseParams none = NoiseParams::none();
  auto err = [&](double a) {
    p.relative_phase = a;
    return wrap(cphase_joint_snap(p, chi, none).conditional_phase - theta);
  };
  // Unit slope: two fixed-point steps, then secant.
  double a0 = 0.0, e0 = err(a0);
  double a1 = a0 - e0, e1 = err(a1);
  for (int it = 0; it < 30 && std::abs(e1) > 1e-12; ++it) {
    const double slope = std::abs(e1 - e0) > 1e-14 ? (e1 - e0) / (a1 - a0) : 1.0;
    const double a2 = a1 - e1 / (std::abs(slope) > 0.2 ? slope : 1.0);
    a0 = a1;
    e0 = e1;
    a1 = a2;
    e1 = err(a1);
  }
  return wrap(a1);
}

RamseyTrace ramsey_phase_probe(const CphaseParams& p, double chi, int alice, const std::vector<double>& phases,
                               const NoiseParams& noise) {
  if (alice != 0 && alice != 1) throw std::invalid_argument("alice must be 0 or 1");
  const ModeLayout l{3, 3, 2};
  const ModeOperators ops = build_mode_operators(l);
  const DriveSchedule s = cphase_schedule({chi, AncillaPair::GE, 0.5}, p);
  Vec psi = (basis_state(l, alice, 0).amp + basis_state(l, alice, 1).amp) / std::sqrt(2.0);
  const MixedState out = propagate(s, MixedState{l, psi * psi.adjoint()}, collapse_operators(noise, ops));
  const cplx coh = out.rho(l.index(alice, 0, 0), l.index(alice, 1, 0));  // <0|rho|1> for Bob, ancilla g
  RamseyTrace t;
  cplx acc = 0;
  for (double ph : phases) {
    // Projection on (|0> + e^{i ph}|1>)/sqrt2 of Bob, with Alice and ancilla fixed.
    const double sig = 0.5 * (out.rho(l.index(alice, 0, 0), l.index(alice, 0, 0)).real() +
                              out.rho(l.index(alice, 1, 0), l.index(alice, 1, 0)).real()) +
                       (std::polar(1.0, ph) * coh).real();
    t.analysis_phase.push_back(ph);
    t.signal.push_back(sig);
    acc += sig * std::polar(1.0, -ph);
  }
  // signal = c + |coh| cos(ph + arg coh); the offset is arg coh, read off the first Fourier coefficient.
  t.fitted_offset = wrap(std::arg(acc));
  return t;
}

std::uint64_t CounterRng::next() {
  // splitmix64 finalizer over (seed, counter, draw index)
  std::uint64_t z = seed_ ^ (counter_ * 0x9E3779B97F4A7C15ULL) ^ ((k_++ + 1) * 0xD1B54A32D192ED03ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform() { return double(next() >> 11) * 0x1.0p-53; }

GateErrorSample sample_gate_error_channel(double p, double r_e, double p_fn, GateKind gate, CounterRng& rng) {
  for (double x : {p, r_e, p_fn})
    if (!(x >= 0 && x <= 1)) throw std::invalid_argument("probabilities must lie in [0,1]");
  GateErrorSample s;
  s.gate = gate;
  const double u = rng.uniform();
  if (u < p * r_e) {
    const int leaked = rng.uniform() < 0.5 ? 0 : 1;
    const int other = 1 - leaked;
    s.erased[leaked] = true;
    const bool flip = rng.uniform() < 0.5;
    Pauli kind = Pauli::Z;
    if (gate == GateKind::CX && leaked == 0) kind = Pauli::X;  // leaked control: target I/X
    s.pauli[other] = flip ? kind : Pauli::I;
    s.missed = rng.uniform() < p_fn;
  } else if (u < p) {
    const auto k = std::uint64_t(rng.uniform() * 16.0) & 15u;
    s.pauli = {Pauli(k >> 2), Pauli(k & 3u)};
  }
  return s;
}

ReadoutDephasing readout_induced_dephasing(double nbar, double kappa, double chi_cr, double duration) {
  if (nbar < 0 || kappa < 0 || duration < 0) throw std::invalid_argument("inputs must be nonnegative");
  ReadoutDephasing r;
  const double den = kappa * kappa + chi_cr * chi_cr;
  r.gamma_phi = den > 0 ? nbar * kappa * chi_cr * chi_cr / den : 0.0;
  r.p_pauli = 0.5 * r.gamma_phi * duration;
  return r;
}

double cross_chi_estimate(double chi_tr, double chi_ct, double alpha) {
  if (alpha == 0) throw std::invalid_argument("anharmonicity must be nonzero");
  return chi_tr * chi_ct / alpha;
}

}  // namespace dualrail
