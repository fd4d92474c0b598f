#include "dualrail/evolver.hpp"

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace dualrail {

namespace odeint = boost::numeric::odeint;

double tphi_from_t2r(double t1, double t2r) {
  const double inv = 1.0 / t2r - 0.5 / t1;
  if (inv <= 0) return kDisabled;
  return 1.0 / inv;
}

NoiseParams NoiseParams::none() {
  NoiseParams n;
  n.t1_a = n.t1_b = n.t1_ge = n.tphi_ge = kDisabled;
  n.t1_fe = n.tphi_gf = kDisabled;
  return n;
}

NoiseParams NoiseParams::transmon_only() const {
  NoiseParams n = *this;
  n.t1_a = n.t1_b = kDisabled;
  n.heating = false;
  return n;
}

NoiseParams NoiseParams::cavity_only() const {
  NoiseParams n = *this;
  n.t1_ge = n.tphi_ge = n.t1_fe = n.tphi_gf = kDisabled;
  return n;
}

void NoiseParams::validate() const {
  for (double t : {t1_a, t1_b, t1_ge, tphi_ge})
    if (!(t > 0)) throw std::invalid_argument("lifetimes must be positive (infinite disables)");
  if (t1_fe < 0 || tphi_gf < 0) throw std::invalid_argument("lifetimes must be positive");
  for (double n : {nth_a, nth_b})
    if (n < 0 || n >= 1) throw std::invalid_argument("thermal population must be in [0,1)");
}

CollapseSet collapse_operators(const NoiseParams& nz, const ModeOperators& ops) {
  nz.validate();
  CollapseSet c;
  auto add = [&](const Mat& op, double lifetime, double scale, const char* name) {
    if (std::isfinite(lifetime) && lifetime > 0) c.push_back({op, scale / lifetime, name});
  };
  add(ops.a, nz.t1_a, 1.0, "alice_decay");
  add(ops.b, nz.t1_b, 1.0, "bob_decay");
  if (nz.heating) {
    if (nz.nth_a > 0) add(ops.a.adjoint(), nz.t1_a, nz.nth_a, "alice_heating");
    if (nz.nth_b > 0) add(ops.b.adjoint(), nz.t1_b, nz.nth_b, "bob_heating");
  }
  add(ops.sigma_ge, nz.t1_ge, 1.0, "ancilla_decay_ge");
  if (ops.layout.dim_q == 3) {
    add(ops.sigma_ef, nz.resolved_t1_fe(), 1.0, "ancilla_decay_ef");
    if (std::isfinite(nz.tphi_ge)) {
      // diag(0, 1, k): g-e coherence decays at 1/tphi_ge, g-f at k^2/tphi_ge
      const double k = std::isfinite(nz.resolved_tphi_gf()) ? std::sqrt(nz.tphi_ge / nz.resolved_tphi_gf()) : 1.0;
      add(ops.proj_e + k * ops.proj_f, nz.tphi_ge, 2.0, "ancilla_dephasing");
    }
  } else {
    add(ops.proj_e, nz.tphi_ge, 2.0, "ancilla_dephasing");
  }
  return c;
}

namespace {

using State = std::vector<cplx>;

struct DriveTerms {
  HamiltonianParts parts;
  const DriveSchedule* sched;
  Mat H(double t) const {
    Mat h = parts.h_static;
    const double g = sched->g_bs(t);
    if (g != 0.0) h += g * parts.h_bs;
    for (const auto& p : sched->pulses) {
      const double f = p.envelope(t);
      if (f == 0.0) continue;
      const cplx c = f * std::polar(1.0, p.detuning() * t + p.phase());
      h += c * parts.s_drive + std::conj(c) * parts.s_drive.adjoint();
    }
    return h;
  }
};

// Integrates between breakpoints and sample times; rotations are applied at
// their scheduled time before any sample taken at that time.
template <class Rhs, class OnRotation, class OnSample>
void run_segments(const DriveSchedule& s, State& x, Rhs rhs, const std::vector<double>& samples,
                  const EvolveOptions& opt, OnRotation on_rot, OnSample on_sample) {
  std::vector<double> stops = s.breakpoints();
  for (double t : samples) {
    if (t < -1e-12 || t > s.total_duration + 1e-12) throw std::out_of_range("sample outside schedule");
    stops.push_back(std::clamp(t, 0.0, s.total_duration));
  }
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end(), [](double a, double b) { return b - a < 1e-12; }),
              stops.end());
  std::vector<Rotation> rots = s.rotations;
  std::sort(rots.begin(), rots.end(), [](auto& a, auto& b) { return a.time < b.time; });
  std::vector<double> samp = samples;
  std::sort(samp.begin(), samp.end());
  size_t ri = 0, si = 0;
  auto settle = [&](double t) {
    while (ri < rots.size() && rots[ri].time <= t + 1e-12) on_rot(rots[ri++], x);
    while (si < samp.size() && samp[si] <= t + 1e-12) on_sample(samp[si++], x);
  };
  odeint::runge_kutta_dopri5<State> base;
  const double max_dt = opt.max_step > 0 ? opt.max_step : s.total_duration + 1.0;
  double t = 0.0;
  settle(t);
  for (double t1 : stops) {
    if (t1 <= t + 1e-12) continue;
    auto stepper = odeint::make_controlled(opt.atol, opt.rtol, max_dt, base);
    const double dt0 = std::min(1e-3, 0.1 * (t1 - t));
    odeint::integrate_adaptive(stepper, rhs, x, t, t1, dt0);
    t = t1;
    settle(t);
  }
  settle(s.total_duration + 1.0);
}

Eigen::Map<const Vec> cvec(const State& x) { return {x.data(), Eigen::Index(x.size())}; }
Eigen::Map<Vec> mvec(State& x) { return {x.data(), Eigen::Index(x.size())}; }

State to_state(const Mat& m) { return State(m.data(), m.data() + m.size()); }

void check_layout(const DriveSchedule& s, const ModeLayout& l) {
  l.validate();
  if (s.coupling.pair == AncillaPair::GF && l.dim_q != 3)
    throw std::invalid_argument("g-f schedule needs dim_q = 3");
  s.validate();
}

// Closed-system evolution of a d x k block of column vectors.
Mat evolve_columns(const DriveSchedule& s, const ModeOperators& ops, const Mat& cols, const std::vector<double>& samples,
                   const EvolveOptions& opt, const std::function<void(double, const Mat&)>& on_sample) {
  const Eigen::Index d = cols.rows(), k = cols.cols();
  DriveTerms terms{hamiltonian_parts(s, ops), &s};
  State x = to_state(cols);
  auto rhs = [&](const State& y, State& dy, double t) {
    Eigen::Map<const Mat> Y(y.data(), d, k);
    Eigen::Map<Mat> DY(dy.data(), d, k);
    DY.noalias() = cplx(0, -1) * (terms.H(t) * Y);
  };
  auto on_rot = [&](const Rotation& r, State& y) {
    Eigen::Map<Mat> Y(y.data(), d, k);
    Y = rotation_unitary(r, s.coupling.pair, ops) * Y;
  };
  auto on_samp = [&](double t, State& y) { on_sample(t, Eigen::Map<const Mat>(y.data(), d, k)); };
  run_segments(s, x, rhs, samples, opt, on_rot, on_samp);
  return Eigen::Map<const Mat>(x.data(), d, k);
}

Mat evolve_density(const DriveSchedule& s, const ModeOperators& ops, const Mat& rho0, const CollapseSet& c,
                   const std::vector<double>& samples, const EvolveOptions& opt,
                   const std::function<void(double, const Mat&)>& on_sample) {
  const Eigen::Index d = rho0.rows();
  DriveTerms terms{hamiltonian_parts(s, ops), &s};
  std::vector<Mat> L, Ld;
  Mat damp = Mat::Zero(d, d);
  for (const auto& ch : c) {
    L.push_back(std::sqrt(ch.rate) * ch.op);
    Ld.push_back(L.back().adjoint());
    damp += Ld.back() * L.back();
  }
  const Mat half_damp = cplx(0, -0.5) * damp;
  Mat tmp(d, d);
  State x = to_state(rho0);
  auto rhs = [&](const State& y, State& dy, double t) {
    Eigen::Map<const Mat> R(y.data(), d, d);
    Eigen::Map<Mat> D(dy.data(), d, d);
    const Mat Heff = terms.H(t) + half_damp;
    tmp.noalias() = cplx(0, -1) * (Heff * R);
    D = tmp + tmp.adjoint();
    for (size_t i = 0; i < L.size(); ++i) {
      tmp.noalias() = L[i] * R;
      D.noalias() += tmp * Ld[i];
    }
  };
  // The adjoint trick above assumes a Hermitian R; general operators use the explicit form.
  auto rhs_general = [&](const State& y, State& dy, double t) {
    Eigen::Map<const Mat> R(y.data(), d, d);
    Eigen::Map<Mat> D(dy.data(), d, d);
    const Mat Heff = terms.H(t) + half_damp;
    D.noalias() = cplx(0, -1) * (Heff * R);
    D.noalias() += cplx(0, 1) * (R * Heff.adjoint());
    for (size_t i = 0; i < L.size(); ++i) {
      tmp.noalias() = L[i] * R;
      D.noalias() += tmp * Ld[i];
    }
  };
  auto on_rot = [&](const Rotation& r, State& y) {
    Eigen::Map<Mat> R(y.data(), d, d);
    const Mat U = rotation_unitary(r, s.coupling.pair, ops);
    R = U * R * U.adjoint();
  };
  auto on_samp = [&](double t, State& y) { on_sample(t, Eigen::Map<const Mat>(y.data(), d, d)); };
  const bool hermitian = is_hermitian(rho0, 1e-14);
  if (hermitian)
    run_segments(s, x, rhs, samples, opt, on_rot, on_samp);
  else
    run_segments(s, x, rhs_general, samples, opt, on_rot, on_samp);
  return Eigen::Map<const Mat>(x.data(), d, d);
}

}  // namespace

PureTrajectory evolve_schrodinger(const DriveSchedule& s, const PureState& psi0, const std::vector<double>& samples,
                                  const EvolveOptions& opt) {
  check_layout(s, psi0.layout);
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw std::invalid_argument("initial state not normalized");
  const ModeOperators ops = build_mode_operators(psi0.layout);
  PureTrajectory tr;
  evolve_columns(s, ops, psi0.amp, samples, opt, [&](double t, const Mat& y) {
    PureState st{psi0.layout, y.col(0)};
    if (opt.check_invariants && std::abs(st.norm() - 1.0) > 1e-8)
      throw std::runtime_error("Schrodinger norm drift exceeds 1e-8");
    if (truncated_manifold_population(st) > kTruncationThreshold) tr.truncation = true;
    tr.times.push_back(t);
    tr.states.push_back(std::move(st));
  });
  return tr;
}

MixedTrajectory evolve_lindblad(const DriveSchedule& s, const MixedState& rho0, const CollapseSet& c,
                                const std::vector<double>& samples, const EvolveOptions& opt) {
  check_layout(s, rho0.layout);
  if (opt.check_invariants) rho0.check();
  const ModeOperators ops = build_mode_operators(rho0.layout);
  MixedTrajectory tr;
  evolve_density(s, ops, rho0.rho, c, samples, opt, [&](double t, const Mat& r) {
    MixedState st{rho0.layout, r};
    if (opt.check_invariants) st.check();
    if (truncated_manifold_population(st) > kTruncationThreshold) tr.truncation = true;
    tr.times.push_back(t);
    tr.states.push_back(std::move(st));
  });
  return tr;
}

PureState propagate(const DriveSchedule& s, const PureState& psi0, const EvolveOptions& opt) {
  auto tr = evolve_schrodinger(s, psi0, {s.total_duration}, opt);
  return tr.states.back();
}

MixedState propagate(const DriveSchedule& s, const MixedState& rho0, const CollapseSet& c, const EvolveOptions& opt) {
  auto tr = evolve_lindblad(s, rho0, c, {s.total_duration}, opt);
  return tr.states.back();
}

Mat schedule_unitary(const DriveSchedule& s, const ModeLayout& layout, const EvolveOptions& opt) {
  check_layout(s, layout);
  const ModeOperators ops = build_mode_operators(layout);
  return evolve_columns(s, ops, ops.id, {}, opt, [](double, const Mat&) {});
}

Mat propagate_operator(const DriveSchedule& s, const ModeLayout& layout, const Mat& x0, const CollapseSet& c,
                       const EvolveOptions& opt) {
  check_layout(s, layout);
  const ModeOperators ops = build_mode_operators(layout);
  return evolve_density(s, ops, x0, c, {}, opt, [](double, const Mat&) {});
}

Mat unitary_from_hamiltonian(const Mat& H, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (H + H.adjoint()));
  Vec ph = (es.eigenvalues() * (-t)).unaryExpr([](double x) { return std::polar(1.0, x); });
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Mat drive_frame_hamiltonian(const DriveSchedule& s, const ModeOperators& ops) {
  const auto& bs = s.beamsplitter;
  const bool bs_const = bs.g_bs == 0.0 || (bs.ramp == 0.0 && s.bs_start <= 1e-12 &&
                                            s.bs_start + bs.duration() >= s.total_duration - 1e-12);
  if (!bs_const || !s.rotations.empty() || s.pulses.size() > 1)
    throw std::invalid_argument("schedule is not piecewise constant over its span");
  HamiltonianParts h = hamiltonian_parts(s, ops);
  Mat H = h.h_static + bs.g_bs * h.h_bs;
  if (s.pulses.empty()) return H;
  const auto& p = s.pulses.front();
  const auto* sq = std::get_if<SquarePulse>(&p.shape);
  if (!sq || sq->ramp != 0.0 || p.start > 1e-12 || sq->duration < s.total_duration - 1e-12)
    throw std::invalid_argument("drive frame needs one unramped square pulse over the schedule");
  const Mat P = h.s_drive.adjoint() * h.s_drive;  // projector on the driven level
  const cplx c = sq->amplitude * std::polar(1.0, sq->phase);
  H += -sq->detuning * P + c * h.s_drive + std::conj(c) * h.s_drive.adjoint();
  return H;
}

namespace {
template <class Traj>
void write_csv(std::ostream& os, const Traj& traj, const std::vector<std::pair<std::string, Mat>>& obs) {
  os << "time_us";
  for (const auto& o : obs) os << ',' << o.first;
  os << '\n';
  os.precision(12);
  for (size_t i = 0; i < traj.times.size(); ++i) {
    os << traj.times[i];
    for (const auto& o : obs) os << ',' << expectation(o.second, traj.states[i]).real();
    os << '\n';
  }
}
}  // namespace

void write_trajectory_csv(std::ostream& os, const MixedTrajectory& traj,
                          const std::vector<std::pair<std::string, Mat>>& obs) {
  write_csv(os, traj, obs);
}
void write_trajectory_csv(std::ostream& os, const PureTrajectory& traj,
                          const std::vector<std::pair<std::string, Mat>>& obs) {
  write_csv(os, traj, obs);
}

}  // namespace dualrail
