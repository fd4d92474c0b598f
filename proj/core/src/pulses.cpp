#include "dualrail/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dualrail {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

void require_in(double t, double T) {
  if (t < -1e-12 || t > T + 1e-12) throw std::out_of_range("time outside pulse");
}
}  // namespace

void SquarePulse::validate() const {
  if (duration < 0 || ramp < 0 || 2 * ramp > duration + 1e-15)
    throw std::invalid_argument("square pulse needs 0 <= 2 t_r <= T_p");
}

void ChoppedGaussian::validate() const {
  if (sigma <= 0 || n_chop <= 0) throw std::invalid_argument("chopped Gaussian needs sigma, n_chop > 0");
}

double square_envelope(double t, const SquarePulse& p) {
  require_in(t, p.duration);
  const double A = p.amplitude, tr = p.ramp, T = p.duration;
  if (tr <= 0) return A;
  if (t < tr) return 0.5 * A * (1 - std::cos(kPi * t / tr));
  if (t <= T - tr) return A;
  return 0.5 * A * (1 + std::cos(kPi * (t - (T - tr)) / tr));
}

double gaussian_envelope(double t, const ChoppedGaussian& p) {
  require_in(t, p.duration());
  const double x = (t - p.n_chop * p.sigma) / p.sigma;
  return p.amplitude * (std::exp(-0.5 * x * x) - std::exp(-0.5 * p.n_chop * p.n_chop));
}

double square_area(const SquarePulse& p) { return p.amplitude * (p.duration - p.ramp); }

double gaussian_area(const ChoppedGaussian& p) {
  const double n = p.n_chop, s = p.sigma;
  return p.amplitude * (s * std::sqrt(2 * kPi) * std::erf(n / std::sqrt(2.0)) -
                        2 * n * s * std::exp(-0.5 * n * n));
}

double BeamsplitterDrive::amplitude(double t) const {
  if (t < 0 || t > duration()) return 0.0;
  if (ramp <= 0) return g_bs;
  if (t < ramp) return 0.5 * g_bs * (1 - std::cos(kPi * t / ramp));
  if (t <= ramp + hold) return g_bs;
  return 0.5 * g_bs * (1 + std::cos(kPi * (t - ramp - hold) / ramp));
}

void BeamsplitterDrive::validate() const {
  if (g_bs < 0) throw std::invalid_argument("g_bs must be >= 0 (absorb sign into phi)");
  if (ramp < 0 || hold < 0) throw std::invalid_argument("beamsplitter ramp/hold must be >= 0");
}

double TransmonPulse::duration() const {
  return std::visit(
      [](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, SquarePulse>)
          return p.duration;
        else
          return p.duration();
      },
      shape);
}

double TransmonPulse::envelope(double t_abs) const {
  const double t = t_abs - start;
  if (t < 0 || t > duration()) return 0.0;
  return std::visit(
      [t](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, SquarePulse>)
          return square_envelope(t, p);
        else
          return gaussian_envelope(t, p);
      },
      shape);
}

double TransmonPulse::detuning() const {
  return std::visit([](const auto& p) { return p.detuning; }, shape);
}

double TransmonPulse::phase() const {
  return std::visit([](const auto& p) { return p.phase; }, shape);
}

double DriveSchedule::g_bs(double t) const { return beamsplitter.amplitude(t - bs_start); }

std::vector<double> DriveSchedule::breakpoints() const {
  std::vector<double> b{0.0, total_duration};
  const auto& bs = beamsplitter;
  if (bs.g_bs != 0) {
    b.push_back(bs_start);
    b.push_back(bs_start + bs.ramp);
    b.push_back(bs_start + bs.ramp + bs.hold);
    b.push_back(bs_start + bs.duration());
  }
  for (const auto& p : pulses) {
    b.push_back(p.start);
    b.push_back(p.start + p.duration());
    if (auto* sq = std::get_if<SquarePulse>(&p.shape)) {
      b.push_back(p.start + sq->ramp);
      b.push_back(p.start + sq->duration - sq->ramp);
    }
  }
  for (const auto& r : rotations) b.push_back(r.time);
  std::vector<double> out;
  for (double x : b)
    if (x >= 0 && x <= total_duration) out.push_back(x);
  std::sort(out.begin(), out.end());
  std::vector<double> uniq;
  for (double x : out)
    if (uniq.empty() || x - uniq.back() > 1e-12) uniq.push_back(x);
  if (uniq.back() < total_duration) uniq.back() = total_duration;
  return uniq;
}

void DriveSchedule::validate() const {
  beamsplitter.validate();
  if (total_duration < 0) throw std::invalid_argument("negative schedule duration");
  for (const auto& p : pulses) {
    std::visit([](const auto& s) { s.validate(); }, p.shape);
    if (p.start < -1e-12 || p.start + p.duration() > total_duration + 1e-9)
      throw std::invalid_argument("transmon pulse outside schedule");
  }
  for (const auto& r : rotations)
    if (r.time < -1e-12 || r.time > total_duration + 1e-12)
      throw std::invalid_argument("rotation outside schedule");
}

ErasureCheckGuess erasure_check_guess(double chi, int n, int m) {
  if (chi == 0) throw std::invalid_argument("chi must be nonzero");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const double X = std::abs(chi);
  const double q = 4.0 * n * n - 1.0;
  const double g2 = double(m) * m / q - 0.25;
  if (m <= n || g2 < 0) throw std::invalid_argument("m too small: imaginary g_bs");
  const double T = kTwoPi * std::sqrt(q) / X;
  return {T, X * std::sqrt(g2), kPi / (2 * T), 0.0, 0.5 * chi};
}

DriveSchedule erasure_check_schedule(const Coupling& c, const SquareCheckParams& p) {
  SquarePulse sq{p.amplitude, p.T_p, p.t_r, p.detuning, 0.0};
  sq.validate();
  const double hold = p.T_p - p.t_r - p.t_ramp;
  if (hold < 0) throw std::invalid_argument("pulse too short for the ramps");
  // Ramp centers coincide (plus the optional offset).
  double tx = 0.0;
  double bs = 0.5 * p.t_r - 0.5 * p.t_ramp + p.alignment;
  const double shift = -std::min(tx, bs);
  tx += shift;
  bs += shift;
  DriveSchedule s;
  s.coupling = c;
  s.beamsplitter = {p.g_bs, p.delta, 0.0, p.t_ramp, hold};
  s.bs_start = bs;
  s.pulses.push_back({sq, tx});
  s.alignment = p.alignment;
  s.total_duration = std::max(tx + p.T_p, bs + s.beamsplitter.duration());
  s.validate();
  return s;
}

DriveSchedule idle_schedule(const Coupling& c, double duration, double delta) {
  DriveSchedule s;
  s.coupling = c;
  s.beamsplitter = {0.0, delta, 0.0, 0.0, duration};
  s.total_duration = duration;
  return s;
}

DriveSchedule joint_parity_schedule(double chi, AncillaPair variant, const ParityOptions& opt,
                                    double chi_e_fraction) {
  if (chi == 0) throw std::invalid_argument("chi must be nonzero");
  const double X = std::abs(chi);
  const double hold = kTwoPi / X + opt.extra_hold;
  DriveSchedule s;
  s.coupling = {chi, variant, chi_e_fraction};
  const double g = 0.5 * std::sqrt(3.0) * X;
  if (opt.idealized) {
    s.beamsplitter = {g, 0.5 * chi, 0.0, 0.0, hold};
    s.rotations = {{0.0, 0.5 * kPi, 0.0}, {hold, 0.5 * kPi, 0.0}};
    s.total_duration = hold;
  } else {
    const double w = opt.pulse_width;
    SquarePulse half{0.25 * kPi / w, w, 0.0, 0.0, 0.0};
    s.beamsplitter = {g, 0.5 * chi, 0.0, 0.0, hold};
    s.bs_start = 0.5 * w;
    s.pulses = {{half, 0.0}, {half, hold}};
    s.total_duration = hold + w;
  }
  s.validate();
  return s;
}

DriveSchedule cphase_schedule(const Coupling& c, const CphaseParams& p) {
  ChoppedGaussian g1{p.amplitude, p.sigma, p.n_chop, p.detuning, 0.0};
  ChoppedGaussian g2 = g1;
  g2.phase = p.relative_phase;
  const double T1 = g1.duration();
  DriveSchedule s;
  s.coupling = c;
  s.beamsplitter = {p.g_bs, p.delta, 0.0, 0.0, 2 * T1};
  s.pulses = {{g1, 0.0}, {g2, T1}};
  s.total_duration = 2 * T1;
  s.validate();
  return s;
}

HamiltonianParts hamiltonian_parts(const DriveSchedule& s, const ModeOperators& ops) {
  const auto& c = s.coupling;
  HamiltonianParts h;
  h.h_static = -s.beamsplitter.delta * ops.n_b;
  if (c.pair == AncillaPair::GE) {
    h.h_static += c.chi * ops.n_b * ops.proj_e;
    h.s_drive = ops.sigma_ge;
  } else {
    if (ops.layout.dim_q != 3) throw std::invalid_argument("g-f variant needs dim_q = 3");
    h.h_static += c.chi * ops.n_b * ops.proj_f + c.chi_e_fraction * c.chi * ops.n_b * ops.proj_e;
    h.s_drive = ops.sigma_gf;
  }
  const cplx eph = std::polar(1.0, s.beamsplitter.phi);
  Mat x = eph * ops.a * ops.b.adjoint();
  h.h_bs = 0.5 * (x + x.adjoint());
  return h;
}

Mat assemble_hamiltonian(const DriveSchedule& s, double t, const ModeOperators& ops) {
  if (t < -1e-12 || t > s.total_duration + 1e-12) throw std::out_of_range("time outside schedule");
  HamiltonianParts h = hamiltonian_parts(s, ops);
  Mat H = h.h_static + s.g_bs(t) * h.h_bs;
  for (const auto& p : s.pulses) {
    const double f = p.envelope(t);
    if (f == 0.0) continue;
    const cplx c = f * std::polar(1.0, p.detuning() * t + p.phase());
    H += c * h.s_drive + std::conj(c) * h.s_drive.adjoint();
  }
  return H;
}

Mat rotation_unitary(const Rotation& r, AncillaPair pair, const ModeOperators& ops) {
  const Mat& S = pair == AncillaPair::GE ? ops.sigma_ge : ops.sigma_gf;
  // Generator squares to the projector P onto the pair, so the exponential is closed form.
  const cplx e = std::polar(1.0, r.phase);
  Mat G = e * S + std::conj(e) * S.adjoint();
  Mat P = G * G;
  const double a = 0.5 * r.angle;
  return ops.id - P + std::cos(a) * P - cplx(0, std::sin(a)) * G;
}

}  // namespace dualrail
