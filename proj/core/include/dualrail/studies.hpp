#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "dualrail/evolver.hpp"
#include "dualrail/protocols.hpp"
#include "dualrail/spin_oracle.hpp"

namespace dualrail {

struct SystemParams {
  double chi_bob = -kTwoPi * 1.066;
  double chi_alice = -kTwoPi * 0.7773;
  double kappa_readout = kTwoPi * 1.77;
  double alpha = -kTwoPi * 185.0;
  double chi_tr = -kTwoPi * 0.86;
  double chi_ct = -kTwoPi * 1.066;
  double chi_cr = kTwoPi * 0.0025;  // readout resonator to Bob
  double nbar_readout = 10.0;
  double g_bs_max = kTwoPi * 2.05;

  // Clips |g| to g_bs_max, appending a warning when it does.
  double clip_g(double g, std::vector<std::string>* warnings = nullptr) const;
  void validate() const;
};

// Worker count for --jobs: nonpositive means hardware concurrency.
unsigned resolve_jobs(int jobs);

// Evaluates f(0..n-1) on up to `jobs` threads; results come back in index order.
template <class F>
auto parallel_map(std::size_t n, int jobs, F f) -> std::vector<decltype(f(std::size_t{0}))> {
  using R = decltype(f(std::size_t{0}));
  std::vector<R> out(n);
  const unsigned w = std::min<std::size_t>(resolve_jobs(jobs), std::max<std::size_t>(n, 1));
  std::exception_ptr err;
  std::mutex m;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(m);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < w; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return out;
}

std::vector<double> linspace(double a, double b, int n);

// ---- spectroscopy -------------------------------------------------------

struct ProbeParams {
  double amplitude = 0.0;  // rad/us
  double duration = 0.0;   // us
  // Half width at half maximum of the square-pulse line (rad/us).
  double half_linewidth() const;
};

ProbeParams default_probe(double chi);

enum class SpectroInput { Alice, Bob, Mixed };

struct SpectroscopyConfig {
  int N = 1;
  double chi = -kTwoPi * 1.066;
  double delta = 0.0;  // beamsplitter detuning
  std::vector<double> g_grid;
  std::vector<double> dw_grid;
  ProbeParams probe;
  SpectroInput input = SpectroInput::Mixed;
  double ridge_threshold = 0.02;  // of the column maximum
  double sidelobe_ratio = 0.2;
  int jobs = 0;
};

struct Ridge {
  double g_bs = 0.0;
  std::vector<double> peaks;    // rad/us
  std::vector<double> heights;  // P(e)
  std::vector<double> deviation;  // distance to the nearest oracle line
};

struct SpectroscopyMap {
  std::vector<std::vector<double>> pe;      // [g][dw]
  std::vector<std::vector<double>> oracle;  // distinct predicted lines per g
  std::vector<Ridge> ridges;
  double max_deviation = 0.0;
  double tolerance = 0.0;  // half linewidth
  std::vector<std::string> warnings;
};

double probe_response(const SpectroscopyConfig& c, double g_bs, double dw);
std::vector<double> oracle_lines(int N, double g_bs, double delta, double chi);
Ridge extract_ridge(const SpectroscopyConfig& c, double g_bs);
SpectroscopyMap study_spectroscopy_map(const SpectroscopyConfig& c);
// Same map at delta = chi with the general-frequency overlay.
SpectroscopyMap study_nonsymmetric_spectrum(SpectroscopyConfig c);

// ---- power Rabi ---------------------------------------------------------

struct SinusoidFit {
  double omega = 0.0;  // angular frequency in units of 1/x
  double amplitude = 0.0;
  double offset = 0.0;
  double phase = 0.0;
  double residual_norm = 0.0;
};

// y = offset + amplitude cos(omega x + phase), seeded by an FFT.
SinusoidFit fit_sinusoid(const std::vector<double>& x, const std::vector<double>& y);

struct PowerRabiConfig {
  double chi = -kTwoPi * 1.066;
  std::vector<double> g_grid;
  std::vector<int> delta_m = {0, -1};
  double duration = 0.0;        // 0: 40 * 2 pi / |chi|
  double max_amplitude = 0.0;   // 0: |chi| / 40
  int amplitude_points = 61;
  double min_contrast = 0.05;
  int jobs = 0;
};

struct PowerRabiPoint {
  double g_bs = 0.0;
  int delta_m = 0;
  double drive_freq = 0.0;  // rad/us
  double rate = 0.0;        // fitted oscillation rate per unit amplitude
  double normalized = 0.0;
  double predicted = 0.0;
  bool null_point = false;
};

struct PowerRabiResult {
  std::vector<PowerRabiPoint> points;
  double anchor_rate = 0.0;  // g = 0, delta m = -1
};

PowerRabiResult study_power_rabi(const PowerRabiConfig& c);

// ---- error scaling ------------------------------------------------------

enum class ScalingChannel { Dephasing, Decay };

struct ScalingConfig {
  double chi = -kTwoPi * 1.0;
  std::vector<int> n = {1, 2, 3, 4, 5};
  std::vector<int> m_factors = {3, 4, 5};
  std::vector<double> rates = {0.0, 1e-4, 2e-4, 3e-4, 4e-4};  // in units of |chi|
  bool optimize = true;
  int fit_last = 3;
  int jobs = 0;
};

struct ScalingPoint {
  int n = 0, m = 0;
  double g_bs = 0.0, T_p = 0.0;
  double coherent_cost = 0.0;
  double erasure_slope = 0.0;  // d p / d(rate/|chi|) at zero rate
  double pauli_slope = 0.0;
};

struct ScalingResult {
  ScalingChannel channel;
  std::vector<ScalingPoint> points;
  double erasure_vs_T = 0.0;
  std::vector<double> pauli_vs_g_per_n;  // free exponent for each n
  double pauli_vs_g = 0.0;               // mean over the fitted n
  double pauli_vs_T = 0.0;
  double fixed_g_exponent = 0.0;
};

// Local (g, T) refinement of the analytic guess with A = pi / (2 T).
ScalingPoint optimize_scaling_point(double chi, int n, int m, bool optimize);
ScalingResult study_error_scaling(const ScalingConfig& c, ScalingChannel ch);

// ---- scheme comparison and projected rates ----------------------------

struct SchemeRow {
  std::string scheme;  // joint-photon-number | joint-parity
  std::string levels;  // g-e | g-f
  double p_erasure = 0.0;
  double p_pauli = 0.0;
  double reference_erasure = 0.0;
  double reference_pauli = 0.0;
};

struct SchemeConfig {
  double chi = -kTwoPi * 1.066;
  double g_bs = kTwoPi * 1.04;
  double T_p = 1.699;
  NoiseParams noise{};  // cavity channels are dropped
  int jobs = 0;
};

std::vector<SchemeRow> study_scheme_comparison(const SchemeConfig& c);

struct ProjectionConfig {
  double chi = -kTwoPi * 1.066;
  double g_bs = kTwoPi * 1.038;
  double T_p = 1.699;
  double tau_ro = 1.0;
  NoiseParams noise = projected_noise();
  SystemParams system{};
  double readout_duration = 1.0;
  static NoiseParams projected_noise();
};

struct ProjectionResult {
  double p_intrinsic = 0.0;
  double p_pauli_induced = 0.0;
  double p_fp = 0.0;
  ReadoutDephasing readout{};
  double chi_cr_estimate = 0.0;  // chi_tr chi_ct / alpha
};

ProjectionResult study_performance_projection(const ProjectionConfig& c);

// ---- misc helpers used by the CLI and tests -----------------------------

DriveSchedule table_two_check(double chi, AncillaPair pair, double g_bs, double T_p);

// Chopped-Gaussian joint-SNAP operating point (amplitude from the pulse area).
CphaseParams cphase_operating_point(double chi);

struct ChannelStats {
  std::uint64_t draws = 0;
  double erasure_freq = 0.0;
  double missed_freq = 0.0;
  double pauli_freq = 0.0;
  double erasure_expected = 0.0;
  double missed_expected = 0.0;
  double erasure_sigma = 0.0;
  double missed_sigma = 0.0;
};

ChannelStats sample_channel_stats(double p, double r_e, double p_fn, GateKind gate, std::uint64_t draws,
                                  std::uint64_t seed, int jobs = 0);

}  // namespace dualrail
