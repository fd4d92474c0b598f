#pragma once

#include "dualrail/evolver.hpp"
#include "dualrail/hilbert.hpp"
#include "dualrail/pulses.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace dualrail {

enum class Cardinal { PlusX, MinusX, PlusY, MinusY, PlusZ, MinusZ };
inline constexpr std::array<Cardinal, 6> kCardinals = {Cardinal::PlusX, Cardinal::MinusX, Cardinal::PlusY,
                                                       Cardinal::MinusY, Cardinal::PlusZ, Cardinal::MinusZ};
std::string to_string(Cardinal c);
Cardinal cardinal_from_string(const std::string& s);

// |0_L> = |1,0>, |1_L> = |0,1>; ancilla in g.
PureState prepare_cardinal(Cardinal c, const ModeLayout& layout);

// Smallest layout that holds the single-photon manifold exactly.
ModeLayout dual_rail_layout(AncillaPair pair);

// Linear map on density matrices, column-stacked: vec(out) = S vec(in).
struct Channel {
  int dim = 0;
  Mat S;
  Mat apply(const Mat& rho) const;
  Channel then(const Channel& next) const;  // next after this
};

Channel identity_channel(int dim);
Channel unitary_channel(const Mat& U);
Channel schedule_channel(const DriveSchedule& s, const ModeLayout& layout, const CollapseSet& c,
                         const EvolveOptions& opt = {});

// Ancilla projectors and the ideal conditional reset.
Mat ancilla_ground_projector(const ModeLayout& l);
Mat project_ground(const Mat& rho, const ModeLayout& l);
Mat reset_flagged(const Mat& rho, const ModeLayout& l);

struct ReadoutModel {
  double tau_ro = 1.0;                  // us
  double pre_projection_fraction = 0.5; // share of tau_ro spent before the projection
  bool add_readout_dephasing = false;   // analytic phase flip on Bob's cavity
  double readout_pauli = 0.0;
};

struct CheckOutcome {
  double p_flag = 0.0;
  MixedState post_g;  // normalized (zero matrix if the branch is empty)
  MixedState post_e;  // normalized, ancilla reset to g
  Mat unnorm_g;
  Mat unnorm_e;
  bool truncation = false;
};

CheckOutcome run_erasure_check(const MixedState& rho, const DriveSchedule& check, const NoiseParams& noise,
                               const ReadoutModel& readout);

struct ErrorBudget {
  double p_FN = 0.0;
  double p_FP = 0.0;
  double p_erasure = 0.0;
  double p_intrinsic = 0.0;
  double p_Pauli = 0.0;
  std::vector<double> fidelities;  // per cardinal state
  int n_checks = 0;
};

double pauli_rate_from_fidelity(double mean_fidelity);

// Single application of a check schedule on the six cardinal states.
struct CheckMetrics {
  double p_flag = 0.0;     // mean P(ancilla not in g)
  double p00 = 0.0;        // mean P(cavities in |0,0>)
  double p_pauli = 0.0;    // 3/2 (1 - mean post-selected fidelity)
  std::array<double, 6> fidelity{};
  std::array<double, 6> flag{};
};

struct CheckMetricsOptions {
  double pre_idle = 0.0;           // idle before the pulse, noise on
  bool post_select_logical = false;  // also keep only N = 1 for the fidelity
  EvolveOptions evolve{};
};

CheckMetrics evaluate_check(const DriveSchedule& check, const NoiseParams& noise, const CheckMetricsOptions& opt = {});

double false_negative_rate(const DriveSchedule& check, const NoiseParams& noise, const ReadoutModel& readout);

enum class RepeatMode { Check, Idle };

struct RepeatedCheckConfig {
  int n_max = 20;
  bool echo = true;
  RepeatMode mode = RepeatMode::Check;
  double inter_check_idle = 0.65;  // us, dead time after each readout
  ReadoutModel readout{};
};

struct RepeatedCheckPoint {
  int n = 0;
  double success = 1.0;   // P(all checks pass)
  double fidelity = 1.0;  // post-selected on passes and on N = 1 at the end
  double eol_pass = 1.0;  // P(N = 1 | all passed)
  double p00 = 0.0;       // unconditioned, with reset after flags
};

std::vector<RepeatedCheckPoint> repeated_check_experiment(Cardinal label, const DriveSchedule& check,
                                                          const NoiseParams& noise, const RepeatedCheckConfig& cfg);

// Slopes per check: p_erasure from -ln(success), p_intrinsic from -ln(1 - P00),
// p_Pauli from the linear fit of the per-n Pauli probability over n in [1, n_max].
ErrorBudget repeated_check_budget(const DriveSchedule& check, const NoiseParams& noise, const RepeatedCheckConfig& cfg,
                                  std::vector<std::vector<RepeatedCheckPoint>>* traces = nullptr);

enum class Axis { X, Y, Z };

struct LogicalMeasurement {
  double expectation = 0.0;  // conditioned on passing when post-selecting
  double pass = 0.0;         // probability of finding one photon in total
};

LogicalMeasurement logical_measurement(const MixedState& rho, Axis axis, bool post_select);

struct ParityOutcome {
  double p_g = 0.0;  // odd parity
  double p_e = 0.0;
  double p_f = 0.0;
  AncillaPair variant = AncillaPair::GE;
  // g-f: even parity lands in f, and e is the flag level.
  double p_even() const { return variant == AncillaPair::GE ? p_e : p_f; }
  MixedState final_state;
};

ParityOutcome run_joint_parity_check(const MixedState& rho, AncillaPair variant, const NoiseParams& noise,
                                     const ParityOptions& opt = {}, double chi = -kTwoPi * 1.066);

struct CphaseSummary {
  double conditional_phase = 0.0;      // phi00 - phi01 - phi10 + phi11
  std::array<double, 4> phases{};      // 00, 01, 10, 11 relative to their mean offset
  std::array<double, 4> populations{}; // return probability of each basis state
  double leakage = 0.0;                // mean ancilla population left outside g
};

CphaseSummary cphase_joint_snap(const CphaseParams& p, double chi, const NoiseParams& noise,
                                const CphaseParams* reference = nullptr);

// Relative drive phase that realizes conditional phase theta (secant on the
// calibration curve, which is close to linear with unit slope).
double calibrate_cphase_phase(CphaseParams p, double chi, double theta);

struct RamseyTrace {
  std::vector<double> analysis_phase;
  std::vector<double> signal;  // P(+) of Bob's qubit along the analysis axis
  double fitted_offset = 0.0;
};

RamseyTrace ramsey_phase_probe(const CphaseParams& p, double chi, int alice, const std::vector<double>& phases,
                               const NoiseParams& noise);

enum class GateKind { CX, CZ };
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

struct GateErrorSample {
  std::array<bool, 2> erased{false, false};
  bool missed = false;
  std::array<Pauli, 2> pauli{Pauli::I, Pauli::I};
  GateKind gate = GateKind::CZ;
};

// Counter-based generator: draw k of stream `counter` is a pure function of (seed, counter, k).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t counter) : seed_(seed), counter_(counter) {}
  std::uint64_t next();
  double uniform();

 private:
  std::uint64_t seed_, counter_, k_ = 0;
};

GateErrorSample sample_gate_error_channel(double p, double r_e, double p_fn, GateKind gate, CounterRng& rng);

struct ReadoutDephasing {
  double gamma_phi = 0.0;  // 1/us
  double p_pauli = 0.0;
};

ReadoutDephasing readout_induced_dephasing(double nbar, double kappa, double chi_cr, double duration);
double cross_chi_estimate(double chi_tr, double chi_ct, double alpha);

}  // namespace dualrail
