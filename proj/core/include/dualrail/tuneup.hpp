#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "dualrail/evolver.hpp"
#include "dualrail/pulses.hpp"

namespace dualrail {

// Bob's one-photon population, data[i][j] at freqs[i] (rad/us) and times[j] (us).
struct ChevronData {
  std::vector<double> freqs;
  std::vector<double> times;
  std::vector<std::vector<double>> p1;
};

struct ChevronSimOptions {
  double ramp = 0.0;             // us; times are measured from the end of the ramp
  const NoiseParams* noise = nullptr;
};

ChevronData simulate_chevron(double g_bs, double omega0, const std::vector<double>& times,
                             const std::vector<double>& freqs, const ChevronSimOptions& opt = {});

double chevron_model(double g_bs, double omega0, double A, double c, double phi, double omega, double t);

struct ChevronFitResult {
  double g_bs = 0.0;
  double omega0 = 0.0;
  double A = 1.0;
  double c = 0.0;
  double phi = 0.0;
  double residual_norm = 0.0;
  std::vector<double> std_errors;  // same order as above
  int iterations = 0;
};

class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, ChevronFitResult best) : std::runtime_error(what), best(std::move(best)) {}
  ChevronFitResult best;
};

ChevronFitResult fit_chevron(const ChevronData& data, int max_iter = 500);

// g(x) = sum_k c_k x^k for k = 1..5.
struct AmplitudePolynomial {
  std::vector<double> coeffs;  // c_1 .. c_5
  double residual_rms = 0.0;
  bool monotonic = true;       // over the fitted range
  double operator()(double x) const;
};

AmplitudePolynomial fit_amplitude_polynomial(const std::vector<double>& dac, const std::vector<double>& g_bs);

struct CheckParams {
  double T_p = 0.0;
  double g_bs = 0.0;
  double amplitude = 0.0;
  double detuning = 0.0;  // transmon pulse, delta omega
  double delta = 0.0;     // beamsplitter detuning
  double sigma = 0.0;     // Gaussian runs only
};

struct TuneupResult {
  CheckParams params;
  std::vector<double> cost_trace;  // best cost after each iteration
  int iterations = 0;
  bool converged = false;
  double final_cost() const { return cost_trace.empty() ? 1.0 : cost_trace.back(); }
};

struct Bounds {
  CheckParams lo, hi;
};

struct SquareTuneOptions {
  double chi = 0.0;
  double t_r = 0.0;
  double t_ramp = 0.0;
  double target_cost = 1e-5;
  double step_tolerance = 1e-9;  // simplex size, relative
  int max_iter = 2000;
};

// Summed infidelities of |0,0,g> -> |0,0,e>, |0,1,g> -> |0,1,g>, |1,0,g> -> |1,0,g>.
double transfer_cost(const DriveSchedule& s);

SquareCheckParams to_square(const CheckParams& p, const SquareTuneOptions& o);

TuneupResult tune_square_erasure_check(const CheckParams& guess, const Bounds& bounds, const SquareTuneOptions& opt);

struct GaussianTuneConfig {
  double chi = 0.0;
  double g_bs = 0.0;       // start, strictly between (sqrt3/2)|chi| and g_bs_max
  double g_bs_max = 0.0;
  double sigma = 0.0;      // start of the selectivity sweep
  double n_chop = 2.0;
  double selectivity_threshold = 1e-3;  // allowed logical-state excitation
  double return_tolerance = 1e-4;
  int sigma_points = 24;
  double sigma_span = 4.0;  // sweep sigma over [sigma, sigma_span * sigma]
  int g_points = 60;
  int max_loops = 8;
};

struct SelectivityPoint {
  double sigma = 0.0;
  double excitation = 0.0;  // worst of |0,1> and |1,0>
};

std::vector<SelectivityPoint> selectivity_sweep(const GaussianTuneConfig& cfg, double g_bs, double area_sigma_product,
                                                const std::vector<double>& sigmas);

// Mean infidelity of |0,1,g> and |1,0,g> returning, for each g in the grid.
std::vector<double> return_infidelity_scan(const GaussianTuneConfig& cfg, double sigma, double amplitude,
                                           const std::vector<double>& g_grid);

DriveSchedule gaussian_check_schedule(double chi, const CheckParams& p, double n_chop);

TuneupResult tune_gaussian_erasure_check(const GaussianTuneConfig& cfg);

struct AlignmentRow {
  double T_p = 0.0;
  double peak_00 = 0.0;  // rad/us
  double min_01 = 0.0;
  double min_10 = 0.0;
  double gap = 0.0;      // largest distance between the |0,0> peak and a logical minimum
  double split = 0.0;    // |min_01 - min_10|
  std::vector<double> detunings;
  std::vector<double> p00, p01, p10;  // P(e), post-selected on unchanged N
};

struct AlignmentOptions {
  double span = 0.0;  // scan delta omega over [-span, span]; 0 means |chi|/2
  int points = 81;
  const NoiseParams* noise = nullptr;
};

// Keeps the pulse area A (T_p - t_r) fixed while T_p changes.
std::vector<AlignmentRow> spectroscopy_alignment(const SquareCheckParams& tuned, double chi,
                                                 const std::vector<double>& T_p_candidates,
                                                 const AlignmentOptions& opt = {});

}  // namespace dualrail
