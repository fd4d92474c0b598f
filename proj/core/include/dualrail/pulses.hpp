#pragma once

#include "dualrail/hilbert.hpp"

#include <variant>
#include <vector>

namespace dualrail {

struct SquarePulse {
  double amplitude = 0.0;  // rad/us
  double duration = 0.0;   // us
  double ramp = 0.0;       // us, cosine ramp at each end
  double detuning = 0.0;   // rad/us
  double phase = 0.0;      // rad
  void validate() const;
};

struct ChoppedGaussian {
  double amplitude = 0.0;
  double sigma = 0.0;
  double n_chop = 2.0;
  double detuning = 0.0;
  double phase = 0.0;
  double duration() const { return 2.0 * n_chop * sigma; }
  void validate() const;
};

double square_envelope(double t, const SquarePulse& p);
double gaussian_envelope(double t, const ChoppedGaussian& p);
// Exact integral of the envelope over the pulse.
double square_area(const SquarePulse& p);
double gaussian_area(const ChoppedGaussian& p);

struct BeamsplitterDrive {
  double g_bs = 0.0;
  double delta = 0.0;
  double phi = 0.0;
  double ramp = 0.0;  // cosine-shaped
  double hold = 0.0;
  double duration() const { return 2.0 * ramp + hold; }
  double amplitude(double t) const;  // t local to the drive
  void validate() const;
};

// Two instantaneous rotations separated by `separation`.
struct DeltaPair {
  double separation = 0.0;
  double angle = 1.5707963267948966;
  double phase = 0.0;
};

enum class AncillaPair { GE, GF };

// Static part of the Hamiltonian that is not a drive.
struct Coupling {
  double chi = 0.0;  // rad/us; dispersive shift of the flagged level
  AncillaPair pair = AncillaPair::GE;
  double chi_e_fraction = 0.5;  // g-f variant: shift on |e> in units of chi
};

struct TransmonPulse {
  std::variant<SquarePulse, ChoppedGaussian> shape;
  double start = 0.0;
  double duration() const;
  double envelope(double t_abs) const;  // zero outside the pulse
  double detuning() const;
  double phase() const;
};

struct Rotation {
  double time = 0.0;
  double angle = 0.0;  // rotation angle on the drive pair
  double phase = 0.0;
};

struct DriveSchedule {
  Coupling coupling;
  BeamsplitterDrive beamsplitter;
  double bs_start = 0.0;
  std::vector<TransmonPulse> pulses;
  std::vector<Rotation> rotations;
  double alignment = 0.0;  // ramp-center offset, transmon relative to beamsplitter
  double total_duration = 0.0;

  double g_bs(double t) const;
  // Sorted, unique times where some envelope is not smooth, including 0 and the end.
  std::vector<double> breakpoints() const;
  void validate() const;
};

struct ErasureCheckGuess {
  double T_p;
  double g_bs;
  double amplitude;
  double detuning;  // transmon drive detuning (0)
  double delta;     // beamsplitter detuning chi/2
};

ErasureCheckGuess erasure_check_guess(double chi, int n, int m);

struct SquareCheckParams {
  double T_p = 0.0;
  double g_bs = 0.0;
  double amplitude = 0.0;
  double detuning = 0.0;
  double delta = 0.0;
  double t_r = 0.0;
  double t_ramp = 0.0;
  double alignment = 0.0;
};

// Square transmon pulse under a ramped beamsplitter with ramp centers aligned.
DriveSchedule erasure_check_schedule(const Coupling& c, const SquareCheckParams& p);

DriveSchedule idle_schedule(const Coupling& c, double duration, double delta = 0.0);

struct ParityOptions {
  bool idealized = true;
  double pulse_width = 0.02;  // us, finite-width mode only
  double extra_hold = 0.0;    // us, added to 2 pi/|chi|
};

DriveSchedule joint_parity_schedule(double chi, AncillaPair variant, const ParityOptions& opt = {},
                                    double chi_e_fraction = 0.5);

struct CphaseParams {
  double g_bs = 0.0;
  double sigma = 0.0;
  double n_chop = 2.0;
  double amplitude = 0.0;
  double detuning = 0.0;
  double delta = 0.0;
  double relative_phase = 0.0;  // second pulse phase relative to the first
};

DriveSchedule cphase_schedule(const Coupling& c, const CphaseParams& p);

struct HamiltonianParts {
  Mat h_static;  // -Delta n_b + dispersive
  Mat h_bs;      // (e^{i phi} a b^dag + h.c.)/2, multiplied by g(t)
  Mat s_drive;   // |g><e| or |g><f|
};

HamiltonianParts hamiltonian_parts(const DriveSchedule& s, const ModeOperators& ops);

Mat assemble_hamiltonian(const DriveSchedule& s, double t, const ModeOperators& ops);

// exp(-i angle/2 (e^{i phase} S + h.c.)) on the drive pair.
Mat rotation_unitary(const Rotation& r, AncillaPair pair, const ModeOperators& ops);

}  // namespace dualrail
