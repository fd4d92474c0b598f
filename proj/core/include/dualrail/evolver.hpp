#pragma once

#include "dualrail/hilbert.hpp"
#include "dualrail/pulses.hpp"

#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace dualrail {

inline constexpr double kDisabled = std::numeric_limits<double>::infinity();

double tphi_from_t2r(double t1, double t2r);

// Lifetimes in us; infinity disables a channel.
struct NoiseParams {
  double t1_a = 347.0;
  double t1_b = 108.5;
  double t1_ge = 42.4;
  double tphi_ge = tphi_from_t2r(42.4, 33.1);
  double t1_fe = 0.0;    // <= 0 means t1_ge / 2
  double tphi_gf = 0.0;  // <= 0 means tphi_ge / 4
  double nth_a = 0.0;
  double nth_b = 0.0;
  bool heating = false;

  static NoiseParams device() { return {}; }
  static NoiseParams none();
  NoiseParams transmon_only() const;
  NoiseParams without_cavity() const { return transmon_only(); }
  NoiseParams cavity_only() const;
  double resolved_t1_fe() const { return t1_fe > 0 ? t1_fe : 0.5 * t1_ge; }
  double resolved_tphi_gf() const { return tphi_gf > 0 ? tphi_gf : 0.25 * tphi_ge; }
  void validate() const;
};

struct Collapse {
  Mat op;       // unscaled jump operator
  double rate;  // 1/us
  std::string name;
};

using CollapseSet = std::vector<Collapse>;

CollapseSet collapse_operators(const NoiseParams& noise, const ModeOperators& ops);

struct EvolveOptions {
  double atol = 1e-10;
  double rtol = 1e-10;
  double max_step = 0.0;  // 0: unlimited
  bool check_invariants = true;
};

struct PureTrajectory {
  std::vector<double> times;
  std::vector<PureState> states;
  bool truncation = false;
};

struct MixedTrajectory {
  std::vector<double> times;
  std::vector<MixedState> states;
  bool truncation = false;
};

PureTrajectory evolve_schrodinger(const DriveSchedule& s, const PureState& psi0,
                                  const std::vector<double>& samples, const EvolveOptions& opt = {});

MixedTrajectory evolve_lindblad(const DriveSchedule& s, const MixedState& rho0, const CollapseSet& c,
                                const std::vector<double>& samples, const EvolveOptions& opt = {});

// Final-state shortcuts.
PureState propagate(const DriveSchedule& s, const PureState& psi0, const EvolveOptions& opt = {});
MixedState propagate(const DriveSchedule& s, const MixedState& rho0, const CollapseSet& c,
                     const EvolveOptions& opt = {});

// Full propagator of the closed system (columns are evolved basis states).
Mat schedule_unitary(const DriveSchedule& s, const ModeLayout& layout, const EvolveOptions& opt = {});

// Applies the Lindblad map to an arbitrary operator (no density-matrix checks).
Mat propagate_operator(const DriveSchedule& s, const ModeLayout& layout, const Mat& x0, const CollapseSet& c,
                       const EvolveOptions& opt = {});

// Exact closed-system propagation for a time-independent Hamiltonian.
Mat unitary_from_hamiltonian(const Mat& H, double t);

// Schedule with constant envelopes seen in the frame rotating at the drive
// detuning; throws unless the schedule is a single unramped square pulse over
// the whole span under a constant beamsplitter.
Mat drive_frame_hamiltonian(const DriveSchedule& s, const ModeOperators& ops);

void write_trajectory_csv(std::ostream& os, const MixedTrajectory& traj,
                          const std::vector<std::pair<std::string, Mat>>& observables);
void write_trajectory_csv(std::ostream& os, const PureTrajectory& traj,
                          const std::vector<std::pair<std::string, Mat>>& observables);

}  // namespace dualrail
