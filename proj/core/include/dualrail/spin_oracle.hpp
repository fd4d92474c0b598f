#pragma once

#include <array>
#include <vector>

namespace dualrail {

struct SpinModelParams {
  int N = 1;
  double g_bs = 0.0;   // rad/us
  double delta = 0.0;  // rad/us
  double chi = 0.0;    // rad/us, signed
  double phi = 0.0;    // rad
};

struct QuantizationAxes {
  std::array<double, 3> omega_g;
  std::array<double, 3> omega_e;
};

QuantizationAxes quantization_axes(const SpinModelParams& p);

double larmor_frequency(double g_bs, double chi);

struct SymmetricLine {
  int delta_m;
  double omega;
  int degeneracy;
};

std::vector<SymmetricLine> transition_frequencies_symmetric(int N, double g_bs, double chi);

// m values are half-integers stored as doubles (exact in binary).
struct GeneralLine {
  double m_g;
  double m_e;
  double omega;
};

std::vector<GeneralLine> transition_frequencies_general(int N, double g_bs, double delta, double chi);

// Spin eigenenergies of the ancilla-g and ancilla-e blocks, ascending in m.
std::vector<double> spin_energies_g(int N, double g_bs, double delta);
std::vector<double> spin_energies_e(int N, double g_bs, double delta, double chi);

double axes_angle(double g_bs, double delta, double chi);

// Standard Wigner convention. Quantum numbers passed doubled (two_j = 2j).
double wigner_small_d(int two_j, int two_m1, int two_m2, double beta);

struct TransitionRow {
  double m_g;
  double m_e;
  int delta_m;
  double frequency;
  double element;
};

struct TransitionTable {
  int N;
  std::vector<TransitionRow> rows;
};

TransitionTable transition_matrix_elements(const SpinModelParams& p);

}  // namespace dualrail
