#include "dualrail/spin_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dualrail {

QuantizationAxes quantization_axes(const SpinModelParams& p) {
  const double gx = p.g_bs * std::cos(p.phi);
  const double gy = -p.g_bs * std::sin(p.phi);
  return {{gx, gy, p.delta}, {gx, gy, p.delta - p.chi}};
}

double larmor_frequency(double g_bs, double chi) { return std::hypot(g_bs, 0.5 * chi); }

std::vector<SymmetricLine> transition_frequencies_symmetric(int N, double g_bs, double chi) {
  if (N < 0) throw std::invalid_argument("N must be >= 0");
  const double om = larmor_frequency(g_bs, chi);
  std::vector<SymmetricLine> out;
  for (int dm = -N; dm <= N; ++dm)
    out.push_back({dm, 0.5 * N * chi + dm * om, N + 1 - std::abs(dm)});
  return out;
}

std::vector<double> spin_energies_g(int N, double g_bs, double delta) {
  const double r = std::hypot(g_bs, delta);
  std::vector<double> e;
  for (int k = 0; k <= N; ++k) e.push_back(-0.5 * N * delta + (k - 0.5 * N) * r);
  return e;
}

std::vector<double> spin_energies_e(int N, double g_bs, double delta, double chi) {
  const double r = std::hypot(g_bs, delta - chi);
  std::vector<double> e;
  for (int k = 0; k <= N; ++k) e.push_back(-0.5 * N * (delta - chi) + (k - 0.5 * N) * r);
  return e;
}

std::vector<GeneralLine> transition_frequencies_general(int N, double g_bs, double delta, double chi) {
  if (N < 0) throw std::invalid_argument("N must be >= 0");
  const double rg = std::hypot(g_bs, delta);
  const double re = std::hypot(g_bs, delta - chi);
  std::vector<GeneralLine> out;
  for (int kg = 0; kg <= N; ++kg)
    for (int ke = 0; ke <= N; ++ke) {
      const double mg = kg - 0.5 * N, me = ke - 0.5 * N;
      out.push_back({mg, me, 0.5 * N * chi + me * re - mg * rg});
    }
  return out;
}

double axes_angle(double g_bs, double delta, double chi) {
  if (g_bs == 0.0 && (delta == 0.0 || delta == chi))
    throw std::domain_error("quantization axis undefined (zero field)");
  return std::atan2(delta, g_bs) - std::atan2(delta - chi, g_bs);
}

double wigner_small_d(int two_j, int two_m1, int two_m2, double beta) {
  if (two_j < 0 || std::abs(two_m1) > two_j || std::abs(two_m2) > two_j ||
      ((two_j - two_m1) % 2) != 0 || ((two_j - two_m2) % 2) != 0)
    throw std::invalid_argument("invalid angular momentum quantum numbers");
  const int jpm1 = (two_j + two_m1) / 2, jmm1 = (two_j - two_m1) / 2;
  const int jpm2 = (two_j + two_m2) / 2, jmm2 = (two_j - two_m2) / 2;
  const int m1mm2 = (two_m1 - two_m2) / 2;
  auto lf = [](int n) { return std::lgamma(n + 1.0); };
  const double pref = 0.5 * (lf(jpm1) + lf(jmm1) + lf(jpm2) + lf(jmm2));
  const double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta);
  const int kmin = std::max(0, -m1mm2);
  const int kmax = std::min(jpm2, jmm1);
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const int pc = two_j - 2 * k - m1mm2;
    const int ps = m1mm2 + 2 * k;
    const double lden = lf(jpm2 - k) + lf(k) + lf(jmm1 - k) + lf(k + m1mm2);
    double term = std::exp(pref - lden);
    term *= (pc == 0 ? 1.0 : std::pow(c, pc)) * (ps == 0 ? 1.0 : std::pow(s, ps));
    sum += ((k + m1mm2) % 2 == 0 ? 1.0 : -1.0) * term;
  }
  return sum;
}

TransitionTable transition_matrix_elements(const SpinModelParams& p) {
  const double dth = axes_angle(p.g_bs, p.delta, p.chi);
  TransitionTable t{p.N, {}};
  for (const auto& line : transition_frequencies_general(p.N, p.g_bs, p.delta, p.chi)) {
    const int tmg = int(std::lround(2 * line.m_g)), tme = int(std::lround(2 * line.m_e));
    t.rows.push_back({line.m_g, line.m_e, (tme - tmg) / 2, line.omega,
                      std::abs(wigner_small_d(p.N, tmg, tme, dth))});
  }
  std::stable_sort(t.rows.begin(), t.rows.end(), [](const TransitionRow& x, const TransitionRow& y) {
    return x.delta_m != y.delta_m ? x.delta_m < y.delta_m : x.m_g < y.m_g;
  });
  return t;
}

}  // namespace dualrail
