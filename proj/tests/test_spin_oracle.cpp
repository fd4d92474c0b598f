#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include "dualrail/hilbert.hpp"
#include "dualrail/spin_oracle.hpp"
#include "oracle/fock_oracle.hpp"

using namespace dualrail;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kChi = -kTwoPi * 1.066;
const double X = std::abs(kChi);

std::vector<double> sorted_general(int N, double g, double d, double chi) {
  std::vector<double> w;
  for (const auto& l : transition_frequencies_general(N, g, d, chi)) w.push_back(l.omega);
  std::sort(w.begin(), w.end());
  return w;
}

// Groups values equal to within tol; returns multiplicities in ascending order of value.
std::vector<int> multiplicities(std::vector<double> w, double tol) {
  std::sort(w.begin(), w.end());
  std::vector<int> m;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i == 0 || w[i] - w[i - 1] > tol) m.push_back(0);
    ++m.back();
  }
  return m;
}

}  // namespace

TEST_CASE("Larmor frequency") {
  CHECK(larmor_frequency(0.0, kChi) == doctest::Approx(X / 2));
  CHECK(larmor_frequency(std::sqrt(3.0) / 2 * X, kChi) == doctest::Approx(X).epsilon(1e-15));
  // full-Hamiltonian splitting of the one-photon g block at symmetric detuning
  const double g = 1.04 * X;
  const auto b = oracle::diagonalize(1, g, kChi / 2, kChi, 0.3);
  CHECK(larmor_frequency(g, kChi) == doctest::Approx(b.eg(1) - b.eg(0)).epsilon(1e-12));
  CHECK(larmor_frequency(g, kChi) >= X / 2);
}

TEST_CASE("quantization axes") {
  const auto ax = quantization_axes({1, 2.0, 0.5, kChi, 0.7});
  CHECK(ax.omega_g[0] == doctest::Approx(2.0 * std::cos(0.7)));
  CHECK(ax.omega_g[1] == doctest::Approx(-2.0 * std::sin(0.7)));
  CHECK(ax.omega_g[2] == 0.5);
  CHECK(ax.omega_e[2] == doctest::Approx(0.5 - kChi));
}

TEST_CASE("symmetric transition frequencies") {
  SUBCASE("N = 0") {
    const auto l = transition_frequencies_symmetric(0, 1.0, kChi);
    REQUIRE(l.size() == 1);
    CHECK(l[0].omega == 0.0);
  }
  SUBCASE("N = 1 triplet") {
    const double g = 0.8 * X, om = std::hypot(g, kChi / 2);
    const auto l = transition_frequencies_symmetric(1, g, kChi);
    REQUIRE(l.size() == 3);
    CHECK(l[0].omega == doctest::Approx(kChi / 2 - om));
    CHECK(l[1].omega == doctest::Approx(kChi / 2));
    CHECK(l[2].omega == doctest::Approx(kChi / 2 + om));
    CHECK(l[1].degeneracy == 2);
    CHECK(l[0].degeneracy == 1);
  }
  SUBCASE("parity operating point lands on multiples of chi/2") {
    const double g = std::sqrt(3.0) / 2 * X;
    for (int N = 0; N <= 4; ++N)
      for (const auto& l : transition_frequencies_symmetric(N, g, kChi)) {
        const double r = l.omega / (kChi / 2);
        CHECK(std::abs(r - std::round(r)) < 1e-12);
        CHECK(std::abs(long(std::lround(r))) % 2 == N % 2);
      }
  }
}

TEST_CASE("general transition frequencies") {
  SUBCASE("symmetric detuning collapses to 2N+1 lines") {
    for (int N = 0; N <= 4; ++N) {
      const double g = 0.9 * X;
      const auto m = multiplicities(sorted_general(N, g, kChi / 2, kChi), 1e-12 * X);
      REQUIRE(int(m.size()) == 2 * N + 1);
      const auto sym = transition_frequencies_symmetric(N, g, kChi);
      // ascending omega runs over delta m in the order of the sign of chi
      for (std::size_t i = 0; i < m.size(); ++i) {
        const int dm = kChi < 0 ? N - int(i) : int(i) - N;
        CHECK(m[i] == N + 1 - std::abs(dm));
      }
      auto gen = sorted_general(N, g, kChi / 2, kChi);
      gen.erase(std::unique(gen.begin(), gen.end(), [](double a, double b) { return std::abs(a - b) < 1e-12 * X; }),
                gen.end());
      std::vector<double> s;
      for (const auto& l : sym) s.push_back(l.omega);
      std::sort(s.begin(), s.end());
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(gen[i] == doctest::Approx(s[i]).epsilon(1e-12));
    }
  }
  SUBCASE("detuning chi gives four lines for N = 1") {
    CHECK(multiplicities(sorted_general(1, 1.2 * X, kChi, kChi), 1e-9).size() == 4);
  }
  SUBCASE("generic detuning lifts every degeneracy") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int k = 0; k < 20; ++k) {
      const double g = u(rng) * X, d = (u(rng) - 1.3) * X;
      if (std::abs(d - kChi / 2) < 1e-3 * X) continue;
      for (int N = 1; N <= 3; ++N)
        CHECK(multiplicities(sorted_general(N, g, d, kChi), 1e-9 * X).size() == std::size_t((N + 1) * (N + 1)));
    }
  }
  SUBCASE("static number splitting") {
    const auto gen = sorted_general(1, 0.0, 0.0, kChi);
    const auto full = oracle::transition_multiset(1, 0.0, 0.0, kChi);
    for (std::size_t i = 0; i < gen.size(); ++i) CHECK(gen[i] == doctest::Approx(full[i]).epsilon(1e-14));
    std::vector<double> expect = {kChi, kChi, 0.0, 0.0};
    std::sort(expect.begin(), expect.end());
    for (std::size_t i = 0; i < gen.size(); ++i) CHECK(gen[i] == doctest::Approx(expect[i]).epsilon(1e-14));
  }
}

TEST_CASE("spin model matches the full Hamiltonian on random draws") {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> ug(0.0, 3.0), ud(-1.0, 2.0), up(0.0, kTwoPi);
  for (int N = 0; N <= 3; ++N)
    for (int draw = 0; draw < 50; ++draw) {
      const double g = ug(rng) * X, d = ud(rng) * kChi, phi = up(rng);
      const double scale = X + g + std::abs(d);
      const auto b = oracle::diagonalize(N, g, d, kChi, phi);
      const auto eg = spin_energies_g(N, g, d), ee = spin_energies_e(N, g, d, kChi);
      for (int k = 0; k <= N; ++k) {
        CHECK(std::abs(eg[k] - b.eg(k)) <= 1e-9 * scale);
        CHECK(std::abs(ee[k] - b.ee(k)) <= 1e-9 * scale);
      }
      const auto gen = sorted_general(N, g, d, kChi);
      const auto full = oracle::transition_multiset(N, g, d, kChi, phi);
      for (std::size_t i = 0; i < gen.size(); ++i) CHECK(std::abs(gen[i] - full[i]) <= 1e-9 * scale);

      if (g < 1e-3 * X) continue;  // eigenvectors ill-defined near degenerate fields
      const auto table = transition_matrix_elements({N, g, d, kChi, phi});
      for (const auto& r : table.rows) {
        const int ig = int(std::lround(r.m_g + 0.5 * N)), ie = int(std::lround(r.m_e + 0.5 * N));
        const double num = std::abs(b.vg.col(ig).dot(b.ve.col(ie)));
        CHECK(std::abs(r.element - num) <= 1e-9);
      }
    }
}

TEST_CASE("axes angle") {
  CHECK(axes_angle(1e6 * X, kChi / 2, kChi) == doctest::Approx(0.0).epsilon(1e-5));
  CHECK(std::abs(axes_angle(std::sqrt(3.0) / 2 * X, kChi / 2, kChi)) == doctest::Approx(kPi / 3).epsilon(1e-14));
  for (double g : {0.1, 0.7, 1.9})
    CHECK(axes_angle(g * X, kChi / 2, kChi) == doctest::Approx(2 * std::atan(kChi / (2 * g * X))).epsilon(1e-14));
  // against the angle between numerically found axes of the one-photon blocks
  const double g = 0.65 * X, d = 0.3 * X;
  const auto b = oracle::diagonalize(1, g, d, kChi, 0.0);
  const double overlap = std::abs(b.vg.col(1).dot(b.ve.col(1)));
  CHECK(std::cos(0.5 * axes_angle(g, d, kChi)) == doctest::Approx(overlap).epsilon(1e-12));
  CHECK_THROWS_AS(axes_angle(0.0, 0.0, kChi), std::domain_error);
  CHECK_THROWS_AS(axes_angle(0.0, kChi, kChi), std::domain_error);
}

TEST_CASE("Wigner small d") {
  for (int tj = 0; tj <= 6; ++tj)
    for (int a = -tj; a <= tj; a += 2)
      for (int b = -tj; b <= tj; b += 2) CHECK(wigner_small_d(tj, a, b, 0.0) == doctest::Approx(a == b ? 1.0 : 0.0));
  const double beta = 0.83;
  CHECK(wigner_small_d(1, 1, 1, beta) == doctest::Approx(std::cos(beta / 2)));
  CHECK(wigner_small_d(1, 1, -1, beta) == doctest::Approx(-std::sin(beta / 2)));
  CHECK(wigner_small_d(2, 0, 0, beta) == doctest::Approx(std::cos(beta)));
  CHECK_THROWS_AS(wigner_small_d(2, 1, 0, beta), std::invalid_argument);
  CHECK_THROWS_AS(wigner_small_d(1, 3, 1, beta), std::invalid_argument);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int k = 0; k < 20; ++k) {
    const double bt = u(rng);
    for (int tj = 0; tj <= 6; ++tj) {
      const Eigen::MatrixXd ref = oracle::small_d(tj, bt);
      for (int a = -tj; a <= tj; a += 2) {
        double row = 0.0;
        for (int b = -tj; b <= tj; b += 2) {
          const double d = wigner_small_d(tj, a, b, bt);
          row += d * d;
          CHECK(std::abs(d - ref((tj - a) / 2, (tj - b) / 2)) < 1e-12);
        }
        CHECK(std::abs(row - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("transition matrix elements") {
  const double g = 0.9 * X, om = std::hypot(g, kChi / 2);
  const auto t = transition_matrix_elements({1, g, kChi / 2, kChi, 0.0});
  REQUIRE(t.rows.size() == 4);
  for (const auto& r : t.rows) {
    if (r.delta_m == 0) CHECK(r.element == doctest::Approx(g / om));
    else CHECK(r.element == doctest::Approx(X / 2 / om));
  }
  // rows come sorted by (delta m, m_g)
  for (std::size_t i = 1; i < t.rows.size(); ++i)
    CHECK((t.rows[i - 1].delta_m < t.rows[i].delta_m ||
           (t.rows[i - 1].delta_m == t.rows[i].delta_m && t.rows[i - 1].m_g <= t.rows[i].m_g)));
  // rows of a unitary
  std::map<double, double> sums;
  for (const auto& r : transition_matrix_elements({3, 0.4 * X, 0.2 * X, kChi, 1.0}).rows)
    sums[r.m_g] += r.element * r.element;
  for (const auto& [mg, s] : sums) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("N = 2 central elements differ despite equal frequency") {
    const auto t2 = transition_matrix_elements({2, g, kChi / 2, kChi, 0.0});
    const double dth = axes_angle(g, kChi / 2, kChi);
    for (const auto& r : t2.rows) {
      if (r.delta_m != 0) continue;
      if (r.m_g == 0.0) CHECK(r.element == doctest::Approx(std::abs(std::cos(dth))));
      else CHECK(r.element == doctest::Approx((1 + std::cos(dth)) / 2));
    }
  }
}

TEST_CASE("central-element gap is suppressed as (chi/g)^2") {
  std::vector<double> lx, ly;
  for (double r = 4; r <= 64; r *= 2) {
    double e00 = 0, e11 = 0;
    for (const auto& row : transition_matrix_elements({2, r * X, kChi / 2, kChi, 0.0}).rows) {
      if (row.delta_m != 0) continue;
      if (row.m_g == 0.0) e00 = row.element;
      else e11 = row.element;
    }
    lx.push_back(std::log(r));
    ly.push_back(std::log(std::abs(e00 - e11)));
  }
  const double n = double(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(std::abs(slope + 2.0) <= 0.1);
}
