#include "doctest.h"

#include <random>

#include "dualrail/tuneup.hpp"
#include "oracle/fock_oracle.hpp"
#include "support/tuned_check.hpp"

using namespace dualrail;
using support::kChi;

namespace {

const double X = std::abs(kChi);

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

ChevronData synthetic(double g, double w0, int nt = 60, int nw = 21) {
  return simulate_chevron(g, w0, grid(0.0, 3 * kTwoPi / g, nt), grid(w0 - 2 * g, w0 + 2 * g, nw));
}

bool within(const CheckParams& p, const Bounds& b) {
  auto in = [](double x, double lo, double hi) { return x >= lo - 1e-12 && x <= hi + 1e-12; };
  return in(p.T_p, b.lo.T_p, b.hi.T_p) && in(p.g_bs, b.lo.g_bs, b.hi.g_bs) &&
         in(p.amplitude, b.lo.amplitude, b.hi.amplitude) && in(p.detuning, b.lo.detuning, b.hi.detuning) &&
         in(p.delta, b.lo.delta, b.hi.delta);
}

struct Start {
  CheckParams guess;
  Bounds bounds;
};

Start square_start() {
  const auto gs = erasure_check_guess(kChi, 1, 2);
  return {{gs.T_p, gs.g_bs, gs.amplitude, 0.0, gs.delta},
          {{0.5 * gs.T_p, 0.0, 0.0, -X, -X}, {2.0 * gs.T_p, kTwoPi * 2.05, X, X, X}}};
}

}  // namespace

TEST_CASE("simulated chevron") {
  const double g = 0.9 * X, w0 = 0.4;
  const auto ts = grid(0.0, 4.0, 17);
  const auto ws = grid(w0 - 10 * g, w0 + 10 * g, 21);
  const ChevronData d = simulate_chevron(g, w0, ts, ws);
  REQUIRE(d.p1.size() == ws.size());
  for (std::size_t i = 0; i < ws.size(); ++i)
    for (std::size_t j = 0; j < ts.size(); ++j) {
      CHECK(std::abs(d.p1[i][j] - oracle::detuned_swap_stay(g, ws[i] - w0, ts[j])) < 1e-7);
      CHECK(std::abs(d.p1[i][j] - d.p1[ws.size() - 1 - i][j]) < 1e-8);
    }
  double far = 0;
  for (double p : d.p1.front()) far = std::max(far, 1 - p);
  CHECK(far < 0.04);
  CHECK_THROWS_AS(simulate_chevron(g, w0, {}, ws), std::invalid_argument);
}

TEST_CASE("chevron fit") {
  SUBCASE("noiseless round trip") {
    for (double r : {0.2, 0.7, 1.3, 2.0}) {
      const double g = r * X, w0 = 0.3;
      const auto f = fit_chevron(synthetic(g, w0));
      CHECK(std::abs(f.g_bs - g) <= 1e-9 * g);
      CHECK(std::abs(f.omega0 - w0) <= 1e-9 * w0);
      CHECK(f.A >= -0.1);
      CHECK(f.A <= 1.1);
      CHECK(f.c >= -0.1);
      CHECK(f.c <= 1.1);
    }
  }
  SUBCASE("one percent additive noise") {
    const double g = X, w0 = 0.3;
    const ChevronData clean = synthetic(g, w0);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd(0.0, 0.01);
    int ok = 0;
    for (int draw = 0; draw < 100; ++draw) {
      ChevronData d = clean;
      for (auto& row : d.p1)
        for (auto& v : row) v += nd(rng);
      const auto f = fit_chevron(d);
      ok += std::abs(f.g_bs - g) <= 0.005 * g;
    }
    CHECK(ok == 100);
  }
  SUBCASE("ramp shows up as a phase") {
    ChevronSimOptions o;
    o.ramp = 0.12;
    const auto f = fit_chevron(simulate_chevron(X, 0.0, grid(0.0, 3.0, 60), grid(-2 * X, 2 * X, 21), o));
    CHECK(f.phi > 0);
  }
  SUBCASE("model form") {
    CHECK(chevron_model(1.0, 0.0, 1.0, 0.0, 0.0, 0.0, kTwoPi) == doctest::Approx(1.0));
    CHECK(std::abs(chevron_model(2.0, 0.5, 1.0, 0.0, 0.0, 0.5, 0.5 * kTwoPi / 2.0)) < 1e-12);
  }
}

TEST_CASE("amplitude polynomial") {
  std::vector<double> x, lin, sat;
  for (int i = 0; i <= 10; ++i) {
    x.push_back(0.1 * i);
    lin.push_back(2.5 * x.back());
    sat.push_back(std::tanh(1.5 * x.back()));
  }
  const auto p = fit_amplitude_polynomial(x, lin);
  CHECK(p.coeffs.size() == 5);
  CHECK(std::abs(p.coeffs[0] - 2.5) < 1e-10);
  for (int k = 1; k < 5; ++k) CHECK(std::abs(p.coeffs[k]) < 1e-10);
  CHECK(p(0.0) == 0.0);
  CHECK(p.monotonic);
  const auto q = fit_amplitude_polynomial(x, sat);
  double worst = 0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(q(x[i]) - sat[i]));
  CHECK(worst < 0.01 * sat.back());
  CHECK(q(0.0) == 0.0);
  CHECK_THROWS_AS(fit_amplitude_polynomial({0.1, 0.2, 0.3}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("square tune-up") {
  const Start st = square_start();
  const TuneupResult& r = support::tuned_square();
  CHECK(r.converged);
  CHECK(r.final_cost() < 1e-6);
  CHECK(within(r.params, st.bounds));
  for (std::size_t i = 1; i < r.cost_trace.size(); ++i) CHECK(r.cost_trace[i] <= r.cost_trace[i - 1]);
  SquareTuneOptions o;
  o.chi = kChi;
  o.target_cost = 1e-7;
  CHECK(r.final_cost() <= transfer_cost(erasure_check_schedule({kChi}, to_square(st.guess, o))));

  SUBCASE("idempotent") {
    const auto again = tune_square_erasure_check(r.params, st.bounds, o);
    CHECK(again.iterations <= 2);
    CHECK(std::abs(again.final_cost() - r.final_cost()) < 1e-8);
  }
  SUBCASE("ramped pulses") {
    SquareTuneOptions ro = o;
    ro.t_r = 0.024;
    ro.t_ramp = 0.120;
    ro.target_cost = 1e-5;
    const auto rr = tune_square_erasure_check(st.guess, st.bounds, ro);
    CHECK(rr.converged);
    CHECK(rr.final_cost() < 1e-5);
    CHECK(within(rr.params, st.bounds));
  }
  SUBCASE("zero drive cannot converge") {
    CheckParams z = st.guess;
    z.amplitude = 0.0;
    const Bounds b{{z.T_p * 0.5, 0, 0, -X, -X}, {z.T_p * 2, kTwoPi * 2.05, 0, X, X}};
    const auto rz = tune_square_erasure_check(z, b, o);
    CHECK_FALSE(rz.converged);
    CHECK(rz.final_cost() >= 0.99);
  }
  SUBCASE("guess outside the bounds") {
    Bounds b = st.bounds;
    b.hi.T_p = 0.6 * st.guess.T_p;
    CHECK_THROWS_AS(tune_square_erasure_check(st.guess, b, o), std::invalid_argument);
  }
}

TEST_CASE("Gaussian tune-up") {
  GaussianTuneConfig cfg;
  cfg.chi = kChi;
  cfg.g_bs = 1.2 * X;
  cfg.g_bs_max = kTwoPi * 2.05;
  cfg.sigma = 0.3;
  const TuneupResult r = tune_gaussian_erasure_check(cfg);
  REQUIRE(r.converged);
  const CheckParams& p = r.params;
  CHECK(p.g_bs > 0.5 * std::sqrt(3.0) * X);
  CHECK(p.g_bs <= cfg.g_bs_max);
  CHECK(r.final_cost() < 2e-3);

  SUBCASE("vacuum is flagged") {
    const ModeLayout l{2, 2, 2};
    const PureState out = propagate(gaussian_check_schedule(kChi, p, cfg.n_chop), basis_state(l, 0, 0));
    CHECK(std::norm(out.amp(l.index(0, 0, 1))) > 0.999);
  }
  SUBCASE("selectivity improves with sigma") {
    const auto sig = grid(p.sigma, 2 * p.sigma, 6);
    const auto sw = selectivity_sweep(cfg, p.g_bs, p.amplitude * p.sigma, sig);
    for (std::size_t i = 0; i < sw.size(); ++i) CHECK(sw[i].excitation < cfg.selectivity_threshold);
    const auto wide = selectivity_sweep(cfg, p.g_bs, p.amplitude * p.sigma, grid(0.3 * p.sigma, p.sigma, 8));
    CHECK(wide.front().excitation > wide.back().excitation);
  }
  SUBCASE("return minima sit at whole revolutions") {
    // one-photon manifold precesses at sqrt(g^2 + chi^2/4) with the beamsplitter detuned by chi/2
    const double T = 2 * cfg.n_chop * p.sigma;
    const auto gg = grid(0.9 * X, cfg.g_bs_max, 80);
    const auto inf = return_infidelity_scan(cfg, p.sigma, p.amplitude, gg);
    int minima = 0;
    for (std::size_t i = 1; i + 1 < gg.size(); ++i)
      if (inf[i] < inf[i - 1] && inf[i] < inf[i + 1] && inf[i] < 1e-2) {
        const double revs = std::sqrt(gg[i] * gg[i] + 0.25 * X * X) * T / kTwoPi;
        CHECK(std::abs(revs - std::round(revs)) < 0.15);
        ++minima;
      }
    CHECK(minima >= 1);
  }
  GaussianTuneConfig bad = cfg;
  bad.g_bs = 0.5 * X;
  CHECK_THROWS_AS(tune_gaussian_erasure_check(bad), std::invalid_argument);
}

TEST_CASE("spectroscopic alignment") {
  SquareTuneOptions o;
  o.chi = kChi;
  const SquareCheckParams sq = to_square(support::tuned_square().params, o);
  const auto rows = spectroscopy_alignment(sq, kChi, {sq.T_p, 0.6 * sq.T_p});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].gap < 0.02 * X);
  CHECK(rows[1].gap > rows[0].gap);
  CHECK(rows[0].split >= 0);
  CHECK(rows[0].detunings.size() == rows[0].p00.size());
}
