#include "commands.hpp"

#include <cmath>
#include <fstream>

#include "dualrail/tuneup.hpp"

namespace dualrail::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

double mhz(double w) { return w / kTwoPi; }

Section open_section(const Context& ctx) {
  const auto it = ctx.cfg.studies.find(ctx.command);
  return Section(it == ctx.cfg.studies.end() ? json::object() : *it, ctx.command);
}

OutputSink make_sink(const Context& ctx, const Section& s) {
  s.finish();
  json c = to_json(ctx.cfg);
  c["studies"][ctx.command] = s.resolved();
  return OutputSink(ctx.out_dir, ctx.command, std::move(c), ctx.cfg.seed);
}

void note(const Context& ctx, const std::string& msg) {
  if (ctx.log) *ctx.log << msg << '\n';
}

AncillaPair read_pair(Section& s, const std::string& key = "pair") {
  return s.text(key, "ge", {"ge", "gf"}) == "ge" ? AncillaPair::GE : AncillaPair::GF;
}

struct CheckSpec {
  double chi = 0.0;
  AncillaPair pair = AncillaPair::GE;
  SquareCheckParams p;
  DriveSchedule schedule() const { return erasure_check_schedule({chi, pair, 0.5}, p); }
};

CheckSpec read_check(Section& s, const StudyConfig& cfg, std::vector<std::string>& warnings) {
  CheckSpec c;
  c.chi = s.freq("chi_mhz", cfg.system.chi_bob);
  c.pair = read_pair(s);
  auto& p = c.p;
  p.T_p = s.number("T_p_us", 1.699);
  p.g_bs = cfg.system.clip_g(s.freq("g_bs_mhz", kTwoPi * 1.04), &warnings);
  p.t_r = s.number("t_r_us", 0.0);
  p.amplitude = s.freq("amplitude_mhz", 0.5 * kPi / (p.T_p - p.t_r));
  p.detuning = s.freq("detuning_mhz", 0.0);
  p.delta = s.freq("delta_mhz", 0.5 * c.chi);
  p.t_ramp = s.number("t_ramp_us", 0.0);
  p.alignment = s.number("alignment_us", 0.0);
  return c;
}

json check_json(const CheckSpec& c) {
  return {{"pair", c.pair == AncillaPair::GE ? "ge" : "gf"},
          {"chi_mhz", mhz(c.chi)},
          {"T_p_us", c.p.T_p},
          {"g_bs_mhz", mhz(c.p.g_bs)},
          {"amplitude_mhz", mhz(c.p.amplitude)},
          {"detuning_mhz", mhz(c.p.detuning)},
          {"delta_mhz", mhz(c.p.delta)},
          {"t_r_us", c.p.t_r},
          {"t_ramp_us", c.p.t_ramp},
          {"alignment_us", c.p.alignment}};
}

std::vector<double> mhz_grid(Section& s, const std::string& prefix, double lo, double hi, int n) {
  const double a = s.freq(prefix + "_min_mhz", lo);
  const double b = s.freq(prefix + "_max_mhz", hi);
  const int k = s.integer(prefix + "_points", n);
  if (k < 1) throw ConfigError("studies." + s.name() + "." + prefix + "_points must be >= 1");
  return linspace(a, b, k);
}

// ---- spectroscopy -------------------------------------------------------

void cmd_spectroscopy(Context& ctx) {
  Section s = open_section(ctx);
  SpectroscopyConfig c;
  c.chi = s.freq("chi_mhz", ctx.cfg.system.chi_bob);
  const double X = std::abs(c.chi);
  c.N = s.integer("N", 1);
  const std::string in = s.text("input", "mixed", {"mixed", "alice", "bob"});
  c.input = in == "alice" ? SpectroInput::Alice : in == "bob" ? SpectroInput::Bob : SpectroInput::Mixed;
  c.delta = s.freq("delta_mhz", 0.5 * c.chi);
  c.g_grid = mhz_grid(s, "g_bs", 0.0, 1.9 * X, 20);
  c.dw_grid = mhz_grid(s, "freq", -3.0 * X, 3.0 * X, 241);
  const ProbeParams dp = default_probe(c.chi);
  c.probe.amplitude = s.freq("probe_amplitude_mhz", dp.amplitude);
  c.probe.duration = s.number("probe_duration_us", dp.duration);
  c.ridge_threshold = s.number("ridge_threshold", c.ridge_threshold);
  c.sidelobe_ratio = s.number("sidelobe_ratio", c.sidelobe_ratio);
  c.jobs = ctx.cfg.jobs;
  std::vector<std::string> warnings;
  for (double& g : c.g_grid) g = ctx.cfg.system.clip_g(g, &warnings);
  const OutputSink sink = make_sink(ctx, s);

  const SpectroscopyMap m = study_spectroscopy_map(c);
  warnings.insert(warnings.end(), m.warnings.begin(), m.warnings.end());

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < c.g_grid.size(); ++i)
    for (std::size_t j = 0; j < c.dw_grid.size(); ++j)
      rows.push_back({fmt(mhz(c.g_grid[i])), fmt(mhz(c.dw_grid[j])), fmt(m.pe[i][j])});
  sink.write_csv("spectroscopy_map.csv", {"g_bs_mhz", "freq_mhz", "p_e"}, rows);

  rows.clear();
  for (const auto& r : m.ridges)
    for (std::size_t k = 0; k < r.peaks.size(); ++k)
      rows.push_back({fmt(mhz(r.g_bs)), fmt(mhz(r.peaks[k])), fmt(r.heights[k]), fmt(mhz(r.deviation[k]))});
  sink.write_csv("spectroscopy_ridges.csv", {"g_bs_mhz", "peak_mhz", "p_e", "deviation_mhz"}, rows);

  rows.clear();
  for (std::size_t i = 0; i < c.g_grid.size(); ++i)
    for (double w : m.oracle[i]) rows.push_back({fmt(mhz(c.g_grid[i])), fmt(mhz(w))});
  sink.write_csv("spectroscopy_oracle.csv", {"g_bs_mhz", "line_mhz"}, rows);

  json ridge_counts = json::array();
  for (const auto& r : m.ridges) ridge_counts.push_back(r.peaks.size());
  sink.write_json("spectroscopy_summary.json", {{"max_deviation_mhz", mhz(m.max_deviation)},
                                                {"tolerance_mhz", mhz(m.tolerance)},
                                                {"within_tolerance", m.max_deviation <= m.tolerance},
                                                {"ridge_counts", ridge_counts},
                                                {"warnings", warnings}});
  note(ctx, "max ridge deviation " + fmt(mhz(m.max_deviation)) + " MHz (tolerance " + fmt(mhz(m.tolerance)) + ")");
}

// ---- power Rabi ---------------------------------------------------------

void cmd_power_rabi(Context& ctx) {
  Section s = open_section(ctx);
  PowerRabiConfig c;
  c.chi = s.freq("chi_mhz", ctx.cfg.system.chi_bob);
  const double X = std::abs(c.chi);
  c.g_grid = mhz_grid(s, "g_bs", 0.0, 1.9 * X, 11);
  c.delta_m = s.integers("delta_m", c.delta_m);
  c.duration = s.number("duration_us", 40.0 * kTwoPi / X);
  c.max_amplitude = s.freq("max_amplitude_mhz", X / 40.0);
  c.amplitude_points = s.integer("amplitude_points", c.amplitude_points);
  c.min_contrast = s.number("min_contrast", c.min_contrast);
  c.jobs = ctx.cfg.jobs;
  std::vector<std::string> warnings;
  for (double& g : c.g_grid) g = ctx.cfg.system.clip_g(g, &warnings);
  const OutputSink sink = make_sink(ctx, s);

  const PowerRabiResult r = study_power_rabi(c);
  std::vector<std::vector<std::string>> rows;
  double worst = 0.0;
  for (const auto& p : r.points) {
    rows.push_back({fmt(mhz(p.g_bs)), fmt(p.delta_m), fmt(mhz(p.drive_freq)), fmt(p.rate), fmt(p.normalized),
                    fmt(p.predicted), p.null_point ? "1" : "0"});
    if (!p.null_point && p.predicted > 0) worst = std::max(worst, std::abs(p.normalized / p.predicted - 1.0));
  }
  sink.write_csv("power_rabi.csv",
                 {"g_bs_mhz", "delta_m", "drive_freq_mhz", "rate_per_amplitude", "normalized", "predicted", "null"},
                 rows);
  sink.write_json("power_rabi_summary.json",
                  {{"anchor_rate", r.anchor_rate}, {"max_relative_deviation", worst}, {"warnings", warnings}});
  note(ctx, "max relative deviation from prediction " + fmt(worst));
}

// ---- single erasure check ----------------------------------------------

Mat population_of(const ModeLayout& l, int na, int nb) {
  Mat m = Mat::Zero(l.total(), l.total());
  for (int q = 0; q < l.dim_q; ++q) m(l.index(na, nb, q), l.index(na, nb, q)) = 1.0;
  return m;
}

void cmd_erasure_check(Context& ctx) {
  Section s = open_section(ctx);
  std::vector<std::string> warnings;
  const CheckSpec check = read_check(s, ctx.cfg, warnings);
  CheckMetricsOptions mo;
  mo.pre_idle = s.number("pre_idle_us", 0.0);
  mo.post_select_logical = s.boolean("post_select_logical", true);
  const bool cavity = s.boolean("cavity_noise", true);
  const Cardinal label = cardinal_from_string(s.text("trajectory_state", "+Z", {"+X", "-X", "+Y", "-Y", "+Z", "-Z"}));
  const int points = s.integer("trajectory_points", 101);
  if (points < 2) throw ConfigError("studies.erasure-check.trajectory_points must be >= 2");
  const OutputSink sink = make_sink(ctx, s);

  const NoiseParams noise = cavity ? ctx.cfg.noise : ctx.cfg.noise.transmon_only();
  const DriveSchedule sched = check.schedule();
  const CheckMetrics m = evaluate_check(sched, noise, mo);
  const double p_fn = false_negative_rate(sched, noise, ctx.cfg.readout);

  ModeLayout l = ctx.cfg.layout;
  if (check.pair == AncillaPair::GF) l.dim_q = std::max(l.dim_q, 3);
  const ModeOperators ops = build_mode_operators(l);
  const MixedTrajectory tr = evolve_lindblad(sched, MixedState::from_pure(prepare_cardinal(label, l)),
                                             collapse_operators(noise, ops),
                                             linspace(0.0, sched.total_duration, points));
  std::ofstream os;
  sink.open_csv("erasure_check_trajectory.csv", os);
  std::vector<std::pair<std::string, Mat>> obs = {{"p_e", ops.proj_e}, {"n_a", ops.n_a}, {"n_b", ops.n_b},
                                                  {"p_00", population_of(l, 0, 0)}};
  if (l.dim_q > 2) obs.insert(obs.begin() + 1, {"p_f", ops.proj_f});
  write_trajectory_csv(os, tr, obs);

  json fid = json::object(), flag = json::object();
  for (std::size_t i = 0; i < kCardinals.size(); ++i) {
    fid[to_string(kCardinals[i])] = m.fidelity[i];
    flag[to_string(kCardinals[i])] = m.flag[i];
  }
  sink.write_json("erasure_check.json", {{"check", check_json(check)},
                                         {"p_erasure", m.p_flag},
                                         {"p_00", m.p00},
                                         {"p_pauli", m.p_pauli},
                                         {"p_fn", p_fn},
                                         {"fidelity", fid},
                                         {"flag", flag},
                                         {"truncation", tr.truncation},
                                         {"warnings", warnings}});
  note(ctx, "p_erasure " + fmt(m.p_flag) + "  p_pauli " + fmt(m.p_pauli) + "  p_fn " + fmt(p_fn));
}

// ---- repeated checks ----------------------------------------------------

void cmd_repeated_checks(Context& ctx) {
  Section s = open_section(ctx);
  std::vector<std::string> warnings;
  const CheckSpec check = read_check(s, ctx.cfg, warnings);
  RepeatedCheckConfig rc;
  rc.n_max = s.integer("n_max", rc.n_max);
  rc.echo = s.boolean("echo", rc.echo);
  rc.mode = s.text("mode", "check", {"check", "idle"}) == "check" ? RepeatMode::Check : RepeatMode::Idle;
  rc.inter_check_idle = ctx.cfg.inter_check_idle;
  rc.readout = ctx.cfg.readout;
  if (rc.n_max < 2) throw ConfigError("studies.repeated-checks.n_max must be >= 2");
  const OutputSink sink = make_sink(ctx, s);

  std::vector<std::vector<RepeatedCheckPoint>> traces;
  const ErrorBudget b = repeated_check_budget(check.schedule(), ctx.cfg.noise, rc, &traces);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < traces.size() && i < kCardinals.size(); ++i)
    for (const auto& p : traces[i])
      rows.push_back({to_string(kCardinals[i]), fmt(p.n), fmt(p.success), fmt(p.fidelity), fmt(p.eol_pass),
                      fmt(p.p00)});
  sink.write_csv("repeated_checks.csv", {"state", "n", "success", "fidelity", "eol_pass", "p_00"}, rows);
  sink.write_json("repeated_checks.json", {{"check", check_json(check)},
                                           {"p_erasure", b.p_erasure},
                                           {"p_intrinsic", b.p_intrinsic},
                                           {"p_fp", b.p_FP},
                                           {"p_fn", b.p_FN},
                                           {"p_pauli", b.p_Pauli},
                                           {"n_checks", b.n_checks},
                                           {"warnings", warnings}});
  note(ctx, "per check: erasure " + fmt(b.p_erasure) + "  intrinsic " + fmt(b.p_intrinsic) + "  pauli " +
                fmt(b.p_Pauli));
}

// ---- error scaling ------------------------------------------------------

void cmd_scaling(Context& ctx) {
  Section s = open_section(ctx);
  ScalingConfig c;
  c.chi = s.freq("chi_mhz", c.chi);
  const std::string which = s.text("channel", "both", {"dephasing", "decay", "both"});
  c.n = s.integers("n", c.n);
  c.m_factors = s.integers("m_factors", c.m_factors);
  c.rates = s.numbers("rates_over_chi", c.rates);
  c.optimize = s.boolean("optimize", c.optimize);
  c.fit_last = s.integer("fit_last", c.fit_last);
  c.jobs = ctx.cfg.jobs;
  const OutputSink sink = make_sink(ctx, s);

  std::vector<ScalingChannel> chans;
  if (which != "decay") chans.push_back(ScalingChannel::Dephasing);
  if (which != "dephasing") chans.push_back(ScalingChannel::Decay);
  json summary = json::object();
  for (ScalingChannel ch : chans) {
    const std::string name = ch == ScalingChannel::Dephasing ? "dephasing" : "decay";
    const ScalingResult r = study_error_scaling(c, ch);
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : r.points)
      rows.push_back({fmt(p.n), fmt(p.m), fmt(mhz(p.g_bs)), fmt(p.T_p), fmt(p.coherent_cost), fmt(p.erasure_slope),
                      fmt(p.pauli_slope)});
    sink.write_csv("scaling_" + name + ".csv",
                   {"n", "m", "g_bs_mhz", "T_p_us", "coherent_cost", "erasure_slope", "pauli_slope"}, rows);
    summary[name] = {{"erasure_vs_T", r.erasure_vs_T},
                     {"pauli_vs_g", r.pauli_vs_g},
                     {"pauli_vs_g_per_n", r.pauli_vs_g_per_n},
                     {"pauli_vs_T", r.pauli_vs_T},
                     {"fixed_g_exponent", r.fixed_g_exponent}};
    note(ctx, name + ": erasure~T^" + fmt(r.erasure_vs_T) + "  pauli~g^" + fmt(r.pauli_vs_g) + "  pauli~T^" +
                  fmt(r.pauli_vs_T));
  }
  sink.write_json("scaling.json", summary);
}

// ---- scheme comparison -------------------------------------------------

void cmd_compare_schemes(Context& ctx) {
  Section s = open_section(ctx);
  SchemeConfig c;
  c.chi = s.freq("chi_mhz", ctx.cfg.system.chi_bob);
  c.g_bs = s.freq("g_bs_mhz", c.g_bs);
  c.T_p = s.number("T_p_us", c.T_p);
  c.noise = ctx.cfg.noise;
  c.jobs = ctx.cfg.jobs;
  const OutputSink sink = make_sink(ctx, s);

  const auto rows_in = study_scheme_comparison(c);
  std::vector<std::vector<std::string>> rows;
  json js = json::array();
  for (const auto& r : rows_in) {
    rows.push_back({r.scheme, r.levels, fmt(r.p_erasure), fmt(r.p_pauli), fmt(r.reference_erasure),
                    fmt(r.reference_pauli)});
    js.push_back({{"scheme", r.scheme}, {"levels", r.levels}, {"p_erasure", r.p_erasure}, {"p_pauli", r.p_pauli}});
    note(ctx, r.scheme + " " + r.levels + ": p_erasure " + fmt(r.p_erasure) + "  p_pauli " + fmt(r.p_pauli));
  }
  sink.write_csv("compare_schemes.csv",
                 {"scheme", "levels", "p_erasure", "p_pauli", "reference_p_erasure", "reference_p_pauli"}, rows);
  sink.write_json("compare_schemes.json", js);
}

// ---- projected performance ---------------------------------------------

void cmd_project(Context& ctx) {
  Section s = open_section(ctx);
  ProjectionConfig c;
  c.chi = s.freq("chi_mhz", ctx.cfg.system.chi_bob);
  c.g_bs = s.freq("g_bs_mhz", c.g_bs);
  c.T_p = s.number("T_p_us", c.T_p);
  c.tau_ro = s.number("tau_ro_us", ctx.cfg.readout.tau_ro);
  c.readout_duration = s.number("readout_duration_us", c.readout_duration);
  c.noise.t1_a = c.noise.t1_b = s.number("t1_cavity_us", c.noise.t1_a);
  c.noise.t1_ge = s.number("t1_transmon_us", c.noise.t1_ge);
  c.noise.tphi_ge = s.number("tphi_transmon_us", c.noise.tphi_ge);
  c.system = ctx.cfg.system;
  try {
    c.noise.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("studies.project: ") + e.what());
  }
  const OutputSink sink = make_sink(ctx, s);

  const ProjectionResult r = study_performance_projection(c);
  sink.write_json("project.json", {{"p_intrinsic", r.p_intrinsic},
                                   {"p_pauli_induced", r.p_pauli_induced},
                                   {"p_fp", r.p_fp},
                                   {"readout_dephasing",
                                    {{"gamma_phi_per_us", r.readout.gamma_phi},
                                     {"p_pauli", r.readout.p_pauli},
                                     {"chi_cr_mhz", mhz(c.system.chi_cr)}}},
                                   {"chi_cr_estimate_mhz", mhz(r.chi_cr_estimate)}});
  note(ctx, "p_intrinsic " + fmt(r.p_intrinsic) + "  p_pauli_induced " + fmt(r.p_pauli_induced) + "  p_fp " +
                fmt(r.p_fp));
}

// ---- CPHASE -------------------------------------------------------------

void cmd_cphase(Context& ctx) {
  Section s = open_section(ctx);
  const double chi = s.freq("chi_mhz", ctx.cfg.system.chi_bob);
  CphaseParams op = cphase_operating_point(chi);
  op.g_bs = s.freq("g_bs_mhz", op.g_bs);
  op.sigma = s.number("sigma_us", op.sigma);
  op.n_chop = s.number("n_chop", op.n_chop);
  op.amplitude = s.freq("amplitude_mhz", op.amplitude);
  op.delta = s.freq("delta_mhz", op.delta);
  const auto thetas = s.numbers("theta_rad", {0.0, 0.5 * kPi, kPi});
  const bool with_noise = s.boolean("with_noise", false);
  const int ramsey_points = s.integer("ramsey_points", 0);
  const OutputSink sink = make_sink(ctx, s);

  const NoiseParams noise = with_noise ? ctx.cfg.noise.transmon_only() : NoiseParams::none();
  std::vector<std::vector<std::string>> rows, ramsey;
  json js = json::array();
  const auto phases = ramsey_points > 0 ? linspace(0.0, kTwoPi, ramsey_points + 1) : std::vector<double>{};
  for (double theta : thetas) {
    CphaseParams p = op;
    p.relative_phase = calibrate_cphase_phase(p, chi, theta);
    const CphaseSummary r = cphase_joint_snap(p, chi, noise);
    rows.push_back({fmt(theta), fmt(p.relative_phase), fmt(r.conditional_phase), fmt(r.phases[0]), fmt(r.phases[1]),
                    fmt(r.phases[2]), fmt(r.phases[3]), fmt(r.populations[0]), fmt(r.populations[1]),
                    fmt(r.populations[2]), fmt(r.populations[3]), fmt(r.leakage)});
    json j = {{"theta_rad", theta},
              {"relative_phase_rad", p.relative_phase},
              {"conditional_phase_rad", r.conditional_phase},
              {"leakage", r.leakage}};
    if (!phases.empty()) {
      const RamseyTrace t0 = ramsey_phase_probe(p, chi, 0, phases, noise);
      const RamseyTrace t1 = ramsey_phase_probe(p, chi, 1, phases, noise);
      for (std::size_t k = 0; k < phases.size(); ++k)
        ramsey.push_back({fmt(theta), fmt(phases[k]), fmt(t0.signal[k]), fmt(t1.signal[k])});
      j["ramsey_offset_difference_rad"] = std::remainder(t0.fitted_offset - t1.fitted_offset, kTwoPi);
    }
    js.push_back(j);
    note(ctx, "theta " + fmt(theta) + ": conditional phase " + fmt(r.conditional_phase) + "  leakage " +
                  fmt(r.leakage));
  }
  sink.write_csv("cphase.csv",
                 {"theta_rad", "relative_phase_rad", "conditional_phase_rad", "phi_00_rad", "phi_01_rad",
                  "phi_10_rad", "phi_11_rad", "pop_00", "pop_01", "pop_10", "pop_11", "leakage"},
                 rows);
  if (!ramsey.empty())
    sink.write_csv("cphase_ramsey.csv", {"theta_rad", "analysis_phase_rad", "p_plus_alice0", "p_plus_alice1"},
                   ramsey);
  sink.write_json("cphase.json", {{"operating_point",
                                   {{"g_bs_mhz", mhz(op.g_bs)},
                                    {"sigma_us", op.sigma},
                                    {"n_chop", op.n_chop},
                                    {"amplitude_mhz", mhz(op.amplitude)},
                                    {"delta_mhz", mhz(op.delta)}}},
                                  {"gates", js}});
}

// ---- joint parity -------------------------------------------------------

void cmd_parity(Context& ctx) {
  Section s = open_section(ctx);
  const double chi = s.freq("chi_mhz", ctx.cfg.system.chi_bob);
  const AncillaPair variant = read_pair(s, "variant");
  ParityOptions po;
  po.idealized = s.boolean("idealized", po.idealized);
  po.pulse_width = s.number("pulse_width_us", po.pulse_width);
  po.extra_hold = s.number("extra_hold_us", po.extra_hold);
  const bool with_noise = s.boolean("with_noise", true);
  const int max_photons = s.integer("max_photons", 2);
  const OutputSink sink = make_sink(ctx, s);

  ModeLayout l = ctx.cfg.layout;
  if (variant == AncillaPair::GF) l.dim_q = std::max(l.dim_q, 3);
  const NoiseParams noise = with_noise ? ctx.cfg.noise : NoiseParams::none();
  std::vector<std::pair<int, int>> inputs;
  for (int na = 0; na < l.dim_a; ++na)
    for (int nb = 0; nb < l.dim_b; ++nb)
      if (na + nb <= max_photons) inputs.emplace_back(na, nb);
  const auto out = parallel_map(inputs.size(), ctx.cfg.jobs, [&](std::size_t i) {
    const auto [na, nb] = inputs[i];
    return run_joint_parity_check(MixedState::from_pure(basis_state(l, na, nb)), variant, noise, po, chi);
  });
  std::vector<std::vector<std::string>> rows;
  double worst = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto [na, nb] = inputs[i];
    const bool even = (na + nb) % 2 == 0;
    const double correct = even ? out[i].p_even() : out[i].p_g;
    worst = std::max(worst, 1.0 - correct);
    rows.push_back({fmt(na), fmt(nb), even ? "even" : "odd", fmt(out[i].p_g), fmt(out[i].p_e), fmt(out[i].p_f),
                    fmt(correct)});
  }
  sink.write_csv("parity.csv", {"n_a", "n_b", "parity", "p_g", "p_e", "p_f", "p_correct"}, rows);
  sink.write_json("parity.json", {{"worst_error", worst}, {"inputs", inputs.size()}});
  note(ctx, "worst parity assignment error " + fmt(worst));
}

// ---- tune-up ------------------------------------------------------------

json params_json(const CheckParams& p) {
  return {{"T_p_us", p.T_p},
          {"g_bs_mhz", mhz(p.g_bs)},
          {"amplitude_mhz", mhz(p.amplitude)},
          {"detuning_mhz", mhz(p.detuning)},
          {"delta_mhz", mhz(p.delta)},
          {"sigma_us", p.sigma}};
}

void cmd_tuneup(Context& ctx) {
  Section s = open_section(ctx);
  const double chi = s.freq("chi_mhz", ctx.cfg.system.chi_bob);
  const double X = std::abs(chi);
  const std::string mode = s.text("mode", "square", {"square", "gaussian"});
  json results;
  std::vector<std::vector<std::string>> trace_rows, align_rows;

  if (mode == "square") {
    const int n = s.integer("n", 1);
    const int m = s.integer("m", 2);
    SquareTuneOptions o;
    o.chi = chi;
    o.t_r = s.number("t_r_us", 0.0);
    o.t_ramp = s.number("t_ramp_us", 0.0);
    o.target_cost = s.number("target_cost", o.target_cost);
    o.max_iter = s.integer("max_iter", o.max_iter);
    const auto factors = s.numbers("alignment_factors", {});
    const ErasureCheckGuess g = erasure_check_guess(chi, n, m);
    CheckParams guess{g.T_p, g.g_bs, g.amplitude, g.detuning, g.delta, 0.0};
    if (o.t_r > 0) guess.amplitude = 0.5 * kPi / (g.T_p - o.t_r);
    const Bounds b{{0.5 * g.T_p, 0.0, 0.0, -X, -X, 0.0},
                   {2.0 * g.T_p, ctx.cfg.system.g_bs_max, X, X, X, 0.0}};
    const OutputSink sink = make_sink(ctx, s);
    const TuneupResult r = tune_square_erasure_check(guess, b, o);
    for (std::size_t i = 0; i < r.cost_trace.size(); ++i) trace_rows.push_back({fmt(int(i)), fmt(r.cost_trace[i])});
    results = {{"mode", mode},
               {"guess", params_json(guess)},
               {"params", params_json(r.params)},
               {"iterations", r.iterations},
               {"converged", r.converged},
               {"final_cost", r.final_cost()}};
    if (!factors.empty()) {
      const SquareCheckParams tuned = to_square(r.params, o);
      std::vector<double> tps;
      for (double f : factors) tps.push_back(f * tuned.T_p);
      json rows = json::array();
      for (const auto& a : spectroscopy_alignment(tuned, chi, tps)) {
        rows.push_back({{"T_p_us", a.T_p}, {"gap_mhz", mhz(a.gap)}, {"split_mhz", mhz(a.split)},
                        {"peak_00_mhz", mhz(a.peak_00)}});
        for (std::size_t k = 0; k < a.detunings.size(); ++k)
          align_rows.push_back({fmt(a.T_p), fmt(mhz(a.detunings[k])), fmt(a.p00[k]), fmt(a.p01[k]), fmt(a.p10[k])});
      }
      results["alignment"] = rows;
      sink.write_csv("tuneup_alignment.csv", {"T_p_us", "freq_mhz", "p_e_00", "p_e_01", "p_e_10"}, align_rows);
    }
    sink.write_csv("tuneup_cost_trace.csv", {"iteration", "cost"}, trace_rows);
    sink.write_json("tuneup.json", results);
    note(ctx, "square tune-up cost " + fmt(r.final_cost()) + (r.converged ? " (converged)" : " (not converged)"));
    if (!r.converged) throw std::runtime_error("tune-up did not reach the target cost");
    return;
  }

  GaussianTuneConfig gc;
  gc.chi = chi;
  gc.g_bs_max = ctx.cfg.system.g_bs_max;
  gc.g_bs = s.freq("g_bs_mhz", 1.2 * X);
  gc.sigma = s.number("sigma_us", 0.3);
  gc.n_chop = s.number("n_chop", gc.n_chop);
  gc.selectivity_threshold = s.number("selectivity_threshold", gc.selectivity_threshold);
  gc.return_tolerance = s.number("return_tolerance", gc.return_tolerance);
  gc.max_loops = s.integer("max_loops", gc.max_loops);
  const OutputSink sink = make_sink(ctx, s);
  const TuneupResult r = tune_gaussian_erasure_check(gc);
  for (std::size_t i = 0; i < r.cost_trace.size(); ++i) trace_rows.push_back({fmt(int(i)), fmt(r.cost_trace[i])});
  sink.write_csv("tuneup_cost_trace.csv", {"iteration", "cost"}, trace_rows);
  sink.write_json("tuneup.json", {{"mode", mode},
                                  {"params", params_json(r.params)},
                                  {"iterations", r.iterations},
                                  {"converged", r.converged},
                                  {"final_cost", r.final_cost()}});
  note(ctx, "gaussian tune-up cost " + fmt(r.final_cost()) + (r.converged ? " (converged)" : " (not converged)"));
  if (!r.converged) throw std::runtime_error("tune-up did not reach the target cost");
}

// ---- chevron ------------------------------------------------------------

void cmd_chevron(Context& ctx) {
  Section s = open_section(ctx);
  const double g = s.freq("g_bs_mhz", kTwoPi * 1.04);
  const double w0 = s.freq("omega0_mhz", 0.0);
  const double span = s.freq("freq_span_mhz", kTwoPi * 3.0);
  const int nf = s.integer("freq_points", 41);
  const double tmax = s.number("t_max_us", 2.0);
  const int nt = s.integer("time_points", 81);
  ChevronSimOptions so;
  so.ramp = s.number("ramp_us", 0.0);
  const bool with_noise = s.boolean("with_noise", false);
  const int max_iter = s.integer("max_iter", 500);
  const auto dac = s.numbers("dac", {});
  const auto dac_g = s.freqs("dac_g_bs_mhz", {});
  if (dac.size() != dac_g.size()) throw ConfigError("studies.chevron: dac and dac_g_bs_mhz differ in length");
  if (nf < 3 || nt < 8) throw ConfigError("studies.chevron: grid too small");
  const OutputSink sink = make_sink(ctx, s);

  if (with_noise) so.noise = &ctx.cfg.noise;
  std::vector<double> freqs = linspace(w0 - span, w0 + span, nf);
  const ChevronData d = simulate_chevron(g, w0, linspace(0.0, tmax, nt), freqs, so);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < d.freqs.size(); ++i)
    for (std::size_t j = 0; j < d.times.size(); ++j)
      rows.push_back({fmt(mhz(d.freqs[i])), fmt(d.times[j]), fmt(d.p1[i][j])});
  sink.write_csv("chevron.csv", {"freq_mhz", "time_us", "p_bob_1"}, rows);

  json results;
  ChevronFitResult f;
  bool ok = true;
  try {
    f = fit_chevron(d, max_iter);
  } catch (const FitError& e) {
    f = e.best;
    ok = false;
    results["fit_error"] = e.what();
  }
  results["fit"] = {{"g_bs_mhz", mhz(f.g_bs)},
                    {"omega0_mhz", mhz(f.omega0)},
                    {"A", f.A},
                    {"c", f.c},
                    {"phi", f.phi},
                    {"residual_norm", f.residual_norm},
                    {"std_errors", f.std_errors},
                    {"iterations", f.iterations}};
  results["truth"] = {{"g_bs_mhz", mhz(g)}, {"omega0_mhz", mhz(w0)}};
  results["g_bs_relative_error"] = std::abs(f.g_bs - g) / g;
  if (!dac.empty()) {
    const AmplitudePolynomial p = fit_amplitude_polynomial(dac, dac_g);
    std::vector<double> c;
    for (double v : p.coeffs) c.push_back(mhz(v));
    results["amplitude_polynomial"] = {{"coeffs_mhz", c}, {"residual_rms_mhz", mhz(p.residual_rms)},
                                       {"monotonic", p.monotonic}};
  }
  sink.write_json("chevron_fit.json", results);
  note(ctx, "fitted g_bs " + fmt(mhz(f.g_bs)) + " MHz (truth " + fmt(mhz(g)) + ")");
  if (!ok) throw std::runtime_error("chevron fit failed: " + results["fit_error"].get<std::string>());
}

// ---- error-channel sampler ---------------------------------------------

void cmd_sample_channel(Context& ctx) {
  Section s = open_section(ctx);
  const double p = s.number("p", 1e-3);
  const double r_e = s.number("erasure_fraction", 0.98);
  const double p_fn = s.number("p_fn", 0.034);
  const GateKind gate = s.text("gate", "cz", {"cz", "cx"}) == "cz" ? GateKind::CZ : GateKind::CX;
  const double draws = s.number("draws", 1e6);
  if (draws < 1 || draws != std::floor(draws)) throw ConfigError("studies.sample-channel.draws must be a positive integer");
  const OutputSink sink = make_sink(ctx, s);

  const ChannelStats st = sample_channel_stats(p, r_e, p_fn, gate, std::uint64_t(draws), ctx.cfg.seed, ctx.cfg.jobs);
  sink.write_json("sample_channel.json", {{"draws", st.draws},
                                          {"erasure_freq", st.erasure_freq},
                                          {"erasure_expected", st.erasure_expected},
                                          {"erasure_sigma", st.erasure_sigma},
                                          {"missed_freq", st.missed_freq},
                                          {"missed_expected", st.missed_expected},
                                          {"missed_sigma", st.missed_sigma},
                                          {"pauli_freq", st.pauli_freq}});
  note(ctx, "erasure frequency " + fmt(st.erasure_freq) + " (expected " + fmt(st.erasure_expected) + ")");
}

}  // namespace

const std::map<std::string, std::pair<std::string, Command>>& commands() {
  static const std::map<std::string, std::pair<std::string, Command>> table = {
      {"spectroscopy", {"probe spectroscopy map with oracle overlay and ridge deviations", cmd_spectroscopy}},
      {"power-rabi", {"normalized power-Rabi rates against the matrix-element prediction", cmd_power_rabi}},
      {"erasure-check", {"single erasure check: error rates and a trajectory", cmd_erasure_check}},
      {"repeated-checks", {"repeated erasure checks and the per-check error budget", cmd_repeated_checks}},
      {"scaling", {"error-rate scaling exponents against pulse duration and coupling", cmd_scaling}},
      {"compare-schemes", {"photon-number vs parity checks with g-e and g-f ancillas", cmd_compare_schemes}},
      {"project", {"projected intrinsic, Pauli and false-positive rates", cmd_project}},
      {"cphase", {"joint-SNAP controlled-phase gates and Ramsey probes", cmd_cphase}},
      {"parity", {"joint-parity check on Fock inputs", cmd_parity}},
      {"tuneup", {"square or chopped-Gaussian erasure-check tune-up", cmd_tuneup}},
      {"chevron", {"simulated beamsplitter chevron and its fit", cmd_chevron}},
      {"sample-channel", {"Monte Carlo draws from the two-qubit gate error channel", cmd_sample_channel}},
  };
  return table;
}

}  // namespace dualrail::cli
