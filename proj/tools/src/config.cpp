#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace dualrail::cli {

namespace {

const json* member(const json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

void reject_unknown(const json& j, const std::set<std::string>& keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double get_num(const json& j, const std::string& key, double def, const std::string& where) {
  const json* v = member(j, key);
  if (!v) return def;
  if (!v->is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v->get<double>();
}

// null switches a channel off.
double get_time(const json& j, const std::string& key, double def, const std::string& where) {
  const json* v = member(j, key);
  if (!v) return def;
  if (v->is_null()) return kDisabled;
  if (!v->is_number()) throw ConfigError(where + "." + key + " must be a number or null");
  return v->get<double>();
}

json time_out(double t) { return std::isinf(t) ? json(nullptr) : json(t); }

}  // namespace

StudyConfig parse_config(const json& j) {
  StudyConfig c;
  reject_unknown(j, {"seed", "jobs", "system", "noise", "layout", "readout", "studies"}, "config");
  if (const json* v = member(j, "seed")) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0))
      throw ConfigError("seed must be a nonnegative integer");
    c.seed = v->get<std::uint64_t>();
  }
  if (const json* v = member(j, "jobs")) {
    if (!v->is_number_integer()) throw ConfigError("jobs must be an integer");
    c.jobs = v->get<int>();
  }
  {
    // Always resolved from MHz so that the echoed values reproduce the run exactly.
    const json none = json::object();
    const json& s = member(j, "system") ? *member(j, "system") : none;
    reject_unknown(s,
                   {"chi_bob_mhz", "chi_alice_mhz", "kappa_readout_mhz", "alpha_mhz", "chi_tr_mhz", "chi_ct_mhz",
                    "chi_cr_mhz", "nbar_readout", "g_bs_max_mhz"},
                   "system");
    auto& p = c.system;
    auto in = [&](const char* key, double def) {
      const double v = get_num(s, key, def, "system");
      c.system_mhz[key] = v;
      return v;
    };
    p.chi_bob = kTwoPi * in("chi_bob_mhz", -1.066);
    p.chi_alice = kTwoPi * in("chi_alice_mhz", -0.7773);
    p.kappa_readout = kTwoPi * in("kappa_readout_mhz", 1.77);
    p.alpha = kTwoPi * in("alpha_mhz", -185.0);
    p.chi_tr = kTwoPi * in("chi_tr_mhz", -0.86);
    p.chi_ct = kTwoPi * in("chi_ct_mhz", -1.066);
    p.chi_cr = kTwoPi * in("chi_cr_mhz", 0.0025);
    p.nbar_readout = in("nbar_readout", p.nbar_readout);
    p.g_bs_max = kTwoPi * in("g_bs_max_mhz", 2.05);
  }
  if (const json* s = member(j, "noise")) {
    reject_unknown(*s,
                   {"t1_a_us", "t1_b_us", "t1_ge_us", "tphi_ge_us", "t2r_ge_us", "t1_fe_us", "tphi_gf_us", "nth_a",
                    "nth_b", "heating"},
                   "noise");
    auto& n = c.noise;
    n.t1_a = get_time(*s, "t1_a_us", n.t1_a, "noise");
    n.t1_b = get_time(*s, "t1_b_us", n.t1_b, "noise");
    n.t1_ge = get_time(*s, "t1_ge_us", n.t1_ge, "noise");
    if (member(*s, "tphi_ge_us") && member(*s, "t2r_ge_us"))
      throw ConfigError("give either noise.tphi_ge_us or noise.t2r_ge_us, not both");
    if (member(*s, "t2r_ge_us")) {
      const double t2r = get_num(*s, "t2r_ge_us", 0.0, "noise");
      try {
        n.tphi_ge = tphi_from_t2r(n.t1_ge, t2r);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("noise.t2r_ge_us: ") + e.what());
      }
    } else {
      n.tphi_ge = get_time(*s, "tphi_ge_us", n.tphi_ge, "noise");
    }
    n.t1_fe = get_time(*s, "t1_fe_us", n.t1_fe, "noise");
    n.tphi_gf = get_time(*s, "tphi_gf_us", n.tphi_gf, "noise");
    n.nth_a = get_num(*s, "nth_a", n.nth_a, "noise");
    n.nth_b = get_num(*s, "nth_b", n.nth_b, "noise");
    if (const json* h = member(*s, "heating")) {
      if (!h->is_boolean()) throw ConfigError("noise.heating must be a boolean");
      n.heating = h->get<bool>();
    }
  }
  if (const json* s = member(j, "layout")) {
    reject_unknown(*s, {"dim_a", "dim_b", "dim_q"}, "layout");
    c.layout.dim_a = int(get_num(*s, "dim_a", c.layout.dim_a, "layout"));
    c.layout.dim_b = int(get_num(*s, "dim_b", c.layout.dim_b, "layout"));
    c.layout.dim_q = int(get_num(*s, "dim_q", c.layout.dim_q, "layout"));
  }
  if (const json* s = member(j, "readout")) {
    reject_unknown(*s,
                   {"tau_ro_us", "pre_projection_fraction", "add_readout_dephasing", "readout_pauli",
                    "inter_check_idle_us"},
                   "readout");
    auto& r = c.readout;
    r.tau_ro = get_num(*s, "tau_ro_us", r.tau_ro, "readout");
    r.pre_projection_fraction = get_num(*s, "pre_projection_fraction", r.pre_projection_fraction, "readout");
    if (const json* b = member(*s, "add_readout_dephasing")) {
      if (!b->is_boolean()) throw ConfigError("readout.add_readout_dephasing must be a boolean");
      r.add_readout_dephasing = b->get<bool>();
    }
    r.readout_pauli = get_num(*s, "readout_pauli", r.readout_pauli, "readout");
    c.inter_check_idle = get_num(*s, "inter_check_idle_us", c.inter_check_idle, "readout");
  }
  if (const json* s = member(j, "studies")) {
    if (!s->is_object()) throw ConfigError("studies must be an object");
    c.studies = *s;
  }
  try {
    c.system.validate();
    c.noise.validate();
    c.layout.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (c.readout.tau_ro < 0 || c.readout.pre_projection_fraction < 0 || c.readout.pre_projection_fraction > 1 ||
      c.inter_check_idle < 0 || c.readout.readout_pauli < 0 || c.readout.readout_pauli > 1)
    throw ConfigError("readout times must be >= 0 and fractions within [0,1]");
  return c;
}

StudyConfig load_config(const std::string& path) {
  if (path == "defaults") return parse_config(json::object());
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse config file " + path + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const StudyConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  j["system"] = c.system_mhz;
  const auto& n = c.noise;
  j["noise"] = {{"t1_a_us", time_out(n.t1_a)},
                {"t1_b_us", time_out(n.t1_b)},
                {"t1_ge_us", time_out(n.t1_ge)},
                {"tphi_ge_us", time_out(n.tphi_ge)},
                {"t1_fe_us", time_out(n.resolved_t1_fe())},
                {"tphi_gf_us", time_out(n.resolved_tphi_gf())},
                {"nth_a", n.nth_a},
                {"nth_b", n.nth_b},
                {"heating", n.heating}};
  j["layout"] = {{"dim_a", c.layout.dim_a}, {"dim_b", c.layout.dim_b}, {"dim_q", c.layout.dim_q}};
  j["readout"] = {{"tau_ro_us", c.readout.tau_ro},
                  {"pre_projection_fraction", c.readout.pre_projection_fraction},
                  {"add_readout_dephasing", c.readout.add_readout_dephasing},
                  {"readout_pauli", c.readout.readout_pauli},
                  {"inter_check_idle_us", c.inter_check_idle}};
  j["studies"] = c.studies;
  return j;
}

Section::Section(const json& in, std::string name) : in_(in.is_null() ? json::object() : in), name_(std::move(name)) {
  if (!in_.is_object()) throw ConfigError("studies." + name_ + " must be an object");
}

const json* Section::find(const std::string& key) {
  used_.push_back(key);
  return member(in_, key);
}

double Section::number(const std::string& key, double def) {
  const json* v = find(key);
  double x = def;
  if (v) {
    if (!v->is_number()) throw ConfigError("studies." + name_ + "." + key + " must be a number");
    x = v->get<double>();
  }
  if (!std::isfinite(x)) throw ConfigError("studies." + name_ + "." + key + " must be finite");
  out_[key] = x;
  return x;
}

double Section::freq(const std::string& key, double def) { return kTwoPi * number(key, def / kTwoPi); }

int Section::integer(const std::string& key, int def) {
  const json* v = find(key);
  int x = def;
  if (v) {
    if (!v->is_number_integer()) throw ConfigError("studies." + name_ + "." + key + " must be an integer");
    x = v->get<int>();
  }
  out_[key] = x;
  return x;
}

bool Section::boolean(const std::string& key, bool def) {
  const json* v = find(key);
  bool x = def;
  if (v) {
    if (!v->is_boolean()) throw ConfigError("studies." + name_ + "." + key + " must be a boolean");
    x = v->get<bool>();
  }
  out_[key] = x;
  return x;
}

std::string Section::text(const std::string& key, const std::string& def, const std::vector<std::string>& allowed) {
  const json* v = find(key);
  std::string x = def;
  if (v) {
    if (!v->is_string()) throw ConfigError("studies." + name_ + "." + key + " must be a string");
    x = v->get<std::string>();
  }
  if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), x) == allowed.end())
    throw ConfigError("studies." + name_ + "." + key + ": unsupported value '" + x + "'");
  out_[key] = x;
  return x;
}

std::vector<double> Section::numbers(const std::string& key, const std::vector<double>& def) {
  const json* v = find(key);
  std::vector<double> x = def;
  if (v) {
    if (!v->is_array()) throw ConfigError("studies." + name_ + "." + key + " must be an array");
    x.clear();
    for (const auto& e : *v) {
      if (!e.is_number()) throw ConfigError("studies." + name_ + "." + key + " must hold numbers");
      x.push_back(e.get<double>());
    }
  }
  out_[key] = x;
  return x;
}

std::vector<double> Section::freqs(const std::string& key, const std::vector<double>& def) {
  std::vector<double> d;
  for (double v : def) d.push_back(v / kTwoPi);
  auto x = numbers(key, d);
  for (double& v : x) v *= kTwoPi;
  return x;
}

std::vector<int> Section::integers(const std::string& key, const std::vector<int>& def) {
  const json* v = find(key);
  std::vector<int> x = def;
  if (v) {
    if (!v->is_array()) throw ConfigError("studies." + name_ + "." + key + " must be an array");
    x.clear();
    for (const auto& e : *v) {
      if (!e.is_number_integer()) throw ConfigError("studies." + name_ + "." + key + " must hold integers");
      x.push_back(e.get<int>());
    }
  }
  out_[key] = x;
  return x;
}

void Section::finish() const {
  for (auto it = in_.begin(); it != in_.end(); ++it)
    if (std::find(used_.begin(), used_.end(), it.key()) == used_.end())
      throw ConfigError("unknown key '" + it.key() + "' in studies." + name_);
}

}  // namespace dualrail::cli
