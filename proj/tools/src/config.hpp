#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualrail/evolver.hpp"
#include "dualrail/protocols.hpp"
#include "dualrail/studies.hpp"
#include "json.hpp"

namespace dualrail::cli {

using json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StudyConfig {
  std::uint64_t seed = 12345;
  int jobs = 0;
  SystemParams system{};
  json system_mhz = json::object();  // as given, for the echo
  NoiseParams noise{};
  ModeLayout layout{4, 4, 2};
  ReadoutModel readout{};
  double inter_check_idle = 0.65;
  json studies = json::object();
};

StudyConfig parse_config(const json& j);
// "defaults" selects the built-in configuration.
StudyConfig load_config(const std::string& path);
// Base configuration in file units (MHz, us); the studies block is copied verbatim.
json to_json(const StudyConfig& c);

// One study block: every read records the resolved value, unknown keys are rejected by finish().
class Section {
 public:
  Section(const json& in, std::string name);

  double number(const std::string& key, double def);
  double freq(const std::string& key_mhz, double def_rad_per_us);  // returns rad/us
  int integer(const std::string& key, int def);
  bool boolean(const std::string& key, bool def);
  std::string text(const std::string& key, const std::string& def, const std::vector<std::string>& allowed);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& def);
  std::vector<double> freqs(const std::string& key_mhz, const std::vector<double>& def_rad_per_us);
  std::vector<int> integers(const std::string& key, const std::vector<int>& def);

  void finish() const;
  const json& resolved() const { return out_; }
  const std::string& name() const { return name_; }

 private:
  const json* find(const std::string& key);
  json in_;
  json out_ = json::object();
  std::string name_;
  std::vector<std::string> used_;
};

}  // namespace dualrail::cli
