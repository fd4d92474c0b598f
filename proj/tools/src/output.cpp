#include "output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace dualrail::cli {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string fmt(int x) { return std::to_string(x); }

OutputSink::OutputSink(std::filesystem::path dir, std::string command, json config, std::uint64_t seed)
    : dir_(std::move(dir)), command_(std::move(command)), config_(std::move(config)), seed_(seed) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir_.string() + ": " + ec.message());
}

std::filesystem::path OutputSink::write_json(const std::string& file, const json& results) const {
  const auto path = dir_ / file;
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  json doc;
  doc["command"] = command_;
  doc["seed"] = seed_;
  doc["config"] = config_;
  doc["results"] = results;
  os << doc.dump(2) << '\n';
  written_.push_back(path);
  return path;
}

std::filesystem::path OutputSink::open_csv(const std::string& file, std::ofstream& os) const {
  const auto path = dir_ / file;
  os.open(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << "# command: " << command_ << '\n' << "# seed: " << seed_ << '\n' << "# config: " << config_.dump() << '\n';
  written_.push_back(path);
  return path;
}

std::filesystem::path OutputSink::write_csv(const std::string& file, const std::vector<std::string>& header,
                                            const std::vector<std::vector<std::string>>& rows) const {
  std::ofstream os;
  const auto path = open_csv(file, os);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
  return path;
}

}  // namespace dualrail::cli
