#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace dualrail::cli {

// Shortest round-trip formatting, so outputs are reproducible byte for byte.
std::string fmt(double x);
std::string fmt(int x);

class OutputSink {
 public:
  OutputSink(std::filesystem::path dir, std::string command, json config, std::uint64_t seed);

  std::filesystem::path write_json(const std::string& file, const json& results) const;
  std::filesystem::path write_csv(const std::string& file, const std::vector<std::string>& header,
                                  const std::vector<std::vector<std::string>>& rows) const;
  // Opens a CSV that already carries the config and seed comment lines.
  std::filesystem::path open_csv(const std::string& file, std::ofstream& os) const;
  const std::vector<std::filesystem::path>& written() const { return written_; }

 private:
  std::filesystem::path dir_;
  std::string command_;
  json config_;
  std::uint64_t seed_;
  mutable std::vector<std::filesystem::path> written_;
};

}  // namespace dualrail::cli
