#pragma once

#include <functional>
#include <map>
#include <ostream>
#include <string>

#include "config.hpp"
#include "output.hpp"

namespace dualrail::cli {

struct Context {
  StudyConfig cfg;
  std::string command;
  std::filesystem::path out_dir;
  std::ostream* log = nullptr;
};

using Command = std::function<void(Context&)>;

// Subcommand name -> (one-line description, handler).
const std::map<std::string, std::pair<std::string, Command>>& commands();

}  // namespace dualrail::cli
