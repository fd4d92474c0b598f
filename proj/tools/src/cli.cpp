#include "cli.hpp"

#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "dualrail/tuneup.hpp"

namespace dualrail::cli {

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"dual-rail erasure-check simulations", "dualrail"};
  std::string config = "defaults";
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int jobs = 0;
  app.add_option("--config", config, "JSON config file, or 'defaults'");
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out", out_dir, "output directory");
  auto* jobs_opt = app.add_option("--jobs", jobs, "worker threads (0: all cores)");
  app.require_subcommand(1);
  for (const auto& [name, entry] : commands()) app.add_subcommand(name, entry.first)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  Context ctx;
  ctx.command = app.get_subcommands().front()->get_name();
  ctx.out_dir = out_dir;
  ctx.log = &out;
  try {
    ctx.cfg = load_config(config);
    if (*seed_opt) ctx.cfg.seed = seed;
    if (*jobs_opt) ctx.cfg.jobs = jobs;
    commands().at(ctx.command).second(ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}

}  // namespace dualrail::cli
