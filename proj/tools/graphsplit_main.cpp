#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "graphsplit/graphsplit.h"

namespace {

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graphsplit: graph-based splitting schemes for monotone inclusions"};
  app.set_version_flag("--version", std::string(gs_version()));
  std::string command;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  app.add_option("command", command, "check | run | sweep | bench | equivalence")
      ->required()
      ->check(CLI::IsMember({"check", "run", "sweep", "bench", "equivalence"}));
  app.add_option("-c,--config", config_path, "JSON configuration file");
  app.add_option("-s,--set", overrides, "override a config entry, key.path=value (repeatable)");
  app.add_option("-o,--out", out_dir, "output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string config = "{}";
  if (!config_path.empty() && !read_file(config_path, config)) {
    std::cerr << "error: cannot read config file '" << config_path << "'\n";
    return 2;
  }
  for (const auto& o : overrides) {
    char* next = nullptr;
    if (gs_config_set(config.c_str(), o.c_str(), &next) != GS_OK) {
      std::cerr << "error: " << gs_last_error() << "\n";
      return 2;
    }
    config = next;
    gs_string_free(next);
  }

  char* message = nullptr;
  int exit_code = 1;
  if (gs_run_command(command.c_str(), config.c_str(), out_dir.c_str(), &message, &exit_code) != GS_OK) {
    std::cerr << "error: " << gs_last_error() << "\n";
    return 1;
  }
  std::string text = message ? message : "";
  gs_string_free(message);
  if (!text.empty() && text.back() != '\n') text += '\n';
  (exit_code == 0 ? std::cout : std::cerr) << text;
  return exit_code;
}
