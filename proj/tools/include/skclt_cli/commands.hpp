#pragma once

#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include "skclt_cli/config.hpp"

namespace skclt::cli {

struct RunContext {
  std::ostream* out = nullptr;  // CSV when config.csv is empty
  std::ostream* err = nullptr;  // metadata when no sidecar path is known
  std::string build_tag;
  std::string timestamp;        // only ever written to the metadata
  bool seed_from_env = false;
};

const std::vector<std::string>& subcommands();

// Runs one subcommand. Errors propagate as exceptions.
void run(const std::string& subcommand, const ExperimentConfig& config, RunContext& ctx);

// {"error": {"code": ..., "message": ..., ...}}
std::string error_json(const std::exception& error);

}  // namespace skclt::cli
