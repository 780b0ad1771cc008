#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <charconv>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "skclt/error.hpp"
#include "skclt_cli/commands.hpp"
#include "skclt_cli/config.hpp"

#ifndef SKCLT_BUILD_TAG
#define SKCLT_BUILD_TAG "skclt-unknown"
#endif

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw skclt::InvalidArgument("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Overrides {
  std::string config_path;
  std::optional<int> jobs;
  std::optional<double> beta;
  std::optional<double> h;
  std::string csv;
  std::string json;
};

const std::map<std::string, std::string> kAbout = {
    {"solve-q", "solve the fixed-point equation for q"},
    {"simulate", "per-disorder moments of X, Y and the overlap"},
    {"mcmc", "Y trace from a Glauber replica pair"},
    {"check-derivative", "finite differences against analytic path derivatives"},
    {"clt-report", "discrepancy between replica products and Gaussian moments"},
    {"sweep", "discrepancy over a list of N with a log-log fit"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-size experiments for weighted spin averages in the SK model"};
  app.require_subcommand(1, 1);
  Overrides ov;
  for (const auto& name : skclt::cli::subcommands()) {
    auto* sub = app.add_subcommand(name, kAbout.at(name));
    sub->set_help_flag("--help", "print help");
    sub->add_option("--config", ov.config_path, "key = value experiment file");
    sub->add_option("--jobs", ov.jobs, "worker thread cap");
    sub->add_option("--beta", ov.beta, "inverse temperature");
    sub->add_option("--h", ov.h, "external field");
    sub->add_option("--csv", ov.csv, "CSV output path (default stdout)");
    sub->add_option("--json", ov.json, "metadata output path");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << R"({"error":{"code":"usage","message":)" << nlohmann::json(e.what()).dump() << "}}\n";
    return 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    skclt::cli::ExperimentConfig config =
        skclt::cli::parse_config(ov.config_path.empty() ? std::string() : read_file(ov.config_path));
    if (ov.jobs) config.jobs = *ov.jobs;
    if (ov.beta) config.beta = *ov.beta;
    if (ov.h) config.h = *ov.h;
    if (!ov.csv.empty()) config.csv = ov.csv;
    if (!ov.json.empty()) config.json = ov.json;
    skclt::cli::RunContext ctx;
    if (const char* env = std::getenv("SKCLT_SEED"); env && *env) {
      std::uint64_t seed = 0;
      const std::string text = env;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw skclt::ConfigError({"SKCLT_SEED: expected an unsigned integer, got '" + text + "'"});
      }
      config.seed = seed;
      ctx.seed_from_env = true;
    }
    // Overrides go through the same validation as the file.
    config = skclt::cli::parse_config(skclt::cli::serialize_config(config));
    ctx.out = &std::cout;
    ctx.err = &std::cerr;
    ctx.build_tag = SKCLT_BUILD_TAG;
    ctx.timestamp = utc_timestamp();
    skclt::cli::run(command, config, ctx);
  } catch (const skclt::ConfigError& e) {
    std::cerr << skclt::cli::error_json(e) << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << skclt::cli::error_json(e) << '\n';
    return 1;
  }
  return 0;
}
