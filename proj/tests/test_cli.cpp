#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "skclt/error.hpp"
#include "skclt_cli/commands.hpp"
#include "skclt_cli/config.hpp"
#include "skclt_cli/output.hpp"

using namespace skclt;
using namespace skclt::cli;

namespace {

const char* kMinimal = "N=10\nbeta=0.2\nh=0.3\nprofile=uniform\nM=50\nseed=1\n";

struct Captured {
  std::string csv;
  nlohmann::json meta;
};

Captured run_captured(const std::string& command, const ExperimentConfig& c) {
  std::ostringstream out, err;
  RunContext ctx;
  ctx.out = &out;
  ctx.err = &err;
  ctx.build_tag = "skclt-test";
  ctx.timestamp = "2000-01-01T00:00:00Z";
  run(command, c, ctx);
  return {out.str(), nlohmann::json::parse(err.str())};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("minimal config parses") {
  const ExperimentConfig c = parse_config(kMinimal);
  CHECK(c.n == 10);
  CHECK(c.beta == 0.2);
  CHECK(c.m == 50);
  CHECK(c.sizes() == std::vector<int>{10});
  CHECK(c.replica_specs().front().label() == "4");
  CHECK(c.t_values().size() == 9);
}

TEST_CASE("config violations are collected") {
  try {
    parse_config("N = 2\nprofile = explicit\nweights = 0.6708203932499369, 0.6708203932499369\nbogus = 1\nM = x\n"
                 "beta = 0.5\nN = 3\nno equals sign\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const auto& v = e.violations();
    CHECK(v.size() == 6);
    const std::string all = e.what();
    CHECK(all.find("unknown key 'bogus'") != std::string::npos);
    CHECK(all.find("computed sum t_i^2 = 0.9") != std::string::npos);
    CHECK(all.find("duplicate key 'N'") != std::string::npos);
    CHECK(all.find("M: expected an integer") != std::string::npos);
    CHECK(all.find("exceeds the high-temperature ceiling") != std::string::npos);
    CHECK(all.find("expected key = value") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("N = 4\nweights = 0.5,0.5,0.5,0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("N = 3\nprofile = explicit\nweights = 0.6, 0.8\n"), ConfigError);
  CHECK_NOTHROW(parse_config("N = 2\nprofile = explicit\nweights = 0.6, 0.8\n"));
  CHECK_THROWS_AS(parse_config("observable = s1-sq, nope\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("t_grid = 0.5, 1.0\n"), ConfigError);
}

TEST_CASE("config round trip") {
  const std::string full =
      "# everything set\n"
      "N_list = 8, 10, 12\nbeta = 0.2\nh = 0.3\nbeta_ceiling = 0.3\nprofile = power-law\nalpha = 0.75\n"
      "engine = mcmc\nM = 17\nseed = 12345678901234\njobs = 2\nsweeps = 5000\nburn_in = 250\nthin = 2\n"
      "batches = 16\nrule = metropolis\nspec = 4\nspec = 2,2\nrhs = power-outside\npath = two\n"
      "observable = s1-sq, overlap-12\nt_grid = 0.1, 0.35, 0.9\nplan = mc\nnodes = 12\ncsv = out dir/a.csv\n"
      "json = meta.json\n";
  const ExperimentConfig a = parse_config(full);
  const std::string text = serialize_config(a);
  const ExperimentConfig b = parse_config(text);
  CHECK(a == b);
  CHECK(serialize_config(b) == text);
  CHECK(b.specs == std::vector<std::string>{"4", "2;2"});
  CHECK(b.seed == 12345678901234ULL);
  const ExperimentConfig e = parse_config("N = 2\nprofile = explicit\nweights = 0.6, 0.8\nh = 0.1\n");
  CHECK(parse_config(serialize_config(e)) == e);
  CHECK(parse_config(serialize_config(ExperimentConfig{})) == ExperimentConfig{});
}

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  std::ostringstream out;
  CsvWriter w(out, {"a", "b"});
  w.cell(1).cell(std::string("x,y")).end_row();
  CHECK(out.str() == "a,b\n1,\"x,y\"\n");
  CHECK_THROWS_AS(w.cell(1).end_row(), DimensionError);
}

TEST_CASE("clt-report output schema and determinism") {
  const ExperimentConfig c = parse_config(kMinimal);
  const Captured a = run_captured("clt-report", c);
  const Captured b = run_captured("clt-report", c);
  CHECK(first_line(a.csv) == "N,profile,k_spec,max_t,lhs,lhs_se,rhs,rhs_se,delta,delta_se,ratio");
  CHECK(a.csv == b.csv);
  CHECK(a.meta["seed"] == 1);
  CHECK(a.meta["engine"] == "exact");
  CHECK(a.meta["build_tag"] == "skclt-test");
  CHECK(a.meta["generator_version"] == std::string(kGeneratorVersion));
  CHECK(a.meta["timestamp"] == "2000-01-01T00:00:00Z");
  CHECK(a.meta["M"] == 50);
}

TEST_CASE("other subcommands") {
  ExperimentConfig c = parse_config("beta = 0\nh = 0.7\n");
  const Captured q = run_captured("solve-q", c);
  CHECK(first_line(q.csv) == "beta,h,q,residual,iterations,nodes");
  CHECK(q.meta["summary"]["q"].get<double>() == doctest::Approx(std::tanh(0.7) * std::tanh(0.7)).epsilon(1e-12));

  c = parse_config("N = 6\nbeta = 0.2\nh = 0.3\nsweeps = 600\nburn_in = 100\nbatches = 10\n");
  const Captured m = run_captured("mcmc", c);
  CHECK(first_line(m.csv) == "sweep,value");
  CHECK(std::count(m.csv.begin(), m.csv.end(), '\n') == 501);
  CHECK(m.meta["summary"].contains("exact"));

  c = parse_config("N_list = 5, 6\nbeta = 0.2\nh = 0.3\nM = 4\n");
  const Captured s = run_captured("simulate", c);
  CHECK(std::count(s.csv.begin(), s.csv.end(), '\n') == 9);
  const Captured w = run_captured("sweep", c);
  CHECK(first_line(w.csv).rfind("N,profile,k_spec,max_t,delta", 0) == 0);

  c = parse_config("N = 3\nbeta = 0.2\nh = 0.3\nobservable = s1-sq\nt_grid = 0.5\nnodes = 4\npath = two\n");
  const Captured d = run_captured("check-derivative", c);
  CHECK(std::count(d.csv.begin(), d.csv.end(), '\n') == 2);
  CHECK(d.meta["summary"]["max_abs_difference"].get<double>() < 1e-6);

  CHECK_THROWS_AS(run_captured("simulate", parse_config("beta = 0.2\n")), InvalidArgument);
  CHECK_THROWS_AS(run_captured("explode", parse_config("")), InvalidArgument);
}

TEST_CASE("error json") {
  const auto j = nlohmann::json::parse(error_json(CapacityError("too big", 21, 20)));
  CHECK(j["error"]["code"] == "capacity_exceeded");
  CHECK(j["error"]["requested"] == 21);
  const auto v = nlohmann::json::parse(error_json(ConfigError({"a", "b"})));
  CHECK(v["error"]["violations"].size() == 2);
}
