#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "tlstat/cli/commands.hpp"

namespace fs = std::filesystem;
using namespace tlstat::cli;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("tlstat_cmd_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_config(const TempDir& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir.path / name;
  std::ofstream(p) << text;
  return p;
}

std::string config(const std::string& distribution, std::size_t n, std::size_t reps,
                   const std::string& extra = "", const std::string& weight = R"({"kind":"constant"})") {
  return R"({"distribution":)" + distribution + R"(,"weight":)" + weight +
         R"(,"trim":{"n":)" + std::to_string(n) + R"(,"alpha":0.25,"beta":0.25},"replications":)" +
         std::to_string(reps) + R"(,"seed":42)" + extra + "}";
}

const std::string kUniform = R"({"family":"uniform"})";
const std::string kMixture = R"({"family":"two_point_mixture","params":[0.25,0,1,2,3]})";
const std::string kCauchy = R"({"family":"cauchy"})";
const std::string kPointMass = R"({"family":"point_mass","params":[3]})";

struct Outcome {
  int code;
  std::string log;
};

Outcome run(const std::string& command, const fs::path& cfg, const fs::path& out,
            RunOptions opts = {}) {
  std::ostringstream log;
  opts.out_dir = out;
  const int code = run_command(command, cfg, opts, log);
  return {code, log.str()};
}

std::vector<std::string> body_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);)
    if (line.empty() || line[0] != '#') out.push_back(line);
  return out;
}

std::string column(const std::string& line, std::size_t idx) {
  std::stringstream ss(line);
  std::string cell;
  for (std::size_t i = 0; i <= idx; ++i) std::getline(ss, cell, ',');
  return cell;
}

int run_binary(const std::string& args) {
  const int status = std::system((std::string(TLSTAT_CLI_PATH) + " " + args + " 2>/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("identity command") {
  TempDir dir;
  const auto ok = run("identity", write_config(dir, "u.json", config(kUniform, 200, 1000)), dir.path);
  CHECK(ok.code == kExitOk);
  const auto lines = body_lines(dir.path / "identity.csv");
  REQUIRE(lines.size() == 1001);
  CHECK(lines[0] ==
        "replicate,l_n,l0_n,lw_n,mu_n,mu_w,r1,r2,v_n,a_n,b_n,n_alpha,n_upper,residual");

  CHECK(run("identity", write_config(dir, "r0.json", config(kUniform, 200, 0)), dir.path).code ==
        kExitConfig);

  const auto pm = run("identity", write_config(dir, "pm.json", config(kPointMass, 50, 20)), dir.path);
  CHECK(pm.code == kExitOk);
  const auto pm_lines = body_lines(dir.path / "identity.csv");
  for (std::size_t i = 1; i < pm_lines.size(); ++i) CHECK(std::stod(column(pm_lines[i], 13)) <= 1e-14);
}

TEST_CASE("metadata line") {
  TempDir dir;
  run("conditions", write_config(dir, "u.json", config(kUniform, 200, 10)), dir.path);
  std::ifstream in(dir.path / "conditions.csv");
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("# {", 0) == 0);
  CHECK(first.find("\"timestamp\"") != std::string::npos);
  CHECK(first.find("\"wall_seconds\"") != std::string::npos);
  CHECK(first.find("\"config_hash\"") != std::string::npos);
  CHECK(fs::exists(dir.path / "manifest.json"));
}

TEST_CASE("conditions command") {
  TempDir dir;
  CHECK(run("conditions", write_config(dir, "u.json", config(kUniform, 200, 10)), dir.path).code ==
        kExitOk);

  CHECK(run("conditions", write_config(dir, "m.json", config(kMixture, 200, 10)), dir.path).code ==
        kExitBreach);
  const auto lines = body_lines(dir.path / "conditions.csv");
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "condition,status,measured,detail");
  CHECK(column(lines[1], 1) == "pass");
  CHECK(column(lines[2], 1) == "fail");
  CHECK(column(lines[3], 1) == "pass");
  CHECK(column(lines[4], 1) == "pass");

  const auto lip = config(kUniform, 200, 10, "", R"({"kind":"polynomial","coefficients":[0,1],"lipschitz":0.5})");
  CHECK(run("conditions", write_config(dir, "l.json", lip), dir.path).code == kExitBreach);
  const auto l_lines = body_lines(dir.path / "conditions.csv");
  CHECK(column(l_lines[1], 1) == "fail");
  CHECK(column(l_lines[2], 1) == "pass");
}

TEST_CASE("mdratio command") {
  TempDir dir;
  const auto floor = run("mdratio",
                         write_config(dir, "f.json", config(kUniform, 200, 200, R"(,"grid":{"c":1.5})")),
                         dir.path);
  CHECK(floor.log.find("tail floor") != std::string::npos);
  const auto tails = body_lines(dir.path / "tails.csv");
  CHECK(tails[0] == "x,p_upper,p_lower,normal_tail,ratio_upper,ratio_lower,se,n,R,seed");

  const auto neg = write_config(dir, "m.json", config(kMixture, 200, 2000));
  const auto blocked = run("mdratio", neg, dir.path);
  CHECK(blocked.code == kExitBreach);
  CHECK(blocked.log.find("hypotheses violated") != std::string::npos);
  CHECK(fs::exists(dir.path / "tails.csv"));
  RunOptions ignore;
  ignore.ignore_conditions = true;
  const auto forced = run("mdratio", neg, dir.path, ignore);
  CHECK(forced.log.find("hypotheses violated") == std::string::npos);
  CHECK(forced.code == (forced.log.find("band holds") != std::string::npos ? kExitOk : kExitBreach));

  CHECK(run("mdratio", write_config(dir, "c.json", config(kCauchy, 400, 4000)), dir.path).code == kExitOk);
  CHECK(run("mdratio", write_config(dir, "p.json", config(kPointMass, 50, 20)), dir.path).code ==
        kExitConfig);
}

TEST_CASE("variance command") {
  TempDir dir;
  const auto cauchy = write_config(dir, "c.json", config(kCauchy, 200, 400, R"(,"n_grid":[100,200])"));
  const auto refused = run("variance", cauchy, dir.path);
  CHECK(refused.code == kExitConfig);
  CHECK(refused.log.find("moment condition violated") != std::string::npos);
  RunOptions ignore;
  ignore.ignore_conditions = true;
  CHECK(run("variance", cauchy, dir.path, ignore).code != kExitConfig);
  CHECK(body_lines(dir.path / "variance.csv").size() == 3);

  CHECK(run("variance", write_config(dir, "p.json", config(kPointMass, 50, 100)), dir.path).code ==
        kExitConfig);
  const auto ok = run("variance",
                      write_config(dir, "u.json", config(kUniform, 400, 2000, R"(,"n_grid":[200,400])")),
                      dir.path);
  CHECK(ok.code == kExitOk);
}

TEST_CASE("simulate is independent of the worker count") {
  TempDir dir;
  const auto cfg = write_config(
      dir, "s.json",
      config(kUniform, 300, 600, R"(,"n_grid":[100,300])",
             R"({"kind":"polynomial","coefficients":[0,1],"perturb_mode":"saturating","perturb_budget":1})"));
  RunOptions one, three;
  one.workers = 1;
  three.workers = 3;
  const auto a = run("simulate", cfg, dir.path / "a", one);
  const auto b = run("simulate", cfg, dir.path / "b", three);
  CHECK(a.code == b.code);
  for (const char* name : {"identity.csv", "tails.csv", "variance.csv", "conditions.csv", "diagnostics.csv"}) {
    INFO(name);
    const auto la = body_lines(dir.path / "a" / name);
    CHECK(la.size() > 1);
    CHECK(la == body_lines(dir.path / "b" / name));
  }
}

TEST_CASE("binary exit codes and overrides") {
  TempDir dir;
  const auto cfg = write_config(dir, "u.json", config(kUniform, 100, 50));
  const std::string out = " --out " + dir.path.string();
  CHECK(run_binary("conditions --config " + cfg.string() + out) == 0);
  CHECK(run_binary("conditions" + out) == 1);
  CHECK(run_binary("bogus --config " + cfg.string() + out) == 1);
  CHECK(run_binary("identity --config " + (dir.path / "missing.json").string() + out) == 1);
  CHECK(run_binary("--help") == 0);

  CHECK(run_binary("identity --seed 7 --config " + cfg.string() + out) == 0);
  const auto seven = body_lines(dir.path / "identity.csv");
  CHECK(run_binary("identity --config " + cfg.string() + out) == 0);
  CHECK(body_lines(dir.path / "identity.csv") != seven);
  CHECK(::setenv("TLSTAT_SEED", "7", 1) == 0);
  CHECK(run_binary("identity --config " + cfg.string() + out) == 0);
  CHECK(::unsetenv("TLSTAT_SEED") == 0);
  CHECK(body_lines(dir.path / "identity.csv") == seven);
}
