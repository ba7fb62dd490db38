#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* kBase = R"({
  "grid": {"n": 16},
  "solver": {"nu": 0.1, "dt": 0.001, "T": 0.01},
  "kernel": {"family": "gaussian", "epsilon": 0.5, "mass": 5},
  "potential": {"family": "double-well"},
  "initial": {"velocity": {"type": "random", "norm": 0.5}, "phase": {"type": "sine-product", "amplitude": 0.1}},
  "targets": {"kind": "offset", "velocity": {"type": "random", "norm": 0.1}, "phase": {"type": "random", "norm": 0.1}},
  "gradient_test": {"directions": 2, "steps": [0.1, 0.01]},
  "optimizer": {"max_iters": 3},
  "seed": 3
})";

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path workdir(const std::string& name, const std::string& config) {
  const fs::path d = fs::temp_directory_path() / ("chns_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  std::ofstream(d / "config.json") << config;
  return d;
}

std::string edit(const std::string& from, const std::string& to) {
  std::string s = kBase;
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

Run chns(const fs::path& dir, const std::string& args) {
  const std::string cmd = std::string("\"") + CHNS_BINARY + "\" " + args + " > \"" + (dir / "stdout").string() +
                          "\" 2> \"" + (dir / "stderr").string() + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(dir / "stdout");
  r.err = slurp(dir / "stderr");
  return r;
}

std::string config_arg(const fs::path& d) { return "--config \"" + (d / "config.json").string() + "\""; }

}  // namespace

TEST_CASE("simulate succeeds and is deterministic") {
  const fs::path d = workdir("simulate", kBase);
  const Run a = chns(d, "simulate " + config_arg(d) + " --output \"" + (d / "a").string() + "\"");
  REQUIRE(a.code == 0);
  const Run b = chns(d, "simulate " + config_arg(d) + " --output \"" + (d / "b").string() + "\"");
  REQUIRE(b.code == 0);
  const std::string diag = slurp(d / "a" / "diagnostics.csv");
  CHECK(diag.rfind("t,energy,kinetic,enstrophy,mass,residual\n", 0) == 0);
  CHECK(diag == slurp(d / "b" / "diagnostics.csv"));
  CHECK(fs::exists(d / "a" / "snapshots" / "u_00000.bin"));
  CHECK(fs::exists(d / "a" / "snapshots" / "phi_00010.bin"));
  const Run c = chns(d, "simulate " + config_arg(d) + " --seed 4 --output \"" + (d / "c").string() + "\"");
  REQUIRE(c.code == 0);
  CHECK(diag != slurp(d / "c" / "diagnostics.csv"));
}

TEST_CASE("validation failures exit with 2 and name the field") {
  const fs::path d = workdir("validation", edit("\"nu\": 0.1, ", ""));
  const Run r = chns(d, "simulate " + config_arg(d));
  CHECK(r.code == 2);
  CHECK(r.err.find("solver.nu") != std::string::npos);

  const fs::path u = workdir("unknown", edit("\"seed\": 3", "\"seed\": 3, \"colour\": 1"));
  const Run ru = chns(u, "simulate " + config_arg(u));
  CHECK(ru.code == 2);
  CHECK(ru.err.find("colour: unknown key") != std::string::npos);

  const fs::path k = workdir("kernel", edit("\"mass\": 5", "\"mass\": 1"));
  const Run rk = chns(k, "simulate " + config_arg(k));
  CHECK(rk.code == 2);
  CHECK(rk.err.find("item 2") != std::string::npos);

  CHECK(chns(d, "simulate").code == 2);
  CHECK(chns(d, "launch " + config_arg(d)).code == 2);
  CHECK(chns(d, "simulate --config \"" + (d / "absent.json").string() + "\"").code == 2);
  const fs::path p = workdir("problem", edit("\"seed\": 3", "\"seed\": 3, \"problem\": \"da\""));
  CHECK(chns(p, "optimize " + config_arg(p)).code == 2);
}

TEST_CASE("numeric failure exits with 3") {
  const fs::path d = workdir("blowup", edit("\"norm\": 0.5", "\"norm\": 1e6"));
  const Run r = chns(d, "simulate " + config_arg(d));
  CHECK(r.code == 3);
  CHECK(r.err.find("numeric error") != std::string::npos);
}

TEST_CASE("optimize, gradient-test and check produce their outputs") {
  const fs::path d = workdir("optimize", kBase);
  REQUIRE(chns(d, "optimize " + config_arg(d)).code == 0);
  const std::string hist = slurp(d / "output" / "history.csv");
  CHECK(hist.rfind("iter,cost,grad_norm,step,wall_seconds\n", 0) == 0);
  CHECK(fs::exists(d / "output" / "control" / "U_index.csv"));
  CHECK(slurp(d / "output" / "report.txt").find("final_cost: ") != std::string::npos);

  const Run g = chns(d, "gradient-test " + config_arg(d));
  REQUIRE(g.code == 0);
  CHECK(g.out.find("observed order") != std::string::npos);
  CHECK(fs::exists(d / "output" / "gradient_test.csv"));

  const Run c = chns(d, "check " + config_arg(d));
  CHECK(c.code == 0);
  CHECK(c.out.find("FAIL") == std::string::npos);
  CHECK(fs::exists(d / "output" / "check_report.txt"));
}

TEST_CASE("assimilate writes the twin report") {
  const fs::path d = workdir("assimilate",
                             edit(R"("kind": "offset", "velocity": {"type": "random", "norm": 0.1}, "phase": {"type": "random", "norm": 0.1})",
                                  R"("kind": "twin", "truth": {"type": "random", "norm": 0.5}, "noise": 0.01)"));
  REQUIRE(chns(d, "assimilate " + config_arg(d)).code == 0);
  const std::string rep = slurp(d / "output" / "twin_report.txt");
  CHECK(rep.find("recovery_error: ") != std::string::npos);
  CHECK(fs::exists(d / "output" / "recovered_u0.bin"));
}
