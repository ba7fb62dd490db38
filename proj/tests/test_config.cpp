#include <doctest.h>

#include <cmath>
#include <fstream>

#include "chns/config.hpp"
#include "chns/io.hpp"

using namespace chns;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "grid": {"n": 16},
  "solver": {"nu": 0.1, "dt": 0.001, "T": 0.01},
  "kernel": {"family": "gaussian", "mass": 5},
  "potential": {"family": "double-well"}
})";

std::string with(const std::string& from, const std::string& to) {
  std::string s = kMinimal;
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config fills the defaults") {
  const ExperimentConfig c = parse_config(kMinimal);
  CHECK(c.nx == 16);
  CHECK(c.ny == 16);
  CHECK(c.lx == doctest::Approx(2.0 * 3.14159265358979323846));
  CHECK(c.solver.steps() == 10);
  CHECK(c.kernel_mass == 5.0);
  CHECK(c.potential == std::vector<double>{1.0, 0.0, -2.0, 0.0, 1.0});
  CHECK_FALSE(c.problem.has_value());
  CHECK(c.seed == 0);
  const GridPtr g = build_grid(c);
  const Model m = build_model(c, g);
  CHECK(m.assumptions().c0 == doctest::Approx(1.0));
}

TEST_CASE("missing and unknown fields are named") {
  CHECK(error_of(with("\"nu\": 0.1, ", "")).find("solver.nu") != std::string::npos);
  CHECK(error_of(with("\"nu\": 0.1", "\"nu\": 0.1, \"viscosity\": 1")).find("solver.viscosity: unknown key") !=
        std::string::npos);
  CHECK(error_of(with("\"mass\": 5", "\"mass\": \"five\"")).find("kernel.mass") != std::string::npos);
  CHECK(error_of(with("\"nu\": 0.1", "\"nu\": -0.1")).find("solver.nu") != std::string::npos);
  CHECK(error_of(with("\"n\": 16", "\"n\": 2")).find("grid.n") != std::string::npos);
  CHECK(error_of(with("\"T\": 0.01", "\"T\": 0.0105")).find("solver.T") != std::string::npos);
  CHECK(error_of(with("gaussian", "cauchy")).find("kernel.family") != std::string::npos);
  CHECK(error_of("{\"grid\": ").find("malformed") != std::string::npos);
  CHECK(error_of(with("\"grid\"", "\"extra\": 1, \"grid\"")).find("extra: unknown key") != std::string::npos);
}

TEST_CASE("field generators are checked") {
  const std::string bad = with("\"potential\"", R"("initial": {"velocity": {"type": "vortex"}}, "potential")");
  CHECK(error_of(bad).find("initial.velocity.type") != std::string::npos);
  const std::string missing =
      with("\"potential\"", R"("initial": {"phase": {"type": "file", "path": "nowhere.bin"}}, "potential")");
  CHECK(error_of(missing).find("file not found") != std::string::npos);
  const std::string extra =
      with("\"potential\"", R"("initial": {"phase": {"type": "zero", "amplitude": 1}}, "potential")");
  CHECK(error_of(extra).find("initial.phase.amplitude: unknown key") != std::string::npos);
}

TEST_CASE("optimizer and problem sections") {
  const ExperimentConfig c = parse_config(with(
      "\"potential\"", R"("problem": "ocp", "optimizer": {"radius": "inf", "max_iters": 3}, "potential")"));
  CHECK(c.problem == ProblemKind::ocp);
  CHECK(std::isinf(c.optimizer.radius));
  CHECK(c.optimizer.max_iters == 3);
  CHECK(error_of(with("\"potential\"", R"("problem": "solve", "potential")")).find("problem") !=
        std::string::npos);
  CHECK(error_of(with("\"potential\"", R"("optimizer": {"armijo_c": 2}, "potential")")).find("armijo_c") !=
        std::string::npos);
  CHECK(parse_problem("gradient-test") == ProblemKind::gradient_test);
  CHECK(to_string(ProblemKind::da) == "da");
}

TEST_CASE("initial state is deterministic in the seed") {
  const std::string text =
      with("\"potential\"", R"("initial": {"velocity": {"type": "random", "norm": 0.5},
                                           "phase": {"type": "random", "norm": 0.2}}, "potential")");
  ExperimentConfig c = parse_config(text);
  const GridPtr g = build_grid(c);
  const FlowState a = build_initial(c, g);
  const FlowState b = build_initial(c, g);
  c.seed = 7;
  const FlowState d = build_initial(c, g);
  CHECK((a.u - b.u).max_abs() == 0.0);
  CHECK((a.phi - b.phi).max_abs() == 0.0);
  CHECK((a.u - d.u).max_abs() > 0.0);
  CHECK(norm(a.u) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(relative_divergence(a.u) < 1e-13);
}

TEST_CASE("file-backed fields load relative to the config") {
  const fs::path d = fs::temp_directory_path() / "chns_config_file";
  fs::remove_all(d);
  fs::create_directories(d);
  const ExperimentConfig base = parse_config(kMinimal);
  const GridPtr g = build_grid(base);
  io::write_snapshot(d / "phi.bin", ScalarField(g, 0.3));
  std::ofstream(d / "run.json") << with(
      "\"potential\"", R"("initial": {"phase": {"type": "file", "path": "phi.bin"}}, "potential")");
  const ExperimentConfig c = load_config(d / "run.json");
  CHECK(build_initial(c, g).phi.mean() == doctest::Approx(0.3));
  CHECK(c.output_dir == d / "output");
}
