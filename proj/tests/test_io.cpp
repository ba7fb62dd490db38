#include <doctest.h>

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "chns/io.hpp"
#include "chns/synthetic.hpp"

using namespace chns;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* name) {
  const fs::path d = fs::temp_directory_path() / (std::string("chns_io_") + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("snapshot header layout") {
  auto g = TorusGrid::create(8, 8, 2.0, 1.0);
  const fs::path d = scratch_dir("header");
  io::write_snapshot(d / "s.bin", ScalarField(g, 1.5));
  const std::string raw = slurp(d / "s.bin");
  REQUIRE(raw.size() == 32 + 8 * 64);
  CHECK(raw.substr(0, 8) == "CHNSFLD1");
  std::uint32_t nx = 0, ny = 0;
  double lx = 0.0, v = 0.0;
  std::memcpy(&nx, raw.data() + 8, 4);
  std::memcpy(&ny, raw.data() + 12, 4);
  std::memcpy(&lx, raw.data() + 16, 8);
  std::memcpy(&v, raw.data() + 32, 8);
  CHECK(nx == 8);
  CHECK(ny == 8);
  CHECK(lx == 2.0);
  CHECK(v == 1.5);
}

TEST_CASE("snapshots round-trip bit for bit") {
  auto g = TorusGrid::create(16, 8);
  std::mt19937_64 rng(1);
  const ScalarField f = random_scalar(g, rng, 1.0);
  const VectorField u = random_divergence_free(g, rng, 1.0);
  const fs::path d = scratch_dir("roundtrip");
  io::write_snapshot(d / "f.bin", f);
  io::write_snapshot(d / "u.bin", u);
  CHECK((io::read_scalar(d / "f.bin", g) - f).max_abs() == 0.0);
  CHECK((io::read_vector(d / "u.bin", g) - u).max_abs() == 0.0);
  const io::Snapshot s = io::read_snapshot(d / "u.bin");
  CHECK(s.components.size() == 2);
  CHECK(s.nx == 16);
  CHECK(s.ny == 8);
}

TEST_CASE("snapshot readers reject bad files") {
  auto g = TorusGrid::create(8, 8);
  const fs::path d = scratch_dir("bad");
  io::write_snapshot(d / "f.bin", ScalarField(g, 1.0));
  CHECK_THROWS_AS(io::read_scalar(d / "f.bin", TorusGrid::create(16, 16)), GridMismatch);
  CHECK_THROWS_AS(io::read_vector(d / "f.bin", g), ValidationError);
  std::string raw = slurp(d / "f.bin");
  raw[0] = 'X';
  std::ofstream(d / "magic.bin", std::ios::binary) << raw;
  CHECK_THROWS_AS(io::read_snapshot(d / "magic.bin"), ValidationError);
  std::ofstream(d / "short.bin", std::ios::binary) << slurp(d / "f.bin").substr(0, 40);
  CHECK_THROWS_AS(io::read_snapshot(d / "short.bin"), ValidationError);
  CHECK_THROWS_AS(io::read_snapshot(d / "missing.bin"), ValidationError);
}

TEST_CASE("CSV numbers carry 17 significant digits") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(io::format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(io::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int i = 0; i < 100; ++i) {
    const double x = dist(rng);
    CHECK(std::strtod(io::format_double(x).c_str(), nullptr) == x);
  }
  const fs::path d = scratch_dir("csv");
  io::write_csv(d / "t.csv", {"a", "b"}, {{0.1, 2.0}});
  CHECK(slurp(d / "t.csv") == "a,b\n0.10000000000000001,2\n");
}

TEST_CASE("control series are written with an index") {
  auto g = TorusGrid::create(8, 8);
  const ControlSignal c = ControlSignal::zeros(g, 3, 0.5);
  const fs::path d = scratch_dir("control");
  io::write_control(d, "U", c);
  CHECK(fs::exists(d / "U_00000.bin"));
  CHECK(fs::exists(d / "U_00002.bin"));
  const std::string idx = slurp(d / "U_index.csv");
  CHECK(idx.rfind("node,t,file\n", 0) == 0);
  CHECK(idx.find("2,1,U_00002.bin") != std::string::npos);
}
