#include "chns/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>

namespace chns::io {

namespace {

constexpr char kMagic[8] = {'C', 'H', 'N', 'S', 'F', 'L', 'D', '1'};
constexpr std::size_t kHeader = 32;

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
}

template <class T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return to_little(v);
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, mode | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

void write_fields(const fs::path& path, const GridPtr& grid,
                  std::initializer_list<const ScalarField*> parts) {
  std::ofstream os = open_out(path, std::ios::out | std::ios::binary);
  os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(grid->nx()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(grid->ny()));
  put<double>(os, grid->lx());
  put<double>(os, grid->ly());
  for (const ScalarField* f : parts) {
    for (double v : f->values()) put<double>(os, v);
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

void check_header(const Snapshot& s, const GridPtr& grid, const fs::path& path) {
  if (s.nx != grid->nx() || s.ny != grid->ny() || s.lx != grid->lx() || s.ly != grid->ly()) {
    throw GridMismatch(path.string() + ": snapshot grid differs from the configured grid");
  }
}

}  // namespace

void write_snapshot(const fs::path& path, const ScalarField& f) {
  write_fields(path, f.grid(), {&f});
}

void write_snapshot(const fs::path& path, const VectorField& v) {
  write_fields(path, v.grid(), {&v.x(), &v.y()});
}

Snapshot read_snapshot(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open snapshot " + path.string());
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw ValidationError(path.string() + ": not a CHNSFLD1 snapshot");
  }
  Snapshot s;
  s.nx = static_cast<int>(get<std::uint32_t>(is));
  s.ny = static_cast<int>(get<std::uint32_t>(is));
  s.lx = get<double>(is);
  s.ly = get<double>(is);
  if (!is || s.nx <= 0 || s.ny <= 0) throw ValidationError(path.string() + ": truncated header");
  const std::uintmax_t bytes = fs::file_size(path);
  const std::uintmax_t per = static_cast<std::uintmax_t>(s.nx) * s.ny * sizeof(double);
  if (bytes < kHeader || (bytes - kHeader) % per != 0 || bytes == kHeader) {
    throw ValidationError(path.string() + ": payload is not a whole number of fields");
  }
  const std::uintmax_t ncomp = (bytes - kHeader) / per;
  s.components.resize(ncomp);
  for (auto& c : s.components) {
    c.resize(static_cast<std::size_t>(s.nx) * s.ny);
    for (double& v : c) v = get<double>(is);
  }
  if (!is) throw ValidationError(path.string() + ": truncated payload");
  return s;
}

ScalarField read_scalar(const fs::path& path, const GridPtr& grid) {
  Snapshot s = read_snapshot(path);
  check_header(s, grid, path);
  if (s.components.size() != 1) throw ValidationError(path.string() + ": expected a scalar field");
  return ScalarField(grid, std::move(s.components[0]));
}

VectorField read_vector(const fs::path& path, const GridPtr& grid) {
  Snapshot s = read_snapshot(path);
  check_header(s, grid, path);
  if (s.components.size() != 2) throw ValidationError(path.string() + ": expected a vector field");
  return VectorField(ScalarField(grid, std::move(s.components[0])),
                     ScalarField(grid, std::move(s.components[1])));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream os = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

void write_diagnostics(const fs::path& path, const std::vector<StepDiagnostics>& rows) {
  std::vector<std::vector<double>> data;
  data.reserve(rows.size());
  for (const auto& d : rows) data.push_back({d.t, d.energy, d.kinetic, d.enstrophy, d.mass, d.residual});
  write_csv(path, {"t", "energy", "kinetic", "enstrophy", "mass", "residual"}, data);
}

void write_history(const fs::path& path, const std::vector<IterationRecord>& rows) {
  std::vector<std::vector<double>> data;
  data.reserve(rows.size());
  for (const auto& r : rows) {
    data.push_back({static_cast<double>(r.iter), r.cost, r.grad_norm, r.step, r.wall_seconds});
  }
  write_csv(path, {"iter", "cost", "grad_norm", "step", "wall_seconds"}, data);
}

void write_control(const fs::path& dir, const std::string& stem, const ControlSignal& control) {
  fs::create_directories(dir);
  std::ofstream idx = open_out(dir / (stem + "_index.csv"));
  idx << "node,t,file\n";
  auto emit = [&](int n, double t, const VectorField& v) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%05d.bin", stem.c_str(), n);
    write_snapshot(dir / name, v);
    idx << n << ',' << format_double(t) << ',' << name << '\n';
  };
  if (control.kind() == ControlSignal::Kind::initial) {
    emit(0, 0.0, control.initial_value());
  } else {
    for (int n = 0; n < control.nodes(); ++n) emit(n, n * control.dt(), control[n]);
  }
}

void write_report(const fs::path& path,
                  const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream os = open_out(path);
  for (const auto& [k, v] : entries) os << k << ": " << v << '\n';
}

}  // namespace chns::io
