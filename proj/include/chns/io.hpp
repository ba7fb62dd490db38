#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "chns/control.hpp"

namespace chns::io {

namespace fs = std::filesystem;

/// Snapshot layout: 32-byte header ("CHNSFLD1", u32 nx, u32 ny, f64 lx,
/// f64 ly), then little-endian f64 samples row-major with y slow. Vector
/// fields store the x component followed by the y component.
void write_snapshot(const fs::path& path, const ScalarField& f);
void write_snapshot(const fs::path& path, const VectorField& v);

struct Snapshot {
  int nx = 0;
  int ny = 0;
  double lx = 0.0;
  double ly = 0.0;
  /// One entry per component (1 for scalars, 2 for vectors).
  std::vector<std::vector<double>> components;
};

/// Throws ValidationError on a bad header or truncated payload.
Snapshot read_snapshot(const fs::path& path);
/// Throws GridMismatch when the header disagrees with `grid`.
ScalarField read_scalar(const fs::path& path, const GridPtr& grid);
VectorField read_vector(const fs::path& path, const GridPtr& grid);

/// "%.17g"; nan and inf are spelled nan, inf, -inf.
std::string format_double(double x);

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_diagnostics(const fs::path& path, const std::vector<StepDiagnostics>& rows);
/// wall_seconds is the only column that differs between identical runs.
void write_history(const fs::path& path, const std::vector<IterationRecord>& rows);

/// One snapshot per node named <stem>_NNNNN.bin plus <stem>_index.csv with
/// columns node, t, file.
void write_control(const fs::path& dir, const std::string& stem, const ControlSignal& control);

/// Lines "key: value".
void write_report(const fs::path& path,
                  const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace chns::io
