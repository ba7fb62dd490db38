#include "chns/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

#include "chns/io.hpp"
#include "chns/synthetic.hpp"

namespace chns {

using nlohmann::json;
namespace fs = std::filesystem;

ProblemKind parse_problem(const std::string& name) {
  if (name == "simulate") return ProblemKind::simulate;
  if (name == "ocp") return ProblemKind::ocp;
  if (name == "da") return ProblemKind::da;
  if (name == "check") return ProblemKind::check;
  if (name == "gradient-test") return ProblemKind::gradient_test;
  throw ValidationError("problem: unknown value '" + name + "'");
}

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::simulate: return "simulate";
    case ProblemKind::ocp: return "ocp";
    case ProblemKind::da: return "da";
    case ProblemKind::check: return "check";
    case ProblemKind::gradient_test: return "gradient-test";
  }
  return "?";
}

namespace {

/// Reader over one JSON object that tracks its dotted path.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(path_ + ": expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!ok.count(it.key())) throw ValidationError(name(it.key()) + ": unknown key");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  Section sub(const char* key) const { return Section(at(key), name(key)); }

  const json& at(const char* key) const {
    if (!j_.contains(key)) throw ValidationError(name(key) + ": missing required field");
    return j_.at(key);
  }

  double number(const char* key) const {
    const json& v = at(key);
    if (!v.is_number()) throw ValidationError(name(key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError(name(key) + ": must be finite");
    return d;
  }
  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  /// Accepts a finite number or the string "inf".
  double extended(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    return number(key);
  }

  long long integer(const char* key) const {
    const json& v = at(key);
    if (!v.is_number_integer()) throw ValidationError(name(key) + ": expected an integer");
    return v.get<long long>();
  }
  long long integer(const char* key, long long fallback) const { return has(key) ? integer(key) : fallback; }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_boolean()) throw ValidationError(name(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const char* key) const {
    const json& v = at(key);
    if (!v.is_string()) throw ValidationError(name(key) + ": expected a string");
    return v.get<std::string>();
  }
  std::string string(const char* key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
  }

  /// Number or [x, y] pair.
  std::pair<double, double> pair(const char* key) const {
    const json& v = at(key);
    if (v.is_array()) {
      if (v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ValidationError(name(key) + ": expected a number or a pair of numbers");
      }
      return {v[0].get<double>(), v[1].get<double>()};
    }
    const double d = number(key);
    return {d, d};
  }

  std::vector<double> numbers(const char* key) const {
    const json& v = at(key);
    if (!v.is_array() || v.empty()) throw ValidationError(name(key) + ": expected a non-empty array");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ValidationError(name(key) + ": entries must be numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

 private:
  const json& j_;
  std::string path_;
};

FieldSpec parse_field(const Section& s, const fs::path& base) {
  FieldSpec f;
  f.type = s.string("type");
  if (f.type == "taylor-green") {
    s.allow({"type", "amplitude"});
    f.amplitude = s.number("amplitude", 1.0);
  } else if (f.type == "single-mode") {
    s.allow({"type", "amplitude", "mx", "my"});
    f.amplitude = s.number("amplitude", 1.0);
    f.mx = static_cast<int>(s.integer("mx", 1));
    f.my = static_cast<int>(s.integer("my", 1));
    if (f.mx == 0 && f.my == 0) throw ValidationError(s.name("mx") + ": mode (0, 0) carries no flow");
  } else if (f.type == "random") {
    s.allow({"type", "norm", "kmax"});
    f.norm = s.number("norm", 1.0);
    f.kmax = static_cast<int>(s.integer("kmax", 4));
    if (f.norm < 0.0) throw ValidationError(s.name("norm") + ": must be >= 0");
    if (f.kmax < 1) throw ValidationError(s.name("kmax") + ": must be >= 1");
  } else if (f.type == "zero") {
    s.allow({"type"});
  } else if (f.type == "constant") {
    s.allow({"type", "value"});
    f.value = s.number("value");
  } else if (f.type == "sine-product") {
    s.allow({"type", "amplitude", "mean"});
    f.amplitude = s.number("amplitude", 1.0);
    f.mean = s.number("mean", 0.0);
  } else if (f.type == "file") {
    s.allow({"type", "path"});
    f.path = s.string("path");
    if (f.path.is_relative()) f.path = base / f.path;
    if (!fs::exists(f.path)) throw ValidationError(s.name("path") + ": file not found: " + f.path.string());
  } else {
    throw ValidationError(s.name("type") + ": unknown generator '" + f.type + "'");
  }
  return f;
}

void require_positive(double v, const std::string& field) {
  if (!(v > 0.0)) throw ValidationError(field + ": must be positive");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: malformed JSON: ") + e.what());
  }
  const Section top(root, "");
  top.allow({"grid", "solver", "kernel", "potential", "initial", "problem", "targets",
             "gradient_test", "optimizer", "output", "seed"});
  ExperimentConfig cfg;

  const Section grid = top.sub("grid");
  grid.allow({"n", "l"});
  const auto [nx, ny] = grid.pair("n");
  if (nx != std::floor(nx) || ny != std::floor(ny) || nx < 4 || ny < 4 || nx > 4096 || ny > 4096) {
    throw ValidationError("grid.n: expected integers in [4, 4096]");
  }
  cfg.nx = static_cast<int>(nx);
  cfg.ny = static_cast<int>(ny);
  const double two_pi = 2.0 * std::numbers::pi;
  std::tie(cfg.lx, cfg.ly) = grid.has("l") ? grid.pair("l") : std::pair{two_pi, two_pi};
  require_positive(cfg.lx, "grid.l");
  require_positive(cfg.ly, "grid.l");

  const Section solver = top.sub("solver");
  solver.allow({"nu", "dt", "T", "stabilization", "dealias"});
  cfg.solver.nu = solver.number("nu");
  cfg.solver.dt = solver.number("dt");
  cfg.solver.T = solver.number("T");
  require_positive(cfg.solver.nu, "solver.nu");
  require_positive(cfg.solver.dt, "solver.dt");
  require_positive(cfg.solver.T, "solver.T");
  if (solver.has("stabilization")) {
    cfg.solver.stabilization = solver.number("stabilization");
    if (*cfg.solver.stabilization < 0.0) throw ValidationError("solver.stabilization: must be >= 0");
  }
  cfg.solver.dealias = solver.boolean("dealias", true);
  try {
    (void)cfg.solver.steps();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("solver.T: ") + e.what());
  }

  const Section kernel = top.sub("kernel");
  kernel.allow({"family", "epsilon", "mass"});
  try {
    cfg.kernel_family = parse_kernel_family(kernel.string("family"));
  } catch (const std::invalid_argument& e) {
    if (dynamic_cast<const ValidationError*>(&e)) throw;
    throw ValidationError(std::string("kernel.family: ") + e.what());
  }
  cfg.kernel_epsilon = kernel.number("epsilon", 0.5);
  cfg.kernel_mass = kernel.number("mass");
  require_positive(cfg.kernel_mass, "kernel.mass");
  if (cfg.kernel_family != KernelFamily::discrete_delta) require_positive(cfg.kernel_epsilon, "kernel.epsilon");

  const Section pot = top.sub("potential");
  pot.allow({"family", "coefficients"});
  const std::string pf = pot.string("family");
  if (pf == "double-well") {
    if (pot.has("coefficients")) throw ValidationError("potential.coefficients: not used by double-well");
  } else if (pf == "polynomial") {
    cfg.potential = pot.numbers("coefficients");
  } else {
    throw ValidationError("potential.family: unknown value '" + pf + "'");
  }

  if (top.has("initial")) {
    const Section init = top.sub("initial");
    init.allow({"velocity", "phase"});
    if (init.has("velocity")) cfg.initial_velocity = parse_field(init.sub("velocity"), base_dir);
    if (init.has("phase")) cfg.initial_phase = parse_field(init.sub("phase"), base_dir);
  }

  if (top.has("problem")) cfg.problem = parse_problem(top.string("problem"));

  if (top.has("targets")) {
    const Section t = top.sub("targets");
    cfg.targets.kind = t.string("kind");
    if (cfg.targets.kind == "steady" || cfg.targets.kind == "offset") {
      t.allow({"kind", "velocity", "phase"});
      if (t.has("velocity")) cfg.targets.velocity = parse_field(t.sub("velocity"), base_dir);
      if (t.has("phase")) cfg.targets.phase = parse_field(t.sub("phase"), base_dir);
    } else if (cfg.targets.kind == "twin") {
      t.allow({"kind", "truth", "noise"});
      cfg.targets.truth = parse_field(t.sub("truth"), base_dir);
      cfg.targets.noise = t.number("noise", 0.0);
      if (cfg.targets.noise < 0.0) throw ValidationError("targets.noise: must be >= 0");
    } else {
      throw ValidationError("targets.kind: unknown value '" + cfg.targets.kind + "'");
    }
  }

  if (top.has("gradient_test")) {
    const Section g = top.sub("gradient_test");
    g.allow({"mode", "directions", "steps"});
    cfg.gradient_test.mode = parse_problem(g.string("mode", "ocp"));
    if (cfg.gradient_test.mode != ProblemKind::ocp && cfg.gradient_test.mode != ProblemKind::da) {
      throw ValidationError("gradient_test.mode: expected ocp or da");
    }
    cfg.gradient_test.directions = static_cast<int>(g.integer("directions", 5));
    if (cfg.gradient_test.directions < 1) throw ValidationError("gradient_test.directions: must be >= 1");
    if (g.has("steps")) cfg.gradient_test.steps = g.numbers("steps");
    for (double h : cfg.gradient_test.steps) require_positive(h, "gradient_test.steps");
  }

  if (top.has("optimizer")) {
    const Section o = top.sub("optimizer");
    o.allow({"max_iters", "step0", "armijo_c", "armijo_shrink", "grad_tol", "radius"});
    OptimizerConfig& oc = cfg.optimizer;
    oc.max_iters = static_cast<int>(o.integer("max_iters", oc.max_iters));
    oc.step0 = o.number("step0", oc.step0);
    oc.armijo_c = o.number("armijo_c", oc.armijo_c);
    oc.armijo_shrink = o.number("armijo_shrink", oc.armijo_shrink);
    oc.grad_tol = o.number("grad_tol", oc.grad_tol);
    oc.radius = o.extended("radius", oc.radius);
    try {
      oc.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(e.what());
    }
  }

  if (top.has("output")) {
    const Section o = top.sub("output");
    o.allow({"directory", "dump_every"});
    if (o.has("directory")) {
      cfg.output_dir = o.string("directory");
      if (cfg.output_dir.is_relative()) cfg.output_dir = base_dir / cfg.output_dir;
    }
    cfg.dump_every = static_cast<int>(o.integer("dump_every", 0));
    if (cfg.dump_every < 0) throw ValidationError("output.dump_every: must be >= 0");
  } else {
    cfg.output_dir = base_dir / cfg.output_dir;
  }

  if (top.has("seed")) {
    const long long s = top.integer("seed");
    if (s < 0) throw ValidationError("seed: must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("config: cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  fs::path base = path.parent_path();
  if (base.empty()) base = ".";
  return parse_config(ss.str(), base);
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

GridPtr build_grid(const ExperimentConfig& cfg) { return TorusGrid::create(cfg.nx, cfg.ny, cfg.lx, cfg.ly); }

Model build_model(const ExperimentConfig& cfg, const GridPtr& grid) {
  return Model(grid, Kernel(grid, cfg.kernel_family, cfg.kernel_epsilon, cfg.kernel_mass),
               Potential(cfg.potential), cfg.solver);
}

VectorField make_velocity(const FieldSpec& spec, const GridPtr& grid, std::mt19937_64& rng) {
  if (spec.type == "taylor-green") return taylor_green(grid, spec.amplitude);
  if (spec.type == "single-mode") return single_mode_velocity(grid, spec.mx, spec.my, spec.amplitude);
  if (spec.type == "random") return random_divergence_free(grid, rng, spec.norm, spec.kmax);
  if (spec.type == "zero") return VectorField(grid);
  if (spec.type == "file") return io::read_vector(spec.path, grid);
  throw ValidationError("generator '" + spec.type + "' does not produce a velocity field");
}

ScalarField make_scalar(const FieldSpec& spec, const GridPtr& grid, std::mt19937_64& rng) {
  if (spec.type == "sine-product") return sine_product(grid, spec.amplitude, spec.mean);
  if (spec.type == "random") return random_scalar(grid, rng, spec.norm, spec.kmax);
  if (spec.type == "zero") return ScalarField(grid);
  if (spec.type == "constant") return ScalarField(grid, spec.value);
  if (spec.type == "file") return io::read_scalar(spec.path, grid);
  throw ValidationError("generator '" + spec.type + "' does not produce a scalar field");
}

FlowState build_initial(const ExperimentConfig& cfg, const GridPtr& grid) {
  std::mt19937_64 rv = make_rng(cfg.seed, 1);
  std::mt19937_64 rp = make_rng(cfg.seed, 2);
  return {leray_project(make_velocity(cfg.initial_velocity, grid, rv)),
          make_scalar(cfg.initial_phase, grid, rp), 0.0};
}

CostTargets build_ocp_targets(const ExperimentConfig& cfg, const Model& model, const FlowState& initial) {
  const GridPtr& grid = model.grid();
  const int nodes = model.steps() + 1;
  std::mt19937_64 rv = make_rng(cfg.seed, 3);
  std::mt19937_64 rp = make_rng(cfg.seed, 4);
  const TargetsSpec& t = cfg.targets;
  if (t.kind == "steady") {
    return CostTargets::steady(leray_project(make_velocity(t.velocity, grid, rv)),
                               make_scalar(t.phase, grid, rp), nodes);
  }
  if (t.kind == "offset") {
    CostTargets out = CostTargets::from_trajectory(simulate(model, initial, ControlSignal()));
    const VectorField du = leray_project(make_velocity(t.velocity, grid, rv));
    const ScalarField dp = make_scalar(t.phase, grid, rp);
    for (auto& v : out.velocity) v += du;
    for (auto& f : out.phase) f += dp;
    out.final_velocity += du;
    out.final_phase += dp;
    return out;
  }
  const VectorField truth = leray_project(make_velocity(t.truth, grid, rv));
  const ControlSignal c = ControlSignal::distributed(VectorSeries(static_cast<std::size_t>(nodes), truth),
                                                     model.dt());
  if (t.noise != 0.0) throw ValidationError("targets.noise: only supported for assimilation twins");
  return CostTargets::from_trajectory(simulate(model, initial, c));
}

VectorField build_da_truth(const ExperimentConfig& cfg, const GridPtr& grid) {
  if (cfg.targets.kind != "twin") throw ValidationError("targets.kind: assimilation needs a twin");
  std::mt19937_64 rv = make_rng(cfg.seed, 3);
  return leray_project(make_velocity(cfg.targets.truth, grid, rv));
}

}  // namespace chns
