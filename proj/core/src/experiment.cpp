#include "deflate/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "deflate/cases.hpp"
#include "deflate/io.hpp"
#include "deflate/spectral.hpp"

namespace deflate::experiment {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      // problem
      "problem", "sigma", "eps", "high_layers", "thickness", "nx", "ny", "nz", "dx", "dy", "dz",
      "layers", "sagd_bands", "field_file", "matrix_file", "rhs_file", "bc", "dirichlet_perm",
      "scaling", "wells",
      // solver
      "method", "methods", "m", "d", "tol", "max_iters", "min_iters", "preconditioner",
      "projection", "formulation", "ritz_keep", "x0", "seed",
      // deflation
      "deflation", "boxes", "jump_threshold", "z_ranges", "include_excluded", "partition_input",
      // output
      "convergence_csv", "spectrum_csv", "spectrum_cutoff", "ritz_csv", "partition_file",
      "output_dir"};
  return keys;
}

const std::set<std::string>& method_keys() {
  static const std::set<std::string> keys = {
      "m", "d", "tol", "max_iters", "min_iters", "preconditioner", "projection", "formulation",
      "ritz_keep", "deflation", "boxes", "jump_threshold", "z_ranges", "include_excluded",
      "partition_input"};
  return keys;
}

std::string lookup_key(const Config& cfg, Method method, const std::string& key) {
  std::string scoped = method_name(method) + "." + key;
  return cfg.has(scoped) ? scoped : key;
}

std::vector<ZRange> parse_ranges(const Config& cfg, const std::string& key) {
  std::vector<ZRange> out;
  for (const auto& item : cfg.get_list(key)) {
    auto parts = split(item, ':');
    if (parts.size() != 2) cfg.fail(key, "expected z ranges as begin:end, got '" + item + "'");
    try {
      out.emplace_back(io::parse_index(parts[0]), io::parse_index(parts[1]));
    } catch (const FormatError& e) {
      cfg.fail(key, e.what());
    }
  }
  return out;
}

Grid grid_from(const Config& cfg) {
  Grid g;
  g.nx = cfg.get_size("nx", 0);
  g.ny = cfg.get_size("ny", 1);
  g.nz = cfg.get_size("nz", 1);
  g.dx = cfg.get_double("dx", 1.0);
  g.dy = cfg.get_double("dy", 1.0);
  g.dz = cfg.get_double("dz", 1.0);
  if (g.nx == 0) cfg.fail("nx", "grid dimensions nx, ny, nz are required and must be >= 1");
  try {
    g.validate();
  } catch (const InvalidArgument& e) {
    cfg.fail("nx", e.what());
  }
  return g;
}

std::vector<Well> parse_wells(const Config& cfg) {
  std::vector<Well> wells;
  for (const auto& item : cfg.get_list("wells")) {
    auto parts = split(item, ':');
    if (parts.size() != 4) cfg.fail("wells", "expected ix:iy:iz:rate, got '" + item + "'");
    try {
      wells.push_back({io::parse_index(parts[0]), io::parse_index(parts[1]),
                       io::parse_index(parts[2]), io::parse_double(parts[3])});
    } catch (const FormatError& e) {
      cfg.fail("wells", e.what());
    }
  }
  return wells;
}

Vector initial_guess(const Config& cfg, std::size_t n) {
  const std::string kind = cfg.get("x0", "zero");
  if (kind == "zero") return Vector(n, 0.0);
  if (kind == "random") {
    std::mt19937_64 rng(cfg.get_size("seed", 0));
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector x(n);
    for (double& v : x) v = dist(rng);
    return x;
  }
  cfg.fail("x0", "x0 must be 'zero' or 'random', got '" + kind + "'");
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  auto out = io::open_output(path);
  out << text;
  if (!out) throw FormatError("failed writing " + path.string());
}

std::string convergence_text(const SolveReport& r) {
  std::ostringstream s;
  write_convergence_csv(s, r);
  return s.str();
}

std::string ritz_text(const SolveReport& r) {
  std::ostringstream s;
  write_ritz_csv(s, r);
  return s.str();
}

int status_code(const RunResult& r) { return r.report.converged ? kOk : kNotConverged; }

}  // namespace

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& message)
    : Error(line > 0 ? source + ":" + std::to_string(line) + ": " + message
                     : source + ": " + message),
      line_(line) {}

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line, "expected 'key = value'");
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError(source, line, "missing key before '='");
    if (cfg.entries_.count(key) != 0) {
      throw ConfigError(source, line, "duplicate key '" + key + "' (first set on line " +
                                          std::to_string(cfg.entries_[key].line) + ")");
    }
    cfg.entries_[key] = {value, line};
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config " + path.string());
  return parse(in, path.string());
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = {value, 0}; }

void Config::fail(const std::string& key, const std::string& message) const {
  auto it = entries_.find(key);
  throw ConfigError(source_, it == entries_.end() ? 0 : it->second.line,
                    (it == entries_.end() ? "" : key + ": ") + message);
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.value;
}

std::string Config::require(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(source_, 0, "missing required key '" + key + "'");
  return it->second.value;
}

double Config::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  try {
    return io::parse_double(get(key, ""));
  } catch (const FormatError& e) {
    fail(key, e.what());
  }
}

std::size_t Config::get_size(const std::string& key, std::size_t fallback) const {
  if (!has(key)) return fallback;
  try {
    return io::parse_index(get(key, ""));
  } catch (const FormatError& e) {
    fail(key, e.what());
  }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get(key, "");
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  fail(key, "expected a boolean (true/false/on/off), got '" + v + "'");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  if (!has(key)) return {};
  std::vector<std::string> out;
  for (auto& item : split(get(key, ""), ',')) {
    if (item.empty()) fail(key, "empty list element");
    out.push_back(item);
  }
  return out;
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : get_list(key)) {
    try {
      out.push_back(io::parse_double(item));
    } catch (const FormatError& e) {
      fail(key, e.what());
    }
  }
  return out;
}

void check_known_keys(const Config& cfg) {
  for (const auto& [key, entry] : cfg.entries()) {
    if (known_keys().count(key) != 0) continue;
    auto dot = key.find('.');
    if (dot != std::string::npos) {
      std::string prefix = key.substr(0, dot);
      std::string rest = key.substr(dot + 1);
      if ((prefix == "gmres" || prefix == "rdgmres" || prefix == "pdgmres") &&
          method_keys().count(rest) != 0) {
        continue;
      }
    }
    throw ConfigError(cfg.source(), entry.line, "unknown key '" + key + "'");
  }
}

ProblemSetup build_problem(const Config& cfg) {
  const std::string kind = cfg.get("problem", "sandwich");
  ProblemSetup s;
  s.name = kind;
  const bool scale = cfg.get_bool("scaling", true);

  if (kind == "matrix") {
    s.problem.A = io::read_matrix_market(std::filesystem::path(cfg.require("matrix_file")));
    s.problem.b = cfg.has("rhs_file") ? io::read_vector(cfg.require("rhs_file"))
                                      : Vector(s.problem.A.n(), 1.0);
    if (s.problem.b.size() != s.problem.A.n()) cfg.fail("rhs_file", "rhs length does not match matrix");
    if (cfg.has("nx")) {
      s.problem.grid = grid_from(cfg);
      if (s.problem.grid.cells() != s.problem.A.n()) cfg.fail("nx", "grid size does not match matrix");
    } else {
      s.problem.grid = Grid{s.problem.A.n(), 1, 1};
    }
    if (scale) s.problem = diagonal_scale(s.problem);
    return s;
  }

  cases::TestCase tc;
  if (kind == "sandwich") {
    tc = cases::sandwich(cfg.get_double("sigma", 1e6));
  } else if (kind == "sandwich-low") {
    tc = cases::sandwich_low(cfg.get_double("eps", 1e-6));
  } else if (kind == "alternating") {
    tc = cases::alternating_stack(cfg.get_size("high_layers", 1), cfg.get_double("eps", 1e-6),
                                  cfg.get_size("thickness", 1));
  } else if (kind == "high-low") {
    tc = cases::high_low_stack(cfg.get_double("eps", 1e-7));
  } else if (kind == "black-oil") {
    tc = cases::black_oil();
  } else if (kind == "sagd") {
    tc = cfg.has("sagd_bands") ? cases::sagd(cfg.get_doubles("sagd_bands")) : cases::sagd();
  } else if (kind == "layered" || kind == "homogeneous") {
    Grid g = grid_from(cfg);
    std::vector<LayerSpec> layers;
    if (kind == "homogeneous") {
      layers.push_back({0, g.nz, cfg.get_double("eps", 1.0)});
    } else {
      for (const auto& item : cfg.get_list("layers")) {
        auto parts = split(item, ':');
        if (parts.size() != 3) cfg.fail("layers", "expected begin:end:value, got '" + item + "'");
        try {
          layers.push_back({io::parse_index(parts[0]), io::parse_index(parts[1]),
                            io::parse_double(parts[2])});
        } catch (const FormatError& e) {
          cfg.fail("layers", e.what());
        }
      }
      if (layers.empty()) cfg.fail("problem", "problem = layered needs a 'layers' list");
    }
    try {
      tc.field = make_layered_field(g, layers);
    } catch (const InvalidArgument& e) {
      cfg.fail("layers", e.what());
    }
    for (const auto& l : layers) tc.layers.emplace_back(l.z_begin, l.z_end);
  } else if (kind == "file") {
    Grid g = grid_from(cfg);
    tc.field = load_field_file(cfg.require("field_file"), g);
  } else {
    cfg.fail("problem", "unknown problem '" + kind + "'");
  }
  tc.name = kind;
  if (cfg.has("wells")) tc.wells = parse_wells(cfg);
  const std::string bc = cfg.get("bc", "top-dirichlet");
  if (bc == "top-dirichlet") {
    tc.bc.kind = BoundaryKind::NeumannTopDirichlet;
  } else if (bc == "neumann") {
    tc.bc.kind = BoundaryKind::NeumannAll;
  } else {
    cfg.fail("bc", "bc must be 'top-dirichlet' or 'neumann'");
  }
  tc.bc.dirichlet_perm = cfg.get_double("dirichlet_perm", tc.bc.dirichlet_perm);
  try {
    s.problem = cases::assemble(tc, scale);
  } catch (const InvalidArgument& e) {
    cfg.fail("wells", e.what());
  }
  s.field = tc.field;
  s.case_layers = tc.layers;
  return s;
}

Method parse_method(const std::string& name) {
  if (name == "gmres") return Method::Gmres;
  if (name == "rdgmres") return Method::Rdgmres;
  if (name == "pdgmres") return Method::Pdgmres;
  throw InvalidArgument("unknown method '" + name + "' (expected gmres, rdgmres or pdgmres)");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Gmres: return "gmres";
    case Method::Rdgmres: return "rdgmres";
    case Method::Pdgmres: return "pdgmres";
  }
  return "?";
}

MethodSpec method_spec(const Config& cfg, Method method) {
  auto key = [&](const std::string& k) { return lookup_key(cfg, method, k); };
  MethodSpec s;
  s.method = method;
  s.m = cfg.get_size(key("m"), 30);
  s.d = cfg.get_size(key("d"), 0);
  s.tol = cfg.get_double(key("tol"), 1e-6);
  s.max_iters = cfg.get_size(key("max_iters"), 1000);
  s.min_iters = cfg.get_size(key("min_iters"), 0);
  s.ritz_keep = cfg.get_size(key("ritz_keep"), 0);

  const std::string pc = cfg.get(key("preconditioner"), "jacobi");
  if (pc == "jacobi") {
    s.preconditioner = PreconditionerKind::Jacobi;
  } else if (pc == "identity") {
    s.preconditioner = PreconditionerKind::Identity;
  } else {
    cfg.fail(key("preconditioner"), "preconditioner must be 'jacobi' or 'identity'");
  }
  const std::string proj = cfg.get(key("projection"), "A");
  if (proj == "A") {
    s.projection = ProjectionOperator::A;
  } else if (proj == "AMinv") {
    s.projection = ProjectionOperator::APreconditioned;
  } else {
    cfg.fail(key("projection"), "projection must be 'A' or 'AMinv'");
  }
  const std::string form = cfg.get(key("formulation"), "b");
  if (form == "a") {
    s.formulation = HarmonicFormulation::A;
  } else if (form == "b") {
    s.formulation = HarmonicFormulation::B;
  } else {
    cfg.fail(key("formulation"), "formulation must be 'a' or 'b'");
  }

  if (s.m == 0) cfg.fail(key("m"), "cycle size m must be >= 1");
  if (!(s.tol > 0.0)) cfg.fail(key("tol"), "tol must be positive");
  if (s.max_iters == 0) cfg.fail(key("max_iters"), "max_iters must be >= 1");
  if (method == Method::Rdgmres) {
    if (s.d == 0) cfg.fail(key("d"), "method rdgmres requires d >= 1");
    if (s.m < s.d) {
      cfg.fail(key("d"), "method rdgmres requires m >= d (m=" + std::to_string(s.m) +
                             ", d=" + std::to_string(s.d) + ")");
    }
  }
  if (method == Method::Pdgmres && !cfg.has(key("deflation"))) {
    throw ConfigError(cfg.source(), 0, "method pdgmres requires a 'deflation' key");
  }
  return s;
}

void validate(const Config& cfg, const MethodSpec& spec, const ProblemSetup& setup) {
  const std::size_t n = setup.problem.A.n();
  if (spec.method == Method::Rdgmres && spec.d > n / 2) {
    cfg.fail(lookup_key(cfg, spec.method, "d"),
             "d=" + std::to_string(spec.d) + " exceeds n/2 for n=" + std::to_string(n));
  }
}

Partition build_partition(const Config& cfg, const ProblemSetup& setup, Method method) {
  auto key = [&](const std::string& k) { return lookup_key(cfg, method, k); };
  const std::string kind = cfg.get(key("deflation"), "");
  const Grid& grid = setup.problem.grid;
  auto need_field = [&]() -> const PermeabilityField& {
    if (!setup.field) cfg.fail(key("deflation"), "deflation '" + kind + "' needs a permeability field");
    return *setup.field;
  };
  auto boxes = [&]() {
    std::vector<std::size_t> b;
    for (const auto& item : cfg.get_list(key("boxes"))) {
      try {
        b.push_back(io::parse_index(item));
      } catch (const FormatError& e) {
        cfg.fail(key("boxes"), e.what());
      }
    }
    if (b.size() != 3) cfg.fail(key("boxes"), "boxes must be a list px, py, pz");
    return b;
  };
  const double threshold = cfg.get_double(key("jump_threshold"), 2.0);
  try {
    if (kind == "subdomain") {
      auto b = boxes();
      return subdomain_partition(grid, b[0], b[1], b[2]);
    }
    if (kind == "levelset") return levelset_partition(need_field(), threshold);
    if (kind == "subdomain-levelset") {
      auto b = boxes();
      return subdomain_levelset_partition(need_field(), b[0], b[1], b[2], threshold);
    }
    if (kind == "manual") {
      auto ranges = cfg.has(key("z_ranges")) ? parse_ranges(cfg, key("z_ranges")) : setup.case_layers;
      if (ranges.empty()) cfg.fail(key("deflation"), "manual deflation needs z_ranges");
      return manual_layers(grid, ranges);
    }
    if (kind == "file") {
      Partition p;
      p.grid = grid;
      p.kind = PartitionKind::Manual;
      p.labels = read_partition(cfg.require(key("partition_input")));
      if (p.labels.size() != grid.cells()) {
        cfg.fail(key("partition_input"), "partition has " + std::to_string(p.labels.size()) +
                                             " labels for " + std::to_string(grid.cells()) + " cells");
      }
      p.d = *std::max_element(p.labels.begin(), p.labels.end()) + 1;
      return p;
    }
  } catch (const InvalidArgument& e) {
    cfg.fail(key("deflation"), e.what());
  }
  cfg.fail(key("deflation"), "unknown deflation kind '" + kind +
                                 "' (subdomain, levelset, subdomain-levelset, manual, file)");
}

RunResult run_method(const Config& cfg, const ProblemSetup& setup, Method method) {
  RunResult r;
  r.spec = method_spec(cfg, method);
  validate(cfg, r.spec, setup);
  const auto& p = setup.problem;
  const Preconditioner M = r.spec.preconditioner == PreconditionerKind::Jacobi
                               ? Preconditioner::jacobi(p.A)
                               : Preconditioner::identity(p.A.n());
  GmresOptions o;
  o.restart = r.spec.m;
  o.tol = r.spec.tol;
  o.max_iters = r.spec.max_iters;
  o.min_iters = r.spec.min_iters;
  o.ritz_keep = r.spec.ritz_keep;
  const Vector x0 = initial_guess(cfg, p.A.n());

  switch (method) {
    case Method::Gmres:
      r.report = gmres(p.A, p.b, x0, M, o);
      break;
    case Method::Rdgmres: {
      RdgmresOptions ro;
      ro.gmres = o;
      ro.d = r.spec.d;
      ro.formulation = r.spec.formulation;
      r.report = rdgmres(p.A, p.b, x0, M, ro);
      r.d_used = r.report.deflation_dim;
      break;
    }
    case Method::Pdgmres: {
      Partition part = build_partition(cfg, setup, method);
      const bool all = cfg.get_bool(lookup_key(cfg, method, "include_excluded"), false);
      DeflationBasis z = all ? partition_to_basis(part, std::vector<std::size_t>{})
                             : partition_to_basis(part);
      r.report = pdgmres(p.A, p.b, x0, M, o, z, r.spec.projection);
      r.d_used = z.d();
      r.partition = std::move(part);
      break;
    }
  }
  return r;
}

void write_convergence_csv(std::ostream& out, const SolveReport& report) {
  out << "iter,resnorm,restart_index,deflated_flag\n";
  const double ref = report.initial_residual > 0.0 ? report.initial_residual : 1.0;
  for (std::size_t k = 0; k < report.residual_history.size(); ++k) {
    out << k << ',' << io::format_double(report.residual_history[k] / ref) << ','
        << report.cycle_of_iter[k] << ',' << (report.deflated_of_iter[k] ? 1 : 0) << '\n';
  }
}

void write_ritz_csv(std::ostream& out, const SolveReport& report) {
  out << "cycle,k,re,im\n";
  for (const auto& step : report.ritz_trace) {
    for (const auto& v : step.values) {
      out << step.cycle << ',' << step.k << ',' << io::format_double(v.real()) << ','
          << io::format_double(v.imag()) << '\n';
    }
  }
}

std::string summary_header() { return "method,m,d,iters,converged,final_relres,setup_ms,solve_ms"; }

std::string summary_line(const RunResult& r) {
  std::ostringstream s;
  s << method_name(r.spec.method) << ',' << r.spec.m << ',' << r.d_used << ','
    << r.report.iterations << ',' << (r.report.converged ? 1 : 0) << ','
    << io::format_double(r.report.relative_residual()) << ','
    << io::format_double(r.report.setup_ms) << ',' << io::format_double(r.report.solve_ms);
  return s.str();
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) != nullptr) return kConfig;
  if (dynamic_cast<const FormatError*>(&e) != nullptr) return kIo;
  if (dynamic_cast<const InvalidArgument*>(&e) != nullptr) return kConfig;
  if (dynamic_cast<const DimensionMismatch*>(&e) != nullptr) return kConfig;
  if (dynamic_cast<const Error*>(&e) != nullptr) return kNumerical;
  return kNumerical;
}

int solve_command(const Config& cfg, std::ostream& out) {
  check_known_keys(cfg);
  Method method = Method::Gmres;
  try {
    method = parse_method(cfg.get("method", "gmres"));
  } catch (const InvalidArgument& e) {
    cfg.fail("method", e.what());
  }
  method_spec(cfg, method);
  ProblemSetup setup = build_problem(cfg);
  RunResult r = run_method(cfg, setup, method);

  if (cfg.has("convergence_csv")) write_file(cfg.get("convergence_csv", ""), convergence_text(r.report));
  if (cfg.has("ritz_csv")) write_file(cfg.get("ritz_csv", ""), ritz_text(r.report));
  if (cfg.has("partition_file")) {
    if (!r.partition) cfg.fail("partition_file", "only pdgmres produces a partition");
    write_partition(cfg.get("partition_file", ""), *r.partition);
  }
  if (cfg.has("spectrum_csv")) {
    auto rep = spectrum(setup.problem.A, cfg.get_double("spectrum_cutoff", 1e-4));
    std::ostringstream s;
    write_spectrum_csv(s, rep);
    write_file(cfg.get("spectrum_csv", ""), s.str());
  }
  out << summary_header() << '\n' << summary_line(r) << '\n';
  if (!r.report.warning.empty()) out << "warning: " << r.report.warning << '\n';
  return status_code(r);
}

int compare_command(const Config& cfg, std::ostream& out) {
  check_known_keys(cfg);
  std::vector<Method> methods;
  const auto names = cfg.has("methods") ? cfg.get_list("methods")
                                        : std::vector<std::string>{"gmres", "rdgmres", "pdgmres"};
  for (const auto& name : names) {
    try {
      methods.push_back(parse_method(name));
    } catch (const InvalidArgument& e) {
      cfg.fail("methods", e.what());
    }
  }
  for (Method m : methods) method_spec(cfg, m);
  ProblemSetup setup = build_problem(cfg);
  const std::filesystem::path dir = cfg.get("output_dir", ".");
  std::filesystem::create_directories(dir);

  std::vector<RunResult> results;
  for (Method m : methods) results.push_back(run_method(cfg, setup, m));

  std::ostringstream table;
  table << summary_header() << '\n';
  int code = kOk;
  for (const auto& r : results) {
    const std::string name = method_name(r.spec.method);
    write_file(dir / (name + "_convergence.csv"), convergence_text(r.report));
    if (r.spec.ritz_keep > 0) write_file(dir / (name + "_ritz.csv"), ritz_text(r.report));
    if (r.partition) write_partition(dir / (name + "_partition.txt"), *r.partition);
    table << summary_line(r) << '\n';
    if (!r.report.converged) code = kNotConverged;
  }
  write_file(dir / "summary.csv", table.str());
  out << table.str();
  for (const auto& r : results) {
    if (!r.report.warning.empty()) out << "warning (" << method_name(r.spec.method) << "): " << r.report.warning << '\n';
  }
  return code;
}

int generate_command(const Config& cfg, const std::filesystem::path& matrix_path,
                     const std::filesystem::path& rhs_path, std::ostream& out) {
  check_known_keys(cfg);
  ProblemSetup setup = build_problem(cfg);
  io::write_matrix_market(matrix_path, setup.problem.A);
  io::write_vector(rhs_path, setup.problem.b);
  if (cfg.has("field_file") && setup.field && cfg.get("problem", "") != "file") {
    save_field_file(cfg.get("field_file", ""), *setup.field);
  }
  if (cfg.has("partition_file") && cfg.has("deflation")) {
    write_partition(cfg.get("partition_file", ""), build_partition(cfg, setup, Method::Pdgmres));
  }
  out << "n=" << setup.problem.A.n() << " nnz=" << setup.problem.A.nnz() << '\n';
  return kOk;
}

int spectrum_command(const SparseMatrix& a, double cutoff, const std::filesystem::path& csv_path,
                     std::ostream& out) {
  auto rep = spectrum(a, cutoff);
  std::ostringstream s;
  write_spectrum_csv(s, rep);
  write_file(csv_path, s.str());
  out << "n=" << a.n() << " n_small=" << rep.n_small << " cutoff=" << io::format_double(cutoff)
      << " gap_ratio=" << io::format_double(rep.gap_ratio) << '\n';
  return kOk;
}

int spectrum_command(const Config& cfg, const std::filesystem::path& csv_path, std::ostream& out) {
  check_known_keys(cfg);
  ProblemSetup setup = build_problem(cfg);
  return spectrum_command(setup.problem.A, cfg.get_double("spectrum_cutoff", 1e-4), csv_path, out);
}

int ritz_trace_command(const Config& cfg, const std::filesystem::path& csv_path,
                       std::ostream& out) {
  check_known_keys(cfg);
  Config c = cfg;
  if (!c.has("ritz_keep")) c.set("ritz_keep", "2");
  ProblemSetup setup = build_problem(c);
  RunResult r = run_method(c, setup, Method::Gmres);
  write_file(csv_path, ritz_text(r.report));
  if (c.has("convergence_csv")) write_file(c.get("convergence_csv", ""), convergence_text(r.report));
  out << summary_header() << '\n' << summary_line(r) << '\n';
  return status_code(r);
}

}  // namespace deflate::experiment
