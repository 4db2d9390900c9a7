#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "deflate/errors.hpp"
#include "deflate/experiment.hpp"
#include "deflate/io.hpp"
#include "helpers.hpp"

using namespace deflate;
using namespace deflate::experiment;
using Catch::Matchers::ContainsSubstring;

namespace {

Config cfg_of(const std::string& text) {
  std::istringstream in(text);
  return Config::parse(in, "test.cfg");
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("deflate_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST_CASE("config parsing handles comments and whitespace", "[experiment][config]") {
  auto c = cfg_of("# header\nproblem = sandwich  # trailing\n\n  m=20\nmethods = gmres, pdgmres\n");
  CHECK(c.get("problem", "") == "sandwich");
  CHECK(c.get_size("m", 0) == 20);
  CHECK(c.get_list("methods") == std::vector<std::string>{"gmres", "pdgmres"});
  CHECK(c.get_double("tol", 1e-6) == 1e-6);
  CHECK(c.entries().at("m").line == 4);
  c.set("m", "40");
  CHECK(c.get_size("m", 0) == 40);
}

TEST_CASE("config errors carry the offending line", "[experiment][config][error]") {
  try {
    cfg_of("problem = sandwich\nbogus line\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK_THAT(std::string(e.what()), ContainsSubstring("test.cfg:2:"));
  }
  CHECK_THROWS_AS(cfg_of("m = 1\nm = 2\n"), ConfigError);
  CHECK_THROWS_AS(cfg_of(" = 3\n"), ConfigError);

  auto c = cfg_of("problem = sandwich\nm = twenty\nscaling = maybe\nmethods = a,,b\n");
  CHECK_THROWS_WITH(c.get_size("m", 0), ContainsSubstring("test.cfg:2:"));
  CHECK_THROWS_AS(c.get_bool("scaling", true), ConfigError);
  CHECK_THROWS_AS(c.get_list("methods"), ConfigError);
  CHECK_THROWS_AS(c.require("nothing"), ConfigError);
  CHECK_THROWS_WITH(check_known_keys(cfg_of("problem = sandwich\nfoo = 1\n")),
                    ContainsSubstring("unknown key 'foo'"));
  CHECK_NOTHROW(check_known_keys(cfg_of("rdgmres.m = 40\npdgmres.deflation = levelset\n")));
  CHECK_THROWS_AS(check_known_keys(cfg_of("cg.m = 40\n")), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/deflate.cfg"), FormatError);
}

TEST_CASE("method specs follow the defaults and validate", "[experiment][config]") {
  auto s = method_spec(cfg_of(""), Method::Gmres);
  CHECK(s.m == 30);
  CHECK(s.tol == 1e-6);
  CHECK(s.preconditioner == PreconditionerKind::Jacobi);
  CHECK(s.projection == ProjectionOperator::A);

  auto r = method_spec(cfg_of("m = 20\nrdgmres.m = 40\nd = 3\n"), Method::Rdgmres);
  CHECK(r.m == 40);
  CHECK(r.d == 3);

  CHECK_THROWS_WITH(method_spec(cfg_of("method = pdgmres\n"), Method::Pdgmres),
                    ContainsSubstring("pdgmres requires a 'deflation' key"));
  CHECK_THROWS_AS(method_spec(cfg_of("m = 2\nd = 3\n"), Method::Rdgmres), ConfigError);
  CHECK_THROWS_AS(method_spec(cfg_of(""), Method::Rdgmres), ConfigError);
  CHECK_THROWS_AS(method_spec(cfg_of("tol = 0\n"), Method::Gmres), ConfigError);
  CHECK_THROWS_AS(method_spec(cfg_of("m = 0\n"), Method::Gmres), ConfigError);
  CHECK_THROWS_AS(method_spec(cfg_of("preconditioner = ilu\n"), Method::Gmres), ConfigError);
  CHECK_THROWS_AS(method_spec(cfg_of("projection = B\n"), Method::Gmres), ConfigError);
  CHECK_THROWS_AS(parse_method("cg"), InvalidArgument);
  CHECK(method_name(parse_method("rdgmres")) == "rdgmres");
}

TEST_CASE("problems are built from config keys", "[experiment][config]") {
  auto s = build_problem(cfg_of("problem = sandwich\nsigma = 1e6\n"));
  CHECK(s.problem.A.n() == 147);
  CHECK(s.problem.scaled());
  CHECK(s.case_layers.size() == 3);

  auto l = build_problem(cfg_of("problem = layered\nnx = 3\nny = 2\nnz = 4\nlayers = 0:2:1, 2:4:1e-3\n"
                                "wells = 0:0:0:1\nscaling = off\n"));
  CHECK(l.problem.A.n() == 24);
  CHECK_FALSE(l.problem.scaled());
  CHECK(l.problem.b[0] == 1.0);

  auto h = build_problem(cfg_of("problem = homogeneous\nnx = 4\nny = 4\nnz = 1\nbc = neumann\n"
                                "wells = 0:0:0:1, 3:3:0:-1\n"));
  CHECK(h.field.has_value());

  CHECK_THROWS_AS(build_problem(cfg_of("problem = moon\n")), ConfigError);
  CHECK_THROWS_AS(build_problem(cfg_of("problem = layered\nnx = 2\nnz = 2\nlayers = 0:1\n")), ConfigError);
  CHECK_THROWS_AS(build_problem(cfg_of("problem = sandwich\nbc = robin\n")), ConfigError);
  CHECK_THROWS_AS(build_problem(cfg_of("problem = sandwich\nwells = 9:9:9:1\n")), ConfigError);
  CHECK_THROWS_AS(build_problem(cfg_of("problem = homogeneous\nnx = 2\nbc = neumann\nwells = 0:0:0:1\n")),
                  Error);
}

TEST_CASE("validation catches d larger than n/2", "[experiment][config][error]") {
  auto cfg = cfg_of("problem = homogeneous\nnx = 4\nm = 4\nd = 3\n");
  auto setup = build_problem(cfg);
  CHECK_THROWS_AS(run_method(cfg, setup, Method::Rdgmres), ConfigError);
}

TEST_CASE("convergence and ritz CSV schemas", "[experiment][csv]") {
  SolveReport r;
  r.initial_residual = 2.0;
  r.residual_history = {2.0, 1.0, 0.5};
  r.cycle_of_iter = {0, 0, 1};
  r.deflated_of_iter = {false, false, true};
  r.ritz_trace = {{0, 1, {Complex(0.5, 0.0)}}, {0, 2, {Complex(0.1, 0.2), Complex(0.1, -0.2)}}};
  std::ostringstream c;
  write_convergence_csv(c, r);
  CHECK(c.str() == "iter,resnorm,restart_index,deflated_flag\n0,1,0,0\n1,0.5,0,0\n2,0.25,1,1\n");
  std::ostringstream z;
  write_ritz_csv(z, r);
  CHECK(z.str() == "cycle,k,re,im\n0,1,0.5,0\n0,2,0.1,0.2\n0,2,0.1,-0.2\n");
  CHECK(summary_header() == "method,m,d,iters,converged,final_relres,setup_ms,solve_ms");
}

TEST_CASE("pdgmres with levelset on a homogeneous field uses one vector", "[experiment]") {
  auto cfg = cfg_of("problem = homogeneous\nnx = 5\nny = 5\nnz = 3\nwells = 0:0:0:1\n"
                    "method = pdgmres\ndeflation = levelset\n");
  auto setup = build_problem(cfg);
  auto r = run_method(cfg, setup, Method::Pdgmres);
  CHECK(r.d_used == 1);
  CHECK(r.report.converged);
  CHECK_THAT(summary_line(r), Catch::Matchers::StartsWith("pdgmres,30,1,"));
}

TEST_CASE("deflation kinds resolve to partitions", "[experiment]") {
  auto base = std::string("problem = sandwich\nmethod = pdgmres\n");
  auto setup = build_problem(cfg_of(base));
  CHECK(build_partition(cfg_of(base + "deflation = levelset\n"), setup, Method::Pdgmres).d == 3);
  CHECK(build_partition(cfg_of(base + "deflation = manual\n"), setup, Method::Pdgmres).d == 3);
  CHECK(build_partition(cfg_of(base + "deflation = manual\nz_ranges = 0:1, 1:3\n"), setup, Method::Pdgmres).d == 2);
  CHECK(build_partition(cfg_of(base + "deflation = subdomain\nboxes = 2, 2, 1\n"), setup, Method::Pdgmres).d == 4);
  CHECK(build_partition(cfg_of(base + "deflation = subdomain-levelset\nboxes = 1, 1, 1\n"), setup,
                        Method::Pdgmres)
            .d == 3);
  CHECK_THROWS_AS(build_partition(cfg_of(base + "deflation = magic\n"), setup, Method::Pdgmres), ConfigError);
  CHECK_THROWS_AS(build_partition(cfg_of(base + "deflation = subdomain\nboxes = 2, 2\n"), setup,
                                  Method::Pdgmres),
                  ConfigError);
  CHECK_THROWS_AS(build_partition(cfg_of(base + "deflation = subdomain\nboxes = 9, 1, 1\n"), setup,
                                  Method::Pdgmres),
                  ConfigError);
}

TEST_CASE("solve writes the requested artifacts", "[experiment][cli]") {
  auto dir = scratch_dir("solve");
  auto cfg = cfg_of("problem = sandwich\nmethod = pdgmres\nm = 20\ndeflation = levelset\nritz_keep = 2\n");
  cfg.set("convergence_csv", (dir / "conv.csv").string());
  cfg.set("ritz_csv", (dir / "ritz.csv").string());
  cfg.set("partition_file", (dir / "part.txt").string());
  cfg.set("spectrum_csv", (dir / "spec.csv").string());
  std::ostringstream out;
  CHECK(solve_command(cfg, out) == kOk);
  CHECK_THAT(out.str(), ContainsSubstring("pdgmres,20,3,"));
  CHECK(first_line(slurp(dir / "conv.csv")) == "iter,resnorm,restart_index,deflated_flag");
  CHECK(first_line(slurp(dir / "ritz.csv")) == "cycle,k,re,im");
  CHECK(first_line(slurp(dir / "spec.csv")) == "index,re,im,abs");
  CHECK(read_partition(dir / "part.txt").size() == 147);
  std::filesystem::remove_all(dir);
}

TEST_CASE("solve reports non-convergence through its exit code", "[experiment][cli]") {
  auto cfg = cfg_of("problem = sandwich\nm = 20\nmax_iters = 30\n");
  std::ostringstream out;
  CHECK(solve_command(cfg, out) == kNotConverged);
  CHECK_THAT(out.str(), ContainsSubstring("gmres,20,0,30,0,"));
}

TEST_CASE("runs are deterministic, including random initial guesses", "[experiment]") {
  auto cfg = cfg_of("problem = black-oil\nmethod = rdgmres\nd = 2\nx0 = random\nseed = 7\n");
  auto setup = build_problem(cfg);
  auto a = run_method(cfg, setup, Method::Rdgmres);
  auto b = run_method(cfg, setup, Method::Rdgmres);
  CHECK(a.report.residual_history == b.report.residual_history);
  CHECK(a.report.x == b.report.x);
  CHECK(a.report.initial_residual != run_method(cfg_of("problem = black-oil\nd = 2\n"), setup,
                                                Method::Rdgmres).report.initial_residual);
}

TEST_CASE("generated files solve exactly like the in-memory problem", "[experiment][cli]") {
  auto dir = scratch_dir("generate");
  auto cfg = cfg_of("problem = black-oil\nm = 20\n");
  std::ostringstream out;
  REQUIRE(generate_command(cfg, dir / "A.mtx", dir / "b.txt", out) == kOk);
  CHECK_THAT(out.str(), ContainsSubstring("n=2250"));

  auto mem = run_method(cfg, build_problem(cfg), Method::Gmres);
  auto file_cfg = cfg_of("problem = matrix\nm = 20\n");
  file_cfg.set("matrix_file", (dir / "A.mtx").string());
  file_cfg.set("rhs_file", (dir / "b.txt").string());
  auto disk = run_method(file_cfg, build_problem(file_cfg), Method::Gmres);
  CHECK(disk.report.residual_history == mem.report.residual_history);
  CHECK(disk.report.x == mem.report.x);
  CHECK(disk.report.iterations == mem.report.iterations);
  std::filesystem::remove_all(dir);
}

TEST_CASE("generate can emit a field and a partition", "[experiment][cli]") {
  auto dir = scratch_dir("generate_extra");
  auto cfg = cfg_of("problem = sandwich\ndeflation = levelset\n");
  cfg.set("field_file", (dir / "field.txt").string());
  cfg.set("partition_file", (dir / "part.txt").string());
  std::ostringstream out;
  REQUIRE(generate_command(cfg, dir / "A.mtx", dir / "b.txt", out) == kOk);
  auto labels = read_partition(dir / "part.txt");
  CHECK(labels.size() == 147);
  CHECK(*std::max_element(labels.begin(), labels.end()) == 2);

  auto from_file = cfg_of("problem = file\nnx = 7\nny = 7\nnz = 3\nwells = 0:0:2:1, 6:6:0:-1\n"
                          "method = pdgmres\ndeflation = file\n");
  from_file.set("field_file", (dir / "field.txt").string());
  from_file.set("partition_input", (dir / "part.txt").string());
  auto setup = build_problem(from_file);
  auto orig = build_problem(cfg_of("problem = sandwich\n"));
  CHECK(setup.problem.A.to_dense() == orig.problem.A.to_dense());
  auto r = run_method(from_file, setup, Method::Pdgmres);
  CHECK(r.d_used == 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("spectrum command on the 3x3 identity", "[experiment][cli]") {
  auto dir = scratch_dir("spectrum");
  std::ostringstream out;
  CHECK(spectrum_command(SparseMatrix::identity(3), 0.5, dir / "s.csv", out) == kOk);
  CHECK(slurp(dir / "s.csv") == "index,re,im,abs\n0,1,0,1\n1,1,0,1\n2,1,0,1\n");
  CHECK_THAT(out.str(), ContainsSubstring("n_small=0"));
  std::ostringstream out2;
  CHECK(spectrum_command(cfg_of("problem = sandwich\n"), dir / "t.csv", out2) == kOk);
  CHECK_THAT(out2.str(), ContainsSubstring("n_small=2"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("ritz-trace restarts with each cycle", "[experiment][cli]") {
  auto dir = scratch_dir("ritz");
  std::ostringstream out;
  ritz_trace_command(cfg_of("problem = sandwich\nm = 20\nmax_iters = 60\npreconditioner = identity\n"),
                     dir / "r.csv", out);
  std::ifstream in(dir / "r.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "cycle,k,re,im");
  std::size_t resets = 0;
  std::size_t prev_k = 0;
  while (std::getline(in, line)) {
    std::size_t k = std::stoul(line.substr(line.find(',') + 1));
    if (k < prev_k) ++resets;
    prev_k = k;
  }
  CHECK(resets == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("compare writes aligned outputs and a summary table", "[experiment][cli]") {
  auto dir = scratch_dir("compare");
  auto cfg = Config::load(std::filesystem::path(DEFLATE_CONFIG_DIR) / "black_oil_compare.cfg");
  cfg.set("output_dir", dir.string());
  std::ostringstream out;
  CHECK(compare_command(cfg, out) == kOk);
  for (const char* m : {"gmres", "rdgmres", "pdgmres"}) {
    CHECK(std::filesystem::exists(dir / (std::string(m) + "_convergence.csv")));
  }
  CHECK(std::filesystem::exists(dir / "pdgmres_partition.txt"));
  auto summary = slurp(dir / "summary.csv");
  CHECK(first_line(summary) == summary_header());
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 4);
  CHECK(out.str() == summary);
  std::filesystem::remove_all(dir);
}

TEST_CASE("library errors map to exit codes", "[experiment][error]") {
  std::ostringstream err;
  CHECK(guarded([]() -> int { throw ConfigError("x", 1, "bad"); }, err) == kConfig);
  CHECK(guarded([]() -> int { throw FormatError("bad"); }, err) == kIo);
  CHECK(guarded([]() -> int { throw InvalidArgument("bad"); }, err) == kConfig);
  CHECK(guarded([]() -> int { throw DimensionMismatch("bad"); }, err) == kConfig);
  CHECK(guarded([]() -> int { throw SingularCoarseMatrix("bad"); }, err) == kNumerical);
  CHECK(guarded([]() -> int { return kNotConverged; }, err) == kNotConverged);
  CHECK_THAT(err.str(), ContainsSubstring("error: x:1: bad"));
}
