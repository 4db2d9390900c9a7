#ifndef DEFLATE_EXPERIMENT_HPP
#define DEFLATE_EXPERIMENT_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deflate/errors.hpp"
#include "deflate/harmonic_ritz.hpp"
#include "deflate/krylov.hpp"
#include "deflate/physics.hpp"
#include "deflate/testbed.hpp"

namespace deflate::experiment {

/// Invalid configuration. `line` is 0 when the problem is not tied to a line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Flat `key = value` configuration with `#` comments.
class Config {
 public:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };

  static Config parse(std::istream& in, const std::string& source = "config");
  static Config load(const std::filesystem::path& path);

  const std::string& source() const { return source_; }
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  /// Adds or replaces a key (command-line overrides use line 0).
  void set(const std::string& key, const std::string& value);

  std::string get(const std::string& key, const std::string& fallback) const;
  std::string require(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;

  /// Error anchored at the line that defined `key`.
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  std::string source_ = "config";
  std::map<std::string, Entry> entries_;
};

/// Rejects keys that no part of the driver understands.
void check_known_keys(const Config& cfg);

struct ProblemSetup {
  std::string name;
  PressureProblem problem;
  /// Present when the problem came from a permeability field.
  std::optional<PermeabilityField> field;
  /// Layer ranges suggested by the case for manual deflation.
  std::vector<ZRange> case_layers;
};

ProblemSetup build_problem(const Config& cfg);

enum class Method { Gmres, Rdgmres, Pdgmres };

Method parse_method(const std::string& name);
std::string method_name(Method m);

struct MethodSpec {
  Method method = Method::Gmres;
  std::size_t m = 30;
  std::size_t d = 0;
  double tol = 1e-6;
  std::size_t max_iters = 1000;
  std::size_t min_iters = 0;
  PreconditionerKind preconditioner = PreconditionerKind::Jacobi;
  ProjectionOperator projection = ProjectionOperator::A;
  HarmonicFormulation formulation = HarmonicFormulation::B;
  std::size_t ritz_keep = 0;
};

/// Reads solver settings; `method.key` entries override `key` for that method.
MethodSpec method_spec(const Config& cfg, Method method);

/// Checks the method-level invariants against the assembled problem.
void validate(const Config& cfg, const MethodSpec& spec, const ProblemSetup& setup);

/// Partition requested by the `deflation` key, for a problem with a field.
Partition build_partition(const Config& cfg, const ProblemSetup& setup, Method method);

struct RunResult {
  MethodSpec spec;
  SolveReport report;
  /// Number of deflation vectors actually used.
  std::size_t d_used = 0;
  std::optional<Partition> partition;
};

RunResult run_method(const Config& cfg, const ProblemSetup& setup, Method method);

/// `iter,resnorm,restart_index,deflated_flag`; resnorm is relative to ||b - A x0||.
void write_convergence_csv(std::ostream& out, const SolveReport& report);
/// `cycle,k,re,im`; the values of each (cycle, k) come in ascending magnitude.
void write_ritz_csv(std::ostream& out, const SolveReport& report);
std::string summary_header();
std::string summary_line(const RunResult& r);

/// Process exit codes of the driver.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfig = 2,
  kNotConverged = 3,
  kNumerical = 4,
  kIo = 5,
};

int solve_command(const Config& cfg, std::ostream& out);
int compare_command(const Config& cfg, std::ostream& out);
int generate_command(const Config& cfg, const std::filesystem::path& matrix_path,
                     const std::filesystem::path& rhs_path, std::ostream& out);
int spectrum_command(const Config& cfg, const std::filesystem::path& csv_path, std::ostream& out);
int spectrum_command(const SparseMatrix& a, double cutoff, const std::filesystem::path& csv_path,
                     std::ostream& out);
int ritz_trace_command(const Config& cfg, const std::filesystem::path& csv_path,
                       std::ostream& out);

/// Runs `fn`, mapping library errors to exit codes and messages on `err`.
template <typename Fn>
int guarded(Fn&& fn, std::ostream& err);

int exit_code_for(const std::exception& e);

}  // namespace deflate::experiment

#include <ostream>

namespace deflate::experiment {

template <typename Fn>
int guarded(Fn&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace deflate::experiment

#endif
