// Command line driver: generate, solve, compare, spectrum, ritz-trace.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "deflate/experiment.hpp"
#include "deflate/io.hpp"

namespace ex = deflate::experiment;

namespace {

ex::Config load_config(const std::string& path, const std::vector<std::string>& overrides) {
  ex::Config cfg = path.empty() ? ex::Config{} : ex::Config::load(path);
  for (const auto& kv : overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ex::ConfigError("--set", 0, "expected key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deflated GMRES experiments on structured pressure problems"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> overrides;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("-c,--config", config, "experiment configuration file");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    sub->add_option("-s,--set", overrides, "override a configuration entry, key=value");
  };

  auto* solve = app.add_subcommand("solve", "run one method on one problem");
  add_common(solve, true);

  auto* compare = app.add_subcommand("compare", "run a list of methods on one problem");
  add_common(compare, true);

  std::string matrix_out = "matrix.mtx";
  std::string rhs_out = "rhs.txt";
  auto* generate = app.add_subcommand("generate", "write the assembled matrix and right-hand side");
  add_common(generate, true);
  generate->add_option("--matrix", matrix_out, "Matrix Market output")->capture_default_str();
  generate->add_option("--rhs", rhs_out, "right-hand side output")->capture_default_str();

  std::string spectrum_out = "spectrum.csv";
  std::string matrix_in;
  double cutoff = 1e-4;
  auto* spectrum = app.add_subcommand("spectrum", "dense spectrum of the problem matrix");
  add_common(spectrum, false);
  spectrum->add_option("--matrix", matrix_in, "read a Matrix Market file instead of a config")
      ->check(CLI::ExistingFile);
  spectrum->add_option("--cutoff", cutoff, "magnitude cutoff for counting small eigenvalues")
      ->capture_default_str();
  spectrum->add_option("-o,--out", spectrum_out, "CSV output")->capture_default_str();

  std::string ritz_out = "ritz.csv";
  auto* ritz = app.add_subcommand("ritz-trace", "GMRES with per-step Ritz values");
  add_common(ritz, true);
  ritz->add_option("-o,--out", ritz_out, "CSV output")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return ex::kUsage;
  }

  return ex::guarded(
      [&]() -> int {
        if (*spectrum && !matrix_in.empty()) {
          return ex::spectrum_command(deflate::io::read_matrix_market(
                                          std::filesystem::path(matrix_in)),
                                      cutoff, spectrum_out, std::cout);
        }
        if (*spectrum && config.empty()) {
          throw ex::ConfigError("spectrum", 0, "either --config or --matrix is required");
        }
        ex::Config cfg = load_config(config, overrides);
        if (*solve) return ex::solve_command(cfg, std::cout);
        if (*compare) return ex::compare_command(cfg, std::cout);
        if (*generate) return ex::generate_command(cfg, matrix_out, rhs_out, std::cout);
        if (*spectrum) {
          if (!cfg.has("spectrum_cutoff")) cfg.set("spectrum_cutoff", deflate::io::format_double(cutoff));
          return ex::spectrum_command(cfg, spectrum_out, std::cout);
        }
        return ex::ritz_trace_command(cfg, ritz_out, std::cout);
      },
      std::cerr);
}
