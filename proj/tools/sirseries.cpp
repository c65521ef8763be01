// Command-line front end: solve, residual, phase, compare.
//
// Exit codes: 0 success, 1 usage/parse error, 2 tolerance violation,
// 3 numeric divergence.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sirseries/sirseries.hpp"

namespace {

struct CommonFlags {
  std::string method;
  int degree = 10;
  std::string params_path;
  std::string grid_spec;
  std::string times_list;
  std::string format = "csv";
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonFlags& flags, const std::string& method_default) {
  flags.method = method_default;
  cmd->add_option("--method", flags.method, "Solution method")
      ->check(CLI::IsMember({"dtm", "ladm", "both"}))
      ->capture_default_str();
  cmd->add_option("--degree", flags.degree, "Highest retained power of t")
      ->capture_default_str();
  cmd->add_option("--params", flags.params_path,
                  "Parameter file (key = value lines)");
  auto* grid = cmd->add_option("--grid", flags.grid_spec,
                               "Evaluation grid START:END:COUNT");
  cmd->add_option("--times", flags.times_list, "Explicit times t1,t2,...")
      ->excludes(grid);
  cmd->add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", flags.out_path, "Output file (default stdout)");
}

sirseries::RunRequest build_request(const CommonFlags& flags,
                                    sirseries::Command command) {
  sirseries::RunRequest req;
  req.command = command;
  req.method = flags.method == "dtm"    ? sirseries::MethodChoice::dtm
               : flags.method == "ladm" ? sirseries::MethodChoice::ladm
                                        : sirseries::MethodChoice::both;
  if (flags.degree < 0)
    throw sirseries::UsageError("--degree must be >= 0");
  req.degree = flags.degree;
  if (!flags.grid_spec.empty()) req.grid = sirseries::parse_grid(flags.grid_spec);
  if (!flags.times_list.empty()) req.grid = sirseries::parse_times(flags.times_list);
  req.params_path = flags.params_path;
  req.format = flags.format == "json" ? sirseries::OutputFormat::json
                                      : sirseries::OutputFormat::csv;
  req.out_path = flags.out_path;
  return req;
}

int dispatch(const sirseries::RunRequest& req) {
  if (req.out_path.empty()) return sirseries::run_request(req, std::cout);
  std::ofstream out(req.out_path, std::ios::binary);
  if (!out)
    throw sirseries::UsageError("cannot open output file '" + req.out_path + "'");
  return sirseries::run_request(req, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Truncated power-series solvers (DTM and LADM) for the modified SIR "
      "computer-virus model, with residual and Runge-Kutta verification"};
  app.require_subcommand(1);

  CommonFlags solve_flags, residual_flags, phase_flags, compare_flags;
  std::string reference_path;
  double tol_coeff = 1e-12, tol_oracle = 1e-9;

  auto* solve = app.add_subcommand("solve", "Emit solution coefficients");
  add_common(solve, solve_flags, "both");

  auto* residual =
      app.add_subcommand("residual", "Emit residual-error tables on a grid");
  add_common(residual, residual_flags, "both");
  residual->add_option("--reference", reference_path,
                       "CSV of reference residual columns (t,E_S,E_I,E_R)");

  auto* phase = app.add_subcommand("phase", "Emit (t,S,I,R) samples on a grid");
  add_common(phase, phase_flags, "ladm");

  auto* compare =
      app.add_subcommand("compare", "Check DTM/LADM/RK4 mutual agreement");
  add_common(compare, compare_flags, "both");
  compare->add_option("--tol-coeff", tol_coeff,
                      "Relative DTM/LADM coefficient tolerance")
      ->capture_default_str();
  compare->add_option("--tol-oracle", tol_oracle,
                      "Absolute deviation tolerance against the RK4 reference")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    sirseries::RunRequest req;
    if (solve->parsed()) {
      req = build_request(solve_flags, sirseries::Command::solve);
    } else if (residual->parsed()) {
      req = build_request(residual_flags, sirseries::Command::residual);
      req.reference_path = reference_path;
    } else if (phase->parsed()) {
      req = build_request(phase_flags, sirseries::Command::phase);
    } else {
      req = build_request(compare_flags, sirseries::Command::compare);
      req.tol_coeff = tol_coeff;
      req.tol_oracle = tol_oracle;
    }
    return dispatch(req);
  } catch (const sirseries::OverflowError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const sirseries::DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const sirseries::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
