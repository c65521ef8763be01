#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sirseries/dtm.hpp"
#include "sirseries/io.hpp"
#include "sirseries/ladm.hpp"
#include "sirseries/model.hpp"
#include "sirseries/oracle.hpp"

namespace sirseries {

enum class Command { solve, residual, phase, compare };
enum class MethodChoice { dtm, ladm, both };
enum class OutputFormat { csv, json };

/// Evaluation times, finite and nondecreasing, at least one entry.
struct Grid {
  std::vector<double> times;
};

inline Grid make_grid(double start, double end, Index count) {
  if (count < 1) throw UsageError("grid: count must be >= 1");
  if (!(std::isfinite(start) && std::isfinite(end)))
    throw UsageError("grid: endpoints must be finite");
  if (count > 1 && end < start)
    throw UsageError("grid: end must be >= start");
  Grid grid;
  grid.times.resize(std::size_t(count));
  grid.times.front() = start;
  for (Index k = 1; k + 1 < count; ++k)
    grid.times[std::size_t(k)] =
        start + (end - start) * (double(k) / double(count - 1));
  if (count > 1) grid.times.back() = end;
  return grid;
}

namespace detail {

inline double parse_cli_scalar(std::string_view token, const char* what) {
  const std::string text{trim(token)};
  char* end = nullptr;
  const double value = text.empty() ? 0.0 : std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(value))
    throw UsageError(std::string(what) + ": cannot parse number '" + text + "'");
  return value;
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = std::min(text.find(sep, pos), text.size());
    out.push_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

}  // namespace detail

/// Parses `START:END:COUNT`.
inline Grid parse_grid(std::string_view spec) {
  const auto parts = detail::split(spec, ':');
  if (parts.size() != 3)
    throw UsageError("grid: expected START:END:COUNT, got '" + std::string(spec) + "'");
  const double start = detail::parse_cli_scalar(parts[0], "grid start");
  const double end = detail::parse_cli_scalar(parts[1], "grid end");
  const double count = detail::parse_cli_scalar(parts[2], "grid count");
  if (count != std::floor(count) || count < 1 || count > 1e7)
    throw UsageError("grid: COUNT must be a positive integer");
  return make_grid(start, end, Index(count));
}

/// Parses an explicit `t1,t2,...` list; times must be nondecreasing.
inline Grid parse_times(std::string_view list) {
  Grid grid;
  for (const auto& token : detail::split(list, ','))
    grid.times.push_back(detail::parse_cli_scalar(token, "times"));
  if (grid.times.empty()) throw UsageError("times: empty list");
  for (std::size_t k = 1; k < grid.times.size(); ++k)
    if (grid.times[k] < grid.times[k - 1])
      throw UsageError("times: values must be nondecreasing");
  return grid;
}

struct RunRequest {
  Command command = Command::solve;
  MethodChoice method = MethodChoice::both;
  Index degree = 10;
  Grid grid;                   // empty: per-command default
  std::string params_path;     // empty: built-in defaults
  OutputFormat format = OutputFormat::csv;
  std::string out_path;        // empty: stdout
  double tol_coeff = 1e-12;    // compare: DTM/LADM coefficient agreement
  double tol_oracle = 1e-9;    // compare: deviation from the RK4 reference
  std::string reference_path;  // residual: optional reference error columns
};

/// Display form mirroring the printed-series style, e.g.
/// "20 - 2.3 t + 0.15425 t^2".
inline std::string polynomial_string(const PowerSeriesd& p,
                                     std::string_view var = "t") {
  std::string out;
  for (Index k = 0; k <= p.degree(); ++k) {
    const double c = p[k];
    if (c == 0.0) continue;
    if (out.empty()) {
      out += format_display(c);
    } else {
      out += c < 0 ? " - " : " + ";
      out += format_display(std::abs(c));
    }
    if (k >= 1) {
      out += ' ';
      out += var;
      if (k > 1) out += '^' + std::to_string(k);
    }
  }
  return out.empty() ? "0" : out;
}

namespace detail {

// Both n-label conventions for a given truncation degree: n-term partial
// sums have degree n, while n-coefficient listings have degree n-1.
inline std::string degree_label(Index degree) {
  return "degree=" + std::to_string(degree) + " (n-labels: dtm n=" +
         std::to_string(degree + 1) + ", ladm n=" + std::to_string(degree) + ")";
}

inline std::string json_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

inline std::vector<SeriesSolutiond> solve_methods(const RunRequest& req,
                                                  const SirParamsd& params,
                                                  const InitialStated& init) {
  std::vector<SeriesSolutiond> out;
  if (req.method != MethodChoice::ladm)
    out.push_back(dtm_solve(params, init, req.degree));
  if (req.method != MethodChoice::dtm)
    out.push_back(ladm_solve(params, init, req.degree).solution);
  return out;
}

inline Grid effective_grid(const RunRequest& req) {
  if (!req.grid.times.empty()) return req.grid;
  switch (req.command) {
    case Command::phase:
      return make_grid(0.0, 1.0, 101);
    default:
      return make_grid(0.0, 1.0, 6);
  }
}

inline std::vector<std::array<double, 3>> parse_reference_csv(
    std::string_view text) {
  std::vector<std::array<double, 3>> rows;
  bool saw_content = false;
  int line = 0;
  while (!text.empty()) {
    ++line;
    const std::size_t nl = std::min(text.find('\n'), text.size());
    std::string_view row = text.substr(0, nl);
    text.remove_prefix(std::min(nl + 1, text.size()));
    row = row.substr(0, std::min(row.find('#'), row.size()));
    row = trim(row);
    if (row.empty()) continue;
    const auto fields = split(row, ',');
    if (fields.size() != 4)
      throw ParseError("reference line " + std::to_string(line) +
                       ": expected t,E_S,E_I,E_R");
    if (!saw_content) {
      saw_content = true;
      char* end = nullptr;
      const std::string head{trim(fields[0])};
      std::strtod(head.c_str(), &end);
      if (end != head.c_str() + head.size()) continue;  // header row
    }
    std::array<double, 3> values{};
    for (int k = 0; k < 3; ++k)
      values[std::size_t(k)] = parse_cli_scalar(fields[std::size_t(k + 1)],
                                                "reference value");
    rows.push_back(values);
  }
  return rows;
}

inline std::string read_text_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError(std::string(what) + ": cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace detail

/// Coefficient report: arrays at full precision plus the 6-digit polynomial
/// display for each method.
inline void run_solve(const RunRequest& req, const SirParamsd& params,
                      const InitialStated& init, std::ostream& out) {
  const auto solutions = detail::solve_methods(req, params, init);
  if (req.format == OutputFormat::csv) {
    out << "# solve " << detail::degree_label(req.degree) << '\n';
    for (const auto& sol : solutions) {
      const char* m = method_name(sol.method);
      out << "# " << m << " S(t) = " << polynomial_string(sol.s) << '\n'
          << "# " << m << " I(t) = " << polynomial_string(sol.i) << '\n'
          << "# " << m << " R(t) = " << polynomial_string(sol.r) << '\n';
    }
    out << 'k';
    for (const auto& sol : solutions) {
      const char* m = method_name(sol.method);
      out << ",S_" << m << ",I_" << m << ",R_" << m;
    }
    out << '\n';
    for (Index k = 0; k <= req.degree; ++k) {
      out << k;
      for (const auto& sol : solutions)
        out << ',' << format_full(sol.s[k]) << ',' << format_full(sol.i[k])
            << ',' << format_full(sol.r[k]);
      out << '\n';
    }
    return;
  }

  auto report = [&](const SeriesSolutiond& sol, std::string_view indent) {
    std::ostringstream os;
    os << indent << "\"method\": \"" << method_name(sol.method) << "\",\n"
       << indent << "\"degree\": " << sol.degree << ",\n"
       << indent << "\"labels\": {\"dtm_n\": " << sol.degree + 1
       << ", \"ladm_n\": " << sol.degree << "},\n"
       << indent << "\"coefficients\": {\n"
       << indent << "  \"s\": " << to_json(sol.s) << ",\n"
       << indent << "  \"i\": " << to_json(sol.i) << ",\n"
       << indent << "  \"r\": " << to_json(sol.r) << "\n"
       << indent << "},\n"
       << indent << "\"polynomials\": {\n"
       << indent << "  \"s\": \"" << detail::json_escape(polynomial_string(sol.s))
       << "\",\n"
       << indent << "  \"i\": \"" << detail::json_escape(polynomial_string(sol.i))
       << "\",\n"
       << indent << "  \"r\": \"" << detail::json_escape(polynomial_string(sol.r))
       << "\"\n"
       << indent << "}";
    return os.str();
  };
  if (solutions.size() == 1) {
    out << "{\n" << report(solutions[0], "  ") << "\n}\n";
  } else {
    out << "{\n  \"reports\": [\n";
    for (std::size_t k = 0; k < solutions.size(); ++k)
      out << "    {\n"
          << report(solutions[k], "      ") << "\n    }"
          << (k + 1 < solutions.size() ? ",\n" : "\n");
    out << "  ]\n}\n";
  }
}

/// Residual-magnitude table |E_S|, |E_I|, |E_R| on the grid, one column group
/// per method; default grid 0, 0.2, ..., 1.0.
inline void run_residual(const RunRequest& req, const SirParamsd& params,
                         const InitialStated& init, std::ostream& out) {
  const Grid grid = detail::effective_grid(req);
  const auto solutions = detail::solve_methods(req, params, init);
  std::vector<std::array<double, 3>> reference;
  if (!req.reference_path.empty()) {
    reference = detail::parse_reference_csv(
        detail::read_text_file(req.reference_path, "reference"));
    if (reference.size() != grid.times.size())
      throw UsageError("reference rows (" + std::to_string(reference.size()) +
                       ") do not match grid points (" +
                       std::to_string(grid.times.size()) + ")");
  }

  std::vector<std::vector<ResidualSampled>> table(solutions.size());
  for (std::size_t m = 0; m < solutions.size(); ++m)
    for (double t : grid.times)
      table[m].push_back(residual_point(solutions[m], params, t));

  if (req.format == OutputFormat::csv) {
    out << "# residual " << detail::degree_label(req.degree) << '\n';
    out << 't';
    for (const auto& sol : solutions) {
      const char* m = method_name(sol.method);
      out << ",E_S_" << m << ",E_I_" << m << ",E_R_" << m;
    }
    if (!reference.empty()) out << ",E_S_ref,E_I_ref,E_R_ref";
    out << '\n';
    for (std::size_t row = 0; row < grid.times.size(); ++row) {
      out << format_full(grid.times[row]);
      for (std::size_t m = 0; m < solutions.size(); ++m) {
        const auto& sample = table[m][row];
        out << ',' << format_full(std::abs(sample.e_s)) << ','
            << format_full(std::abs(sample.e_i)) << ','
            << format_full(std::abs(sample.e_r));
      }
      if (!reference.empty())
        out << ',' << format_full(reference[row][0]) << ','
            << format_full(reference[row][1]) << ','
            << format_full(reference[row][2]);
      out << '\n';
    }
    return;
  }

  auto rows_json = [&](std::size_t m, std::string_view indent) {
    std::ostringstream os;
    os << indent << "\"residual_table\": [\n";
    for (std::size_t row = 0; row < grid.times.size(); ++row) {
      const auto& sample = table[m][row];
      os << indent << "  {\"t\": " << format_full(grid.times[row])
         << ", \"e_s\": " << format_full(std::abs(sample.e_s))
         << ", \"e_i\": " << format_full(std::abs(sample.e_i))
         << ", \"e_r\": " << format_full(std::abs(sample.e_r)) << "}"
         << (row + 1 < grid.times.size() ? ",\n" : "\n");
    }
    os << indent << "]";
    return os.str();
  };
  auto method_json = [&](std::size_t m, std::string_view indent) {
    std::ostringstream os;
    os << indent << "\"method\": \"" << method_name(solutions[m].method)
       << "\",\n"
       << indent << "\"degree\": " << req.degree << ",\n"
       << rows_json(m, indent);
    return os.str();
  };
  std::ostringstream ref_json;
  if (!reference.empty()) {
    ref_json << "  \"reference\": [\n";
    for (std::size_t row = 0; row < reference.size(); ++row)
      ref_json << "    {\"t\": " << format_full(grid.times[row])
               << ", \"e_s\": " << format_full(reference[row][0])
               << ", \"e_i\": " << format_full(reference[row][1])
               << ", \"e_r\": " << format_full(reference[row][2]) << "}"
               << (row + 1 < reference.size() ? ",\n" : "\n");
    ref_json << "  ]";
  }
  if (solutions.size() == 1) {
    out << "{\n" << method_json(0, "  ");
    if (!reference.empty()) out << ",\n" << ref_json.str();
    out << "\n}\n";
  } else {
    out << "{\n  \"reports\": [\n";
    for (std::size_t m = 0; m < solutions.size(); ++m)
      out << "    {\n"
          << method_json(m, "      ") << "\n    }"
          << (m + 1 < solutions.size() ? ",\n" : "\n");
    out << "  ]";
    if (!reference.empty()) out << ",\n" << ref_json.str();
    out << "\n}\n";
  }
}

/// Sampled (t, S, I, R) of one approximant for phase-portrait plotting.
inline void run_phase(const RunRequest& req, const SirParamsd& params,
                      const InitialStated& init, std::ostream& out) {
  if (req.method == MethodChoice::both)
    throw UsageError("phase requires --method dtm or --method ladm");
  const Grid grid = detail::effective_grid(req);
  const SeriesSolutiond sol = detail::solve_methods(req, params, init)[0];

  if (req.format == OutputFormat::csv) {
    out << "# phase method=" << method_name(sol.method) << ' '
        << detail::degree_label(req.degree) << '\n';
    out << "t,S,I,R\n";
    for (double t : grid.times)
      out << format_full(t) << ',' << format_full(evaluate(sol.s, t)) << ','
          << format_full(evaluate(sol.i, t)) << ','
          << format_full(evaluate(sol.r, t)) << '\n';
    return;
  }
  out << "{\n  \"method\": \"" << method_name(sol.method) << "\",\n"
      << "  \"degree\": " << req.degree << ",\n  \"samples\": [\n";
  for (std::size_t k = 0; k < grid.times.size(); ++k) {
    const double t = grid.times[k];
    out << "    {\"t\": " << format_full(t) << ", \"s\": "
        << format_full(evaluate(sol.s, t)) << ", \"i\": "
        << format_full(evaluate(sol.i, t)) << ", \"r\": "
        << format_full(evaluate(sol.r, t)) << "}"
        << (k + 1 < grid.times.size() ? ",\n" : "\n");
  }
  out << "  ]\n}\n";
}

/// DTM/LADM/RK4 agreement report. Returns true iff the coefficient and
/// oracle tolerances both hold.
inline bool run_compare(const RunRequest& req, const SirParamsd& params,
                        const InitialStated& init, std::ostream& out) {
  const Grid grid = detail::effective_grid(req);
  const SeriesSolutiond dtm = dtm_solve(params, init, req.degree);
  const SeriesSolutiond ladm = ladm_solve(params, init, req.degree).solution;

  auto max_residual = [&](const SeriesSolutiond& sol) {
    double worst = 0;
    for (double t : grid.times) {
      const ResidualSampled sample = residual_point(sol, params, t);
      worst = std::max({worst, std::abs(sample.e_s), std::abs(sample.e_i),
                        std::abs(sample.e_r)});
    }
    return worst;
  };
  const double resid_dtm = max_residual(dtm);
  const double resid_ladm = max_residual(ladm);

  double dev_abs = 0, dev_rel = 0;
  bool coeff_pass = true;
  for (const auto& [a, b] :
       {std::pair{&dtm.s, &ladm.s}, {&dtm.i, &ladm.i}, {&dtm.r, &ladm.r}}) {
    for (Index k = 0; k <= req.degree; ++k) {
      const double diff = std::abs((*a)[k] - (*b)[k]);
      const double magnitude = std::max(std::abs((*a)[k]), std::abs((*b)[k]));
      dev_abs = std::max(dev_abs, diff);
      if (magnitude > 0) dev_rel = std::max(dev_rel, diff / magnitude);
      // absolute floor 1e-18: coefficients at that scale are noise
      if (diff > std::max(req.tol_coeff * magnitude, 1e-18)) coeff_pass = false;
    }
  }

  const double t_end = grid.times.back();
  const Trajectoryd traj = rk4_integrate(params, init, t_end, 1e-4);
  const double oracle_dtm = max_deviation(dtm, traj);
  const double oracle_ladm = max_deviation(ladm, traj);
  const bool oracle_pass =
      oracle_dtm <= req.tol_oracle && oracle_ladm <= req.tol_oracle;
  const bool pass = coeff_pass && oracle_pass;

  if (req.format == OutputFormat::csv) {
    out << "# compare " << detail::degree_label(req.degree) << '\n';
    out << "metric,method,value,tolerance,pass\n";
    out << "max_residual,dtm," << format_full(resid_dtm) << ",,\n";
    out << "max_residual,ladm," << format_full(resid_ladm) << ",,\n";
    out << "coeff_deviation_abs,both," << format_full(dev_abs) << ",,\n";
    out << "coeff_deviation_rel,both," << format_full(dev_rel) << ','
        << format_full(req.tol_coeff) << ',' << int(coeff_pass) << '\n';
    out << "oracle_deviation,dtm," << format_full(oracle_dtm) << ','
        << format_full(req.tol_oracle) << ','
        << int(oracle_dtm <= req.tol_oracle) << '\n';
    out << "oracle_deviation,ladm," << format_full(oracle_ladm) << ','
        << format_full(req.tol_oracle) << ','
        << int(oracle_ladm <= req.tol_oracle) << '\n';
    out << "overall,both,,," << int(pass) << '\n';
  } else {
    out << "{\n  \"method\": \"both\",\n  \"degree\": " << req.degree
        << ",\n  \"comparison\": {\n"
        << "    \"max_residual\": {\"dtm\": " << format_full(resid_dtm)
        << ", \"ladm\": " << format_full(resid_ladm) << "},\n"
        << "    \"coeff_deviation_abs\": " << format_full(dev_abs) << ",\n"
        << "    \"coeff_deviation_rel\": " << format_full(dev_rel) << ",\n"
        << "    \"oracle_deviation\": {\"dtm\": " << format_full(oracle_dtm)
        << ", \"ladm\": " << format_full(oracle_ladm) << "},\n"
        << "    \"tolerances\": {\"coeff\": " << format_full(req.tol_coeff)
        << ", \"oracle\": " << format_full(req.tol_oracle) << "},\n"
        << "    \"pass\": " << (pass ? "true" : "false") << "\n  }\n}\n";
  }
  return pass;
}

/// Loads parameters, dispatches the command, and returns the process exit
/// status: 0 on success, 2 on a compare tolerance violation. Usage, parse,
/// and numeric errors surface as exceptions for the caller to map.
inline int run_request(const RunRequest& req, std::ostream& out) {
  SirParamsd params;
  InitialStated init;
  if (!req.params_path.empty()) {
    auto parsed =
        parse_params(detail::read_text_file(req.params_path, "params"));
    params = std::move(parsed.first);
    init = parsed.second;
  }
  switch (req.command) {
    case Command::solve:
      run_solve(req, params, init, out);
      return 0;
    case Command::residual:
      run_residual(req, params, init, out);
      return 0;
    case Command::phase:
      run_phase(req, params, init, out);
      return 0;
    case Command::compare:
      return run_compare(req, params, init, out) ? 0 : 2;
  }
  throw UsageError("unknown command");
}

}  // namespace sirseries
