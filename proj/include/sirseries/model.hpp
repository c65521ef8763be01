#pragma once

#include <array>
#include <cctype>
#include <cstdlib>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sirseries/series.hpp"

namespace sirseries {

template <class Scalar>
using StateVec = Eigen::Array<Scalar, 3, 1>;

/// Parameters of the modified SIR virus-propagation system
///
///   dS/dt = f1(t) - lambda S I - d S
///   dI/dt = f2(t) + lambda S I - epsilon I - d R
///   dR/dt = f3(t) + epsilon I - d R
///
/// Note the removal term in the I equation couples R(t), not I(t); that is
/// the defining modification of this model and is preserved throughout.
template <class Scalar>
struct SirParams {
  Scalar lambda = Scalar(0.001);   // infection rate (per computer per time)
  Scalar epsilon = Scalar(0.1);    // recovery rate (per time)
  Scalar d = Scalar(0.1);          // network removal rate (per time)
  PowerSeries<Scalar> f1, f2, f3;  // external-connection forcings, series in t
};

template <class Scalar>
struct InitialState {
  Scalar s0 = Scalar(20);
  Scalar i0 = Scalar(15);
  Scalar r0 = Scalar(10);
};

enum class Method { dtm, ladm };

inline const char* method_name(Method m) {
  return m == Method::dtm ? "dtm" : "ladm";
}

/// A truncated series approximant (S, I, R) produced by one of the solvers.
/// The three series share the same degree, the highest retained power of t.
template <class Scalar>
struct SeriesSolution {
  PowerSeries<Scalar> s, i, r;
  Method method = Method::dtm;
  Index degree = 0;
};

/// Defect of an approximant substituted back into the system at one time.
template <class Scalar>
struct ResidualSample {
  Scalar t, e_s, e_i, e_r;
};

using SirParamsd = SirParams<double>;
using InitialStated = InitialState<double>;
using SeriesSolutiond = SeriesSolution<double>;
using ResidualSampled = ResidualSample<double>;

template <class Scalar>
void validate(const SirParams<Scalar>& params) {
  auto check_rate = [](Scalar value, const char* name) {
    if (!(std::isfinite(value) && value >= Scalar(0)))
      throw ValidationError(std::string(name) + " must be finite and >= 0");
  };
  check_rate(params.lambda, "lambda");
  check_rate(params.epsilon, "epsilon");
  check_rate(params.d, "d");
}

template <class Scalar>
void validate(const InitialState<Scalar>& init) {
  if (!(std::isfinite(init.s0) && std::isfinite(init.i0) && std::isfinite(init.r0)))
    throw ValidationError("initial state must be finite");
}

/// Right-hand side of the system at one point.
template <class Scalar>
StateVec<Scalar> rhs(const SirParams<Scalar>& params, Scalar t, Scalar s,
                     Scalar i, Scalar r) {
  const Scalar coupling = params.lambda * (s * i);
  StateVec<Scalar> out;
  out[0] = (evaluate(params.f1, t) - coupling) - params.d * s;
  out[1] = ((evaluate(params.f2, t) + coupling) - params.epsilon * i) - params.d * r;
  out[2] = (evaluate(params.f3, t) + params.epsilon * i) - params.d * r;
  return out;
}

/// Residuals at one time, with the product S(t) I(t) taken pointwise in full.
template <class Scalar>
ResidualSample<Scalar> residual_point(const SeriesSolution<Scalar>& sol,
                                      const SirParams<Scalar>& params,
                                      Scalar t) {
  const Scalar st = evaluate(sol.s, t);
  const Scalar it = evaluate(sol.i, t);
  const Scalar rt = evaluate(sol.r, t);
  const StateVec<Scalar> f = rhs(params, t, st, it, rt);
  return {t, evaluate(differentiate(sol.s), t) - f[0],
          evaluate(differentiate(sol.i), t) - f[1],
          evaluate(differentiate(sol.r), t) - f[2]};
}

/// Full residual expansions (E_S, E_I, E_R); the quadratic term is expanded
/// to degree 2n. For a degree-n solution the coefficients 0..n-1 of each
/// residual vanish up to rounding.
template <class Scalar>
std::array<PowerSeries<Scalar>, 3> residual_series(
    const SeriesSolution<Scalar>& sol, const SirParams<Scalar>& params) {
  const PowerSeries<Scalar> prod =
      cauchy_product(sol.s, sol.i, 2 * sol.s.degree());
  // numerators grouped exactly as in the solver recurrences
  const PowerSeries<Scalar> rhs_s =
      sub(sub(params.f1, scale(prod, params.lambda)), scale(sol.s, params.d));
  const PowerSeries<Scalar> rhs_i =
      sub(sub(add(params.f2, scale(prod, params.lambda)),
              scale(sol.i, params.epsilon)),
          scale(sol.r, params.d));
  const PowerSeries<Scalar> rhs_r =
      sub(add(params.f3, scale(sol.i, params.epsilon)), scale(sol.r, params.d));
  return {sub(differentiate(sol.s), rhs_s), sub(differentiate(sol.i), rhs_i),
          sub(differentiate(sol.r), rhs_r)};
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

inline double parse_scalar(std::string_view token, int line) {
  const std::string text(trim(token));
  if (text.empty())
    throw ParseError("line " + std::to_string(line) + ": empty value");
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size())
    throw ParseError("line " + std::to_string(line) + ": cannot parse number '" +
                     text + "'");
  if (!std::isfinite(value))
    throw ValidationError("line " + std::to_string(line) + ": value '" + text +
                          "' is not finite");
  return value;
}

inline PowerSeriesd parse_forcing(std::string_view token, int line) {
  token = trim(token);
  if (token.empty() || token.front() != '[')
    return PowerSeriesd::constant(parse_scalar(token, line));
  if (token.back() != ']')
    throw ParseError("line " + std::to_string(line) + ": unterminated list");
  token.remove_prefix(1);
  token.remove_suffix(1);
  std::vector<double> coeffs;
  size_t pos = 0;
  while (pos <= token.size()) {
    const size_t comma = std::min(token.find(',', pos), token.size());
    coeffs.push_back(parse_scalar(token.substr(pos, comma - pos), line));
    pos = comma + 1;
  }
  PowerSeriesd::Coeffs out(Index(coeffs.size()));
  for (Index k = 0; k < out.size(); ++k) out[k] = coeffs[size_t(k)];
  return PowerSeriesd(std::move(out));
}

}  // namespace detail

/// Parses a line-oriented `key = value` parameter document. Recognized keys:
/// lambda, epsilon, d, f1, f2, f3, S0, I0, R0. Forcings accept a scalar or a
/// bracketed coefficient list `[c0, c1, ...]`; `#` starts a comment.
/// Unspecified fields keep their defaults.
inline std::pair<SirParamsd, InitialStated> parse_params(std::string_view text) {
  SirParamsd params;
  InitialStated init;
  int line = 0;
  while (!text.empty()) {
    ++line;
    const size_t nl = std::min(text.find('\n'), text.size());
    std::string_view row = text.substr(0, nl);
    text.remove_prefix(std::min(nl + 1, text.size()));

    row = row.substr(0, std::min(row.find('#'), row.size()));
    row = detail::trim(row);
    if (row.empty()) continue;

    const size_t eq = row.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("line " + std::to_string(line) + ": expected 'key = value'");
    const std::string key{detail::trim(row.substr(0, eq))};
    const std::string_view value = row.substr(eq + 1);

    if (key == "lambda")
      params.lambda = detail::parse_scalar(value, line);
    else if (key == "epsilon")
      params.epsilon = detail::parse_scalar(value, line);
    else if (key == "d")
      params.d = detail::parse_scalar(value, line);
    else if (key == "f1")
      params.f1 = detail::parse_forcing(value, line);
    else if (key == "f2")
      params.f2 = detail::parse_forcing(value, line);
    else if (key == "f3")
      params.f3 = detail::parse_forcing(value, line);
    else if (key == "S0")
      init.s0 = detail::parse_scalar(value, line);
    else if (key == "I0")
      init.i0 = detail::parse_scalar(value, line);
    else if (key == "R0")
      init.r0 = detail::parse_scalar(value, line);
    else
      throw ParseError("line " + std::to_string(line) + ": unknown key '" + key + "'");
  }
  validate(params);
  validate(init);
  return {std::move(params), init};
}

}  // namespace sirseries
