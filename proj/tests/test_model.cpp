#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "sirseries/dtm.hpp"
#include "sirseries/ladm.hpp"
#include "sirseries/model.hpp"
#include "test_util.hpp"

using sirseries::InitialStated;
using sirseries::Index;
using sirseries::PowerSeriesd;
using sirseries::SeriesSolutiond;
using sirseries::SirParamsd;

namespace {

// Residual expansion of E_S by plain loops, independent of the series kernel.
PowerSeriesd brute_residual_s(const SeriesSolutiond& sol, const SirParamsd& p) {
  const Index n = sol.s.degree();
  PowerSeriesd::Coeffs prod = PowerSeriesd::Coeffs::Zero(2 * n + 1);
  for (Index a = 0; a <= n; ++a)
    for (Index b = 0; b <= n; ++b) prod[a + b] += sol.s[a] * sol.i[b];
  PowerSeriesd::Coeffs out = PowerSeriesd::Coeffs::Zero(2 * n + 1);
  for (Index k = 0; k <= 2 * n; ++k) {
    const double ds = k < n ? (k + 1) * sol.s[k + 1] : 0.0;
    out[k] = ds - p.f1.coeff(k) + p.lambda * prod[k] +
             p.d * (k <= n ? sol.s[k] : 0.0);
  }
  return PowerSeriesd(out);
}

}  // namespace

TEST_CASE("rhs reproduces the initial derivatives") {
  const SirParamsd params;
  const auto f = rhs(params, 0.0, 20.0, 15.0, 10.0);
  CHECK(rel_close(f[0], -2.3, 1e-14));
  CHECK(rel_close(f[1], -2.2, 1e-14));
  CHECK(rel_close(f[2], 0.5, 1e-14));
}

TEST_CASE("rhs of the null system vanishes") {
  SirParamsd params;
  params.lambda = params.epsilon = params.d = 0.0;
  const auto f = rhs(params, 0.3, 20.0, 15.0, 10.0);
  CHECK(f[0] == 0.0);
  CHECK(f[1] == 0.0);
  CHECK(f[2] == 0.0);
}

TEST_CASE("rhs linear part with lambda = 0") {
  SirParamsd params;
  params.lambda = 0.0;
  const auto f = rhs(params, 0.0, 20.0, 15.0, 10.0);
  CHECK(rel_close(f[0], -2.0, 1e-14));
  CHECK(rel_close(f[1], -2.5, 1e-14));
  CHECK(rel_close(f[2], 0.5, 1e-14));

  // with no forcing the lambda = 0 system is homogeneous of degree one
  for (double a : {0.5, 2.0, -3.0}) {
    const auto fa = rhs(params, 0.0, a * 20.0, a * 15.0, a * 10.0);
    for (int k = 0; k < 3; ++k) CHECK(rel_close(fa[k], a * f[k], 1e-13));
  }
}

TEST_CASE("residual_point vanishes at t = 0") {
  const SirParamsd params;
  const InitialStated init;
  for (Index degree : {1, 4, 10}) {
    for (const auto& sol : {dtm_solve(params, init, degree),
                            ladm_solve(params, init, degree).solution}) {
      const auto sample = residual_point(sol, params, 0.0);
      CHECK(std::abs(sample.e_s) <= 1e-12);
      CHECK(std::abs(sample.e_i) <= 1e-12);
      CHECK(std::abs(sample.e_r) <= 1e-12);
    }
  }
}

TEST_CASE("residual_point magnitudes at t = 1") {
  const SirParamsd params;
  const InitialStated init;

  // degree-10 partial sum: the defect sits at rounding level
  const auto deep = ladm_solve(params, init, 10).solution;
  CHECK(std::abs(residual_point(deep, params, 1.0).e_s) < 1e-12);

  // degree-4 polynomial: the defect is dominated by the dropped t^5 term
  const auto shallow = dtm_solve(params, init, 4);
  CHECK(rel_close(std::abs(residual_point(shallow, params, 1.0).e_s),
                  3.94305e-5, 1e-4));
}

TEST_CASE("residual_series leading coefficients vanish") {
  const SirParamsd params;
  const InitialStated init;

  const auto first = residual_series(dtm_solve(params, init, 1), params);
  CHECK(first[0].size() == 3);
  CHECK(first[0][0] == 0.0);  // first-order match is exact

  for (Index degree : {1, 4, 8}) {
    for (const auto& sol : {dtm_solve(params, init, degree),
                            ladm_solve(params, init, degree).solution}) {
      const auto res = residual_series(sol, params);
      for (const auto& e : res)
        for (Index k = 0; k < degree; ++k) CHECK(std::abs(e[k]) <= 1e-12);
    }
  }
}

TEST_CASE("residual_series matches the brute expansion") {
  const SirParamsd params;
  const InitialStated init;
  const auto sol = dtm_solve(params, init, 4);
  const auto res = residual_series(sol, params);
  const PowerSeriesd oracle = brute_residual_s(sol, params);
  REQUIRE(res[0].size() == oracle.size());
  // floor 1e-15: the vanishing leading coefficients are association noise
  for (Index k = 0; k <= oracle.degree(); ++k)
    CHECK(rel_close(res[0][k], oracle[k], 1e-12, 1e-15));

  // first nonzero coefficient of E_S appears at degree 4; frozen from the
  // brute expansion (equals minus five times the dropped t^5 coefficient)
  CHECK(rel_close(res[0][4], 3.874318489583335e-5, 1e-12));
  for (Index k = 0; k < 4; ++k) CHECK(std::abs(res[0][k]) <= 1e-12);
}

TEST_CASE("residual_series of the null system is zero") {
  SirParamsd params;
  params.lambda = params.epsilon = params.d = 0.0;
  const InitialStated init;
  const auto sol = dtm_solve(params, init, 3);
  for (const auto& e : residual_series(sol, params))
    for (Index k = 0; k <= e.degree(); ++k) CHECK(e[k] == 0.0);
}

TEST_CASE("residual_point agrees with the evaluated residual series") {
  const SirParamsd params;
  const InitialStated init;
  for (Index degree : {2, 5, 9}) {
    const auto sol = dtm_solve(params, init, degree);
    const auto res = residual_series(sol, params);
    for (double t : {0.1, 0.35, 0.8, 1.0}) {
      const auto sample = residual_point(sol, params, t);
      const double e_series[3] = {evaluate(res[0], t), evaluate(res[1], t),
                                  evaluate(res[2], t)};
      const double e_point[3] = {sample.e_s, sample.e_i, sample.e_r};
      for (int c = 0; c < 3; ++c)
        CHECK(rel_close(e_point[c], e_series[c], 1e-10, 1e-14));
    }
  }
}

TEST_CASE("residual with series forcing evaluates the forcing") {
  SirParamsd params;
  params.f1 = PowerSeriesd{0.0, 2.0};
  const InitialStated init;
  const auto sol = dtm_solve(params, init, 6);
  const auto res = residual_series(sol, params);
  for (const auto& e : res)
    for (Index k = 0; k < 6; ++k) CHECK(std::abs(e[k]) <= 1e-12);
  const auto sample = residual_point(sol, params, 0.5);
  CHECK(std::abs(sample.e_s) < 1e-6);
}

TEST_CASE("parse_params defaults") {
  const auto [params, init] = sirseries::parse_params("");
  CHECK(params.lambda == 0.001);
  CHECK(params.epsilon == 0.1);
  CHECK(params.d == 0.1);
  CHECK(params.f1 == PowerSeriesd{0.0});
  CHECK(init.s0 == 20.0);
  CHECK(init.i0 == 15.0);
  CHECK(init.r0 == 10.0);
}

TEST_CASE("parse_params overrides and forcing lists") {
  const auto [params, init] = sirseries::parse_params(
      "# infection study\n"
      "lambda = 0.002\n"
      "f2 = [0, 2]   # linear ramp\n"
      "f3 = 1.5\n"
      "\n"
      "I0 = 7\n");
  CHECK(params.lambda == 0.002);
  CHECK(params.epsilon == 0.1);
  CHECK(params.f1 == PowerSeriesd{0.0});
  CHECK(params.f2 == PowerSeriesd{0.0, 2.0});
  CHECK(params.f3 == PowerSeriesd{1.5});
  CHECK(init.i0 == 7.0);
  CHECK(init.s0 == 20.0);
}

TEST_CASE("parse_params diagnostics") {
  CHECK_THROWS_AS(sirseries::parse_params("epsilon = -1"),
                  sirseries::ValidationError);
  CHECK_THROWS_AS(sirseries::parse_params("lambda 0.001"), sirseries::ParseError);
  CHECK_THROWS_AS(sirseries::parse_params("mu = 0.1"), sirseries::ParseError);
  CHECK_THROWS_AS(sirseries::parse_params("lambda = abc"), sirseries::ParseError);
  CHECK_THROWS_AS(sirseries::parse_params("f1 = [1, 2"), sirseries::ParseError);
  CHECK_THROWS_AS(sirseries::parse_params("f1 = [ ]"), sirseries::ParseError);
  CHECK_THROWS_AS(sirseries::parse_params("S0 = 1e999"),
                  sirseries::ValidationError);
  try {
    sirseries::parse_params("lambda = 0.001\n\nS0 = x\n");
    FAIL("expected ParseError");
  } catch (const sirseries::ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("solution metadata invariants") {
  const SirParamsd params;
  const InitialStated init;
  const auto sol = dtm_solve(params, init, 6);
  CHECK(sol.degree == 6);
  CHECK(sol.s.degree() == 6);
  CHECK(sol.i.degree() == 6);
  CHECK(sol.r.degree() == 6);
  CHECK(sol.s[0] == init.s0);
  CHECK(sol.i[0] == init.i0);
  CHECK(sol.r[0] == init.r0);
  CHECK(sol.method == sirseries::Method::dtm);
}
