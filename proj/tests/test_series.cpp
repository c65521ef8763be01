#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sirseries/io.hpp"
#include "sirseries/series.hpp"

using sirseries::Index;
using sirseries::PowerSeriesd;

namespace {

// Reference convolution: plain double loop, ascending indices.
PowerSeriesd brute_product(const PowerSeriesd& a, const PowerSeriesd& b,
                           Index max_degree) {
  PowerSeriesd::Coeffs out = PowerSeriesd::Coeffs::Zero(max_degree + 1);
  for (Index s = 0; s <= a.degree(); ++s)
    for (Index k = 0; k <= b.degree(); ++k)
      if (s + k <= max_degree) out[s + k] += a[s] * b[k];
  return PowerSeriesd(out);
}

// Reference evaluation: term-by-term power summation, lowest degree first.
double naive_eval(const PowerSeriesd& a, double t) {
  double sum = 0;
  for (Index k = 0; k <= a.degree(); ++k) sum += a[k] * std::pow(t, double(k));
  return sum;
}

PowerSeriesd random_int_series(std::mt19937& rng, Index max_degree) {
  std::uniform_int_distribution<int> deg(0, int(max_degree));
  std::uniform_int_distribution<int> coeff(-8, 8);
  PowerSeriesd::Coeffs out(deg(rng) + 1);
  for (Index k = 0; k < out.size(); ++k) out[k] = coeff(rng);
  return PowerSeriesd(out);
}

// Coefficients chosen so a[k] / (k+1) is exact, making the
// integrate/differentiate round-trip free of rounding.
PowerSeriesd random_roundtrip_series(std::mt19937& rng, Index max_degree) {
  std::uniform_int_distribution<int> deg(0, int(max_degree));
  std::uniform_int_distribution<int> num(-8, 8);
  PowerSeriesd::Coeffs out(deg(rng) + 1);
  for (Index k = 0; k < out.size(); ++k) out[k] = num(rng) * double(k + 1) / 16.0;
  return PowerSeriesd(out);
}

PowerSeriesd random_series(std::mt19937& rng, Index max_degree) {
  std::uniform_int_distribution<int> deg(0, int(max_degree));
  std::uniform_real_distribution<double> coeff(-10.0, 10.0);
  PowerSeriesd::Coeffs out(deg(rng) + 1);
  for (Index k = 0; k < out.size(); ++k) out[k] = coeff(rng);
  return PowerSeriesd(out);
}

}  // namespace

TEST_CASE("construction normalizes and validates") {
  CHECK(PowerSeriesd() == PowerSeriesd{0.0});
  CHECK(PowerSeriesd(PowerSeriesd::Coeffs()) == PowerSeriesd{0.0});
  CHECK(PowerSeriesd::constant(3.5) == PowerSeriesd{3.5});
  CHECK(PowerSeriesd::zero(2) == PowerSeriesd{0.0, 0.0, 0.0});
  CHECK(PowerSeriesd{1.0, 2.0}.coeff(7) == 0.0);
  CHECK_THROWS_AS(PowerSeriesd({1.0, std::nan("")}), sirseries::OverflowError);
  CHECK_THROWS_AS(PowerSeriesd({1.0, HUGE_VAL}), sirseries::OverflowError);
}

TEST_CASE("add pads with zeros") {
  CHECK(add(PowerSeriesd{1, 2}, PowerSeriesd{3}) == PowerSeriesd{4, 2});
  CHECK(add(PowerSeriesd{20}, PowerSeriesd{0, -2.3}) == PowerSeriesd{20, -2.3});

  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const PowerSeriesd a = random_int_series(rng, 12);
    const PowerSeriesd b = random_int_series(rng, 12);
    const PowerSeriesd c = random_int_series(rng, 12);
    CHECK(add(a, PowerSeriesd{0.0}) == truncate(a, a.degree()));
    CHECK(add(a, b) == add(b, a));
    CHECK(add(add(a, b), c) == add(a, add(b, c)));
  }
}

TEST_CASE("add overflow raises") {
  const PowerSeriesd big{1.7e308};
  CHECK_THROWS_AS(add(big, big), sirseries::OverflowError);
}

TEST_CASE("scale") {
  CHECK(scale(PowerSeriesd{1, 1}, 0.0) == PowerSeriesd{0, 0});
  CHECK(scale(PowerSeriesd{1, 2, 3}, 2.0) == PowerSeriesd{2, 4, 6});
  // -lambda * S0 * I0 contribution to the first Taylor coefficient
  CHECK(scale(PowerSeriesd{300}, -0.001) == PowerSeriesd{-0.3});
  CHECK_THROWS_AS(scale(PowerSeriesd{1.7e308}, 10.0), sirseries::OverflowError);
}

TEST_CASE("cauchy_product") {
  CHECK(cauchy_product(PowerSeriesd{1, 1}, PowerSeriesd{1, 1}, 2) ==
        PowerSeriesd{1, 2, 1});
  CHECK(cauchy_product(PowerSeriesd{20, -2.3}, PowerSeriesd{15, -2.2}, 1) ==
        PowerSeriesd{300, -78.5});
  CHECK_THROWS_AS(cauchy_product(PowerSeriesd{1}, PowerSeriesd{1}, -1),
                  sirseries::UsageError);

  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const PowerSeriesd a = random_int_series(rng, 14);
    const PowerSeriesd b = random_int_series(rng, 14);
    const Index max_degree = (a.degree() + b.degree()) / 2 + 1;
    CHECK(cauchy_product(a, b, max_degree) == brute_product(a, b, max_degree));
    CHECK(cauchy_product(a, PowerSeriesd{1}, max_degree) ==
          truncate(a, max_degree));
  }
}

TEST_CASE("integrate") {
  CHECK(integrate(PowerSeriesd{1}) == PowerSeriesd{0, 1});
  CHECK(integrate(PowerSeriesd{0, 2}) == PowerSeriesd{0, 0, 1});
  CHECK(integrate(PowerSeriesd{-2.3}) == PowerSeriesd{0, -2.3});
}

TEST_CASE("differentiate") {
  CHECK(differentiate(PowerSeriesd{5}) == PowerSeriesd{0.0});
  CHECK(differentiate(PowerSeriesd{0, 0, 1}) == PowerSeriesd{0, 2});
}

TEST_CASE("differentiate inverts integrate") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const PowerSeriesd a = random_roundtrip_series(rng, 20);
    CHECK(differentiate(integrate(a)) == a);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const PowerSeriesd a = random_series(rng, 20);
    const PowerSeriesd back = differentiate(integrate(a));
    REQUIRE(back.size() == a.size());
    for (Index k = 0; k <= a.degree(); ++k)
      CHECK(back[k] == doctest::Approx(a[k]).epsilon(1e-15));
  }
}

TEST_CASE("evaluate") {
  const PowerSeriesd s5{20, -2.3, 0.15425, -0.00790458, 0.000309711};
  CHECK(evaluate(s5, 0.0) == 20.0);
  CHECK(evaluate(PowerSeriesd{10, 0.5}, 1.0) == 10.5);
  // frozen from the term-by-term summation oracle
  CHECK(evaluate(s5, 0.2) == doctest::Approx(19.5461072588976).epsilon(1e-13));
  CHECK(evaluate(s5, 0.2) ==
        doctest::Approx(naive_eval(s5, 0.2)).epsilon(1e-14));
  CHECK_THROWS_AS(evaluate(s5, std::nan("")), sirseries::UsageError);
  CHECK_THROWS_AS(evaluate(PowerSeriesd{1.0, 1.7e308}, 10.0),
                  sirseries::OverflowError);
}

TEST_CASE("evaluate agrees with power summation") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> tdist(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const PowerSeriesd a = random_series(rng, 30);
    const double t = tdist(rng);
    const double horner = evaluate(a, t);
    const double naive = naive_eval(a, t);
    CHECK(std::abs(horner - naive) <=
          1e-13 * std::max({std::abs(horner), std::abs(naive), 1.0}));
  }
}

TEST_CASE("truncate") {
  CHECK(truncate(PowerSeriesd{1, 2, 3}, 1) == PowerSeriesd{1, 2});
  CHECK(truncate(PowerSeriesd{1}, 3) == PowerSeriesd{1, 0, 0, 0});
  const PowerSeriesd a{4, 5, 6};
  CHECK(truncate(a, a.degree()) == a);
  CHECK_THROWS_AS(truncate(a, -1), sirseries::UsageError);
}

TEST_CASE("json round-trip is bit-exact") {
  CHECK(sirseries::to_json(PowerSeriesd{20, -2.3}) == "[20, -2.2999999999999998]");
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> scale_dist(-300.0, 300.0);
  for (int trial = 0; trial < 100; ++trial) {
    PowerSeriesd a = random_series(rng, 24);
    a = scale(a, scale_dist(rng) * 1e-7);
    const PowerSeriesd back = sirseries::power_series_from_json(sirseries::to_json(a));
    CHECK(back == a);
  }
}

TEST_CASE("json parse errors") {
  CHECK_THROWS_AS(sirseries::power_series_from_json("{}"), sirseries::ParseError);
  CHECK_THROWS_AS(sirseries::power_series_from_json("[]"), sirseries::ParseError);
  CHECK_THROWS_AS(sirseries::power_series_from_json("[1, \"x\"]"),
                  sirseries::ParseError);
  CHECK_THROWS_AS(sirseries::power_series_from_json("not json"),
                  sirseries::ParseError);
}
