#pragma once

#include <array>
#include <string>
#include <vector>

#include "sirseries/dtm.hpp"
#include "sirseries/model.hpp"
#include "sirseries/series.hpp"

namespace sirseries {

/// Decomposition term families: entry j holds S_j(t), I_j(t), R_j(t).
template <class Scalar>
struct DecompositionTerms {
  std::vector<PowerSeries<Scalar>> s_terms, i_terms, r_terms;
};

/// Adomian polynomial sequence for the bilinear coupling A = S * I.
template <class Scalar>
struct AdomianSequence {
  std::vector<PowerSeries<Scalar>> a_terms;
};

using DecompositionTermsd = DecompositionTerms<double>;
using AdomianSequenced = AdomianSequence<double>;

/// A_j = sum_{i=0}^{j} S_i I_{j-i}, truncated at max_degree.
template <class Scalar>
PowerSeries<Scalar> adomian_term(const std::vector<PowerSeries<Scalar>>& s_terms,
                                 const std::vector<PowerSeries<Scalar>>& i_terms,
                                 Index j, Index max_degree) {
  detail::require_count(max_degree, "adomian_term");
  if (j < 0 || std::size_t(j) >= s_terms.size() ||
      std::size_t(j) >= i_terms.size())
    throw UsageError("adomian_term: index " + std::to_string(j) +
                     " out of range");
  PowerSeries<Scalar> out = PowerSeries<Scalar>::zero(max_degree);
  for (Index i = 0; i <= j; ++i)
    out = add(out, cauchy_product(s_terms[std::size_t(i)],
                                  i_terms[std::size_t(j - i)], max_degree));
  return out;
}

/// Leading terms: the initial state plus the integrated forcing, so a
/// constant forcing f gives exactly state(0) + f t.
template <class Scalar>
std::array<PowerSeries<Scalar>, 3> ladm_initial(const SirParams<Scalar>& params,
                                                const InitialState<Scalar>& init,
                                                Index max_degree) {
  detail::require_count(max_degree, "ladm_initial");
  return {truncate(add(PowerSeries<Scalar>::constant(init.s0), integrate(params.f1)),
                   max_degree),
          truncate(add(PowerSeries<Scalar>::constant(init.i0), integrate(params.f2)),
                   max_degree),
          truncate(add(PowerSeries<Scalar>::constant(init.r0), integrate(params.f3)),
                   max_degree)};
}

/// One decomposition step: with j the next term index,
///
///   S_j = integral( -lambda A_{j-1} - d S_{j-1} )
///   I_j = integral( +lambda A_{j-1} - epsilon I_{j-1} - d R_{j-1} )
///   R_j = integral( +epsilon I_{j-1} - d R_{j-1} )
///
/// each truncated at max_degree. The caller assembles and appends.
template <class Scalar>
std::array<PowerSeries<Scalar>, 3> ladm_step(const SirParams<Scalar>& params,
                                             const DecompositionTerms<Scalar>& terms,
                                             const AdomianSequence<Scalar>& adomian,
                                             Index max_degree) {
  detail::require_count(max_degree, "ladm_step");
  const std::size_t j = terms.s_terms.size();
  if (j == 0 || terms.i_terms.size() != j || terms.r_terms.size() != j)
    throw UsageError("ladm_step: term sequences empty or uneven");
  if (adomian.a_terms.size() < j)
    throw UsageError("ladm_step: Adomian term " + std::to_string(j - 1) +
                     " not available");
  const PowerSeries<Scalar>& a = adomian.a_terms[j - 1];
  const PowerSeries<Scalar>& s_prev = terms.s_terms[j - 1];
  const PowerSeries<Scalar>& i_prev = terms.i_terms[j - 1];
  const PowerSeries<Scalar>& r_prev = terms.r_terms[j - 1];
  return {
      truncate(integrate(add(scale(a, -params.lambda), scale(s_prev, -params.d))),
               max_degree),
      truncate(integrate(add(add(scale(a, params.lambda),
                                 scale(i_prev, -params.epsilon)),
                             scale(r_prev, -params.d))),
               max_degree),
      truncate(integrate(add(scale(i_prev, params.epsilon),
                             scale(r_prev, -params.d))),
               max_degree)};
}

template <class Scalar>
struct LadmResult {
  SeriesSolution<Scalar> solution;  // partial sums over terms 0..n
  DecompositionTerms<Scalar> terms;
};

using LadmResultd = LadmResult<double>;

/// Runs the decomposition through term n and assembles the degree-n partial
/// sums. Term truncation uses max_degree = n; with non-constant forcing the
/// terms would otherwise grow in degree without bound.
template <class Scalar>
LadmResult<Scalar> ladm_solve(const SirParams<Scalar>& params,
                              const InitialState<Scalar>& init, Index n,
                              Index degree_cap = kDegreeCap) {
  validate(params);
  validate(init);
  detail::require_degree(n, degree_cap, "ladm_solve");

  DecompositionTerms<Scalar> terms;
  AdomianSequence<Scalar> adomian;
  auto leading = ladm_initial(params, init, n);
  terms.s_terms.push_back(std::move(leading[0]));
  terms.i_terms.push_back(std::move(leading[1]));
  terms.r_terms.push_back(std::move(leading[2]));

  for (Index j = 1; j <= n; ++j) {
    adomian.a_terms.push_back(adomian_term(terms.s_terms, terms.i_terms, j - 1, n));
    auto next = ladm_step(params, terms, adomian, n);
    terms.s_terms.push_back(std::move(next[0]));
    terms.i_terms.push_back(std::move(next[1]));
    terms.r_terms.push_back(std::move(next[2]));
  }

  PowerSeries<Scalar> s = PowerSeries<Scalar>::zero(n);
  PowerSeries<Scalar> i = PowerSeries<Scalar>::zero(n);
  PowerSeries<Scalar> r = PowerSeries<Scalar>::zero(n);
  for (std::size_t j = 0; j < terms.s_terms.size(); ++j) {
    s = add(s, terms.s_terms[j]);
    i = add(i, terms.i_terms[j]);
    r = add(r, terms.r_terms[j]);
  }

  return {{std::move(s), std::move(i), std::move(r), Method::ladm, n},
          std::move(terms)};
}

}  // namespace sirseries
