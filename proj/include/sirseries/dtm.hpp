#pragma once

#include <cmath>
#include <numbers>
#include <variant>

#include "sirseries/model.hpp"
#include "sirseries/series.hpp"

namespace sirseries {

/// Default ceiling on truncation degrees accepted by the solvers. Taylor
/// coefficients of this system are far below binary64 resolution well before
/// degree 128.
inline constexpr Index kDegreeCap = 128;

/// Elementary functions with closed-form transform coefficients.
struct Monomial {
  Index power = 0;  // t^power
};

template <class Scalar>
struct Exponential {
  Scalar rate;  // exp(rate * t)
};

template <class Scalar>
struct Sine {
  Scalar omega, alpha;  // sin(omega * t + alpha)
};

template <class Scalar>
struct Cosine {
  Scalar omega, alpha;  // cos(omega * t + alpha)
};

template <class Scalar>
using ElementaryDescriptor =
    std::variant<Monomial, Exponential<Scalar>, Sine<Scalar>, Cosine<Scalar>>;

/// Transform-table coefficients of an elementary function, truncated at
/// max_degree:
///
///   t^m                -> F(k) = 1 at k = m, else 0
///   exp(a t)           -> F(k) = a^k / k!
///   sin(w t + alpha)   -> F(k) = (w^k / k!) sin(pi k / 2 + alpha)
///   cos(w t + alpha)   -> F(k) = (w^k / k!) cos(pi k / 2 + alpha)
template <class Scalar>
PowerSeries<Scalar> dtm_transform(const ElementaryDescriptor<Scalar>& desc,
                                  Index max_degree) {
  detail::require_count(max_degree, "dtm_transform");
  using Coeffs = typename PowerSeries<Scalar>::Coeffs;
  Coeffs out = Coeffs::Zero(max_degree + 1);

  const auto check_finite = [](Scalar v, const char* what) {
    if (!std::isfinite(v))
      throw ValidationError(std::string("dtm_transform: ") + what +
                            " must be finite");
  };

  if (const auto* mono = std::get_if<Monomial>(&desc)) {
    if (mono->power < 0)
      throw ValidationError("dtm_transform: monomial power must be >= 0");
    if (mono->power <= max_degree) out[mono->power] = Scalar(1);
  } else if (const auto* expo = std::get_if<Exponential<Scalar>>(&desc)) {
    check_finite(expo->rate, "rate");
    Scalar term(1);  // rate^k / k!, built incrementally
    out[0] = term;
    for (Index k = 1; k <= max_degree; ++k) out[k] = term *= expo->rate / Scalar(k);
  } else if (const auto* sine = std::get_if<Sine<Scalar>>(&desc)) {
    check_finite(sine->omega, "omega");
    check_finite(sine->alpha, "alpha");
    Scalar amplitude(1);  // omega^k / k!
    for (Index k = 0; k <= max_degree; ++k) {
      if (k > 0) amplitude *= sine->omega / Scalar(k);
      out[k] = amplitude *
               std::sin(std::numbers::pi_v<Scalar> * Scalar(k) / Scalar(2) +
                        sine->alpha);
    }
  } else {
    const auto& cosine = std::get<Cosine<Scalar>>(desc);
    check_finite(cosine.omega, "omega");
    check_finite(cosine.alpha, "alpha");
    Scalar amplitude(1);
    for (Index k = 0; k <= max_degree; ++k) {
      if (k > 0) amplitude *= cosine.omega / Scalar(k);
      out[k] = amplitude *
               std::cos(std::numbers::pi_v<Scalar> * Scalar(k) / Scalar(2) +
                        cosine.alpha);
    }
  }
  return PowerSeries<Scalar>(std::move(out));
}

namespace detail {

inline void require_degree(Index degree, Index cap, const char* op) {
  if (degree < 0) throw UsageError(std::string(op) + ": degree must be >= 0");
  if (degree > cap)
    throw CapacityError(std::string(op) + ": degree " + std::to_string(degree) +
                        " exceeds cap " + std::to_string(cap));
}

}  // namespace detail

/// Builds the Taylor coefficients of (S, I, R) by the transform recurrence
///
///   S[k+1] = ( F1(k) - lambda conv(k) - d S[k] ) / (k+1)
///   I[k+1] = ( F2(k) + lambda conv(k) - epsilon I[k] - d R[k] ) / (k+1)
///   R[k+1] = ( F3(k) + epsilon I[k] - d R[k] ) / (k+1)
///
/// with conv(k) = sum_{i=0}^{k} S[i] I[k-i] and Fj(k) the forcing
/// coefficients. The coupling term carries "+" in the I recurrence, matching
/// the sign of lambda S I in the governing equation.
template <class Scalar>
SeriesSolution<Scalar> dtm_solve(const SirParams<Scalar>& params,
                                 const InitialState<Scalar>& init, Index degree,
                                 Index degree_cap = kDegreeCap) {
  validate(params);
  validate(init);
  detail::require_degree(degree, degree_cap, "dtm_solve");

  using Coeffs = typename PowerSeries<Scalar>::Coeffs;
  Coeffs s = Coeffs::Zero(degree + 1);
  Coeffs i = Coeffs::Zero(degree + 1);
  Coeffs r = Coeffs::Zero(degree + 1);
  s[0] = init.s0;
  i[0] = init.i0;
  r[0] = init.r0;

  for (Index k = 0; k < degree; ++k) {
    const Scalar conv = detail::convolution_coeff<Scalar>(s, i, k);
    const Scalar next = Scalar(k + 1);
    s[k + 1] =
        ((params.f1.coeff(k) - params.lambda * conv) - params.d * s[k]) / next;
    i[k + 1] = (((params.f2.coeff(k) + params.lambda * conv) -
                 params.epsilon * i[k]) -
                params.d * r[k]) /
               next;
    r[k + 1] =
        ((params.f3.coeff(k) + params.epsilon * i[k]) - params.d * r[k]) / next;
  }

  return {PowerSeries<Scalar>(std::move(s)), PowerSeries<Scalar>(std::move(i)),
          PowerSeries<Scalar>(std::move(r)), Method::dtm, degree};
}

}  // namespace sirseries
