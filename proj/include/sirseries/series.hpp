#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdio>
#include <initializer_list>
#include <string>
#include <utility>

#include "sirseries/errors.hpp"

namespace sirseries {

using Index = Eigen::Index;

/// Dense truncated power series in t about t = 0.
///
/// coeffs()[k] is the coefficient of t^k; the degree is size() - 1. The
/// representation always holds at least one coefficient (the zero series is
/// [0]) and every coefficient is finite; constructors enforce both.
template <class Scalar>
class PowerSeries {
 public:
  using Coeffs = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  PowerSeries() : coeffs_(Coeffs::Zero(1)) {}

  explicit PowerSeries(Coeffs coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() == 0) coeffs_ = Coeffs::Zero(1);
    require_finite();
  }

  PowerSeries(std::initializer_list<Scalar> coeffs)
      : coeffs_(Coeffs::Zero(std::max<Index>(1, Index(coeffs.size())))) {
    Index k = 0;
    for (Scalar c : coeffs) coeffs_[k++] = c;
    require_finite();
  }

  static PowerSeries constant(Scalar value) { return PowerSeries({value}); }

  /// Zero series padded out to the given degree.
  static PowerSeries zero(Index degree = 0) {
    return PowerSeries(Coeffs::Zero(degree + 1));
  }

  Index size() const { return coeffs_.size(); }
  Index degree() const { return coeffs_.size() - 1; }

  /// Coefficient of t^k; reads as 0 beyond the stored degree.
  Scalar coeff(Index k) const {
    return k < coeffs_.size() ? coeffs_[k] : Scalar(0);
  }
  Scalar operator[](Index k) const { return coeffs_[k]; }

  const Coeffs& coeffs() const { return coeffs_; }

  friend bool operator==(const PowerSeries& a, const PowerSeries& b) {
    return a.coeffs_.size() == b.coeffs_.size() && (a.coeffs_ == b.coeffs_).all();
  }

 private:
  void require_finite() const {
    if (!coeffs_.isFinite().all())
      throw OverflowError("power series coefficient is not finite");
  }

  Coeffs coeffs_;
};

using PowerSeriesd = PowerSeries<double>;

namespace detail {

// Coefficient k of the product of two coefficient arrays, reading missing
// entries as zero.
template <class Scalar, class ArrayA, class ArrayB>
Scalar convolution_coeff(const ArrayA& a, const ArrayB& b, Index k) {
  const Index lo = std::max<Index>(0, k - (b.size() - 1));
  const Index hi = std::min<Index>(k, a.size() - 1);
  if (lo > hi) return Scalar(0);
  const Index n = hi - lo + 1;
  return (a.segment(lo, n) * b.segment(k - hi, n).reverse()).sum();
}

inline void require_count(Index max_degree, const char* op) {
  if (max_degree < 0)
    throw UsageError(std::string(op) + ": max_degree must be >= 0");
}

}  // namespace detail

template <class Scalar>
PowerSeries<Scalar> add(const PowerSeries<Scalar>& a, const PowerSeries<Scalar>& b) {
  typename PowerSeries<Scalar>::Coeffs out =
      PowerSeries<Scalar>::Coeffs::Zero(std::max(a.size(), b.size()));
  out.head(a.size()) = a.coeffs();
  out.head(b.size()) += b.coeffs();
  return PowerSeries<Scalar>(std::move(out));
}

template <class Scalar>
PowerSeries<Scalar> sub(const PowerSeries<Scalar>& a, const PowerSeries<Scalar>& b) {
  typename PowerSeries<Scalar>::Coeffs out =
      PowerSeries<Scalar>::Coeffs::Zero(std::max(a.size(), b.size()));
  out.head(a.size()) = a.coeffs();
  out.head(b.size()) -= b.coeffs();
  return PowerSeries<Scalar>(std::move(out));
}

template <class Scalar>
PowerSeries<Scalar> scale(const PowerSeries<Scalar>& a, Scalar beta) {
  return PowerSeries<Scalar>((beta * a.coeffs()).eval());
}

/// Truncated product: result[k] = sum_{s=0}^{k} a[s] * b[k-s] for
/// k = 0..max_degree, with coefficients beyond either operand read as zero.
template <class Scalar>
PowerSeries<Scalar> cauchy_product(const PowerSeries<Scalar>& a,
                                   const PowerSeries<Scalar>& b,
                                   Index max_degree) {
  detail::require_count(max_degree, "cauchy_product");
  typename PowerSeries<Scalar>::Coeffs out(max_degree + 1);
  for (Index k = 0; k <= max_degree; ++k)
    out[k] = detail::convolution_coeff<Scalar>(a.coeffs(), b.coeffs(), k);
  return PowerSeries<Scalar>(std::move(out));
}

/// Antiderivative with zero constant term; the degree grows by one.
template <class Scalar>
PowerSeries<Scalar> integrate(const PowerSeries<Scalar>& a) {
  using Coeffs = typename PowerSeries<Scalar>::Coeffs;
  const Index n = a.size();
  Coeffs out(n + 1);
  out[0] = Scalar(0);
  out.tail(n) = a.coeffs() / Coeffs::LinSpaced(n, Scalar(1), Scalar(n));
  return PowerSeries<Scalar>(std::move(out));
}

/// Termwise derivative; the derivative of a constant is the zero series.
template <class Scalar>
PowerSeries<Scalar> differentiate(const PowerSeries<Scalar>& a) {
  using Coeffs = typename PowerSeries<Scalar>::Coeffs;
  const Index n = a.size() - 1;
  if (n == 0) return PowerSeries<Scalar>();
  Coeffs out = a.coeffs().tail(n) * Coeffs::LinSpaced(n, Scalar(1), Scalar(n));
  return PowerSeries<Scalar>(std::move(out));
}

/// Horner evaluation, highest degree first.
template <class Scalar>
Scalar evaluate(const PowerSeries<Scalar>& a, Scalar t) {
  if (!std::isfinite(t)) throw UsageError("evaluate: t must be finite");
  Scalar acc(0);
  for (Index k = a.size() - 1; k >= 0; --k) acc = acc * t + a[k];
  if (!std::isfinite(acc))
    throw OverflowError("evaluate: result is not finite");
  return acc;
}

/// Keeps coefficients 0..max_degree, zero-padding past the stored degree.
template <class Scalar>
PowerSeries<Scalar> truncate(const PowerSeries<Scalar>& a, Index max_degree) {
  detail::require_count(max_degree, "truncate");
  typename PowerSeries<Scalar>::Coeffs out =
      PowerSeries<Scalar>::Coeffs::Zero(max_degree + 1);
  const Index n = std::min(a.size(), max_degree + 1);
  out.head(n) = a.coeffs().head(n);
  return PowerSeries<Scalar>(std::move(out));
}

template <class Scalar>
PowerSeries<Scalar> operator+(const PowerSeries<Scalar>& a, const PowerSeries<Scalar>& b) {
  return add(a, b);
}

template <class Scalar>
PowerSeries<Scalar> operator-(const PowerSeries<Scalar>& a, const PowerSeries<Scalar>& b) {
  return sub(a, b);
}

template <class Scalar>
PowerSeries<Scalar> operator-(const PowerSeries<Scalar>& a) {
  return scale(a, Scalar(-1));
}

template <class Scalar>
PowerSeries<Scalar> operator*(Scalar beta, const PowerSeries<Scalar>& a) {
  return scale(a, beta);
}

template <class Scalar>
PowerSeries<Scalar> operator*(const PowerSeries<Scalar>& a, Scalar beta) {
  return scale(a, beta);
}

}  // namespace sirseries
