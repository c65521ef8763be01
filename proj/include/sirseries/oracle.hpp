#pragma once

#include <cmath>
#include <ostream>
#include <string>

#include "sirseries/format.hpp"
#include "sirseries/model.hpp"
#include "sirseries/series.hpp"

namespace sirseries {

/// Sampled reference trajectory; states rows are (S, I, R).
template <class Scalar>
struct Trajectory {
  Eigen::Array<Scalar, Eigen::Dynamic, 1> times;
  Eigen::Array<Scalar, Eigen::Dynamic, 3> states;

  Index samples() const { return times.size(); }
};

using Trajectoryd = Trajectory<double>;

/// Classical fourth-order Runge-Kutta with fixed step from t = 0, recording
/// every accepted step; a final partial step lands exactly on t_end.
template <class Scalar>
Trajectory<Scalar> rk4_integrate(const SirParams<Scalar>& params,
                                 const InitialState<Scalar>& init, Scalar t_end,
                                 Scalar step) {
  validate(params);
  validate(init);
  if (!(std::isfinite(step) && step > Scalar(0)))
    throw UsageError("rk4_integrate: step must be > 0");
  if (!(std::isfinite(t_end) && t_end >= Scalar(0)))
    throw UsageError("rk4_integrate: t_end must be >= 0");

  const Scalar ratio = t_end / step;
  if (ratio > Scalar(1e8))
    throw UsageError("rk4_integrate: more than 1e8 steps requested");
  // Nudge past roundoff in the division so an exact multiple is not split
  // into a full step plus an epsilon-size tail.
  const Index full = Index(std::floor(ratio + ratio * Scalar(1e-12) + Scalar(1e-12)));
  const Scalar tail = t_end - Scalar(full) * step;
  const bool has_tail = tail > step * Scalar(1e-9);

  const Index rows = full + 1 + (has_tail ? 1 : 0);
  Trajectory<Scalar> traj;
  traj.times.resize(rows);
  traj.states.resize(rows, 3);
  for (Index k = 0; k + 1 < rows; ++k) traj.times[k] = Scalar(k) * step;
  traj.times[rows - 1] = t_end;

  StateVec<Scalar> y{init.s0, init.i0, init.r0};
  traj.states.row(0) = y.transpose();
  for (Index k = 0; k + 1 < rows; ++k) {
    const Scalar t = traj.times[k];
    const Scalar h = traj.times[k + 1] - t;
    const StateVec<Scalar> k1 = rhs(params, t, y[0], y[1], y[2]);
    const StateVec<Scalar> y2 = y + (h / 2) * k1;
    const StateVec<Scalar> k2 = rhs(params, t + h / 2, y2[0], y2[1], y2[2]);
    const StateVec<Scalar> y3 = y + (h / 2) * k2;
    const StateVec<Scalar> k3 = rhs(params, t + h / 2, y3[0], y3[1], y3[2]);
    const StateVec<Scalar> y4 = y + h * k3;
    const StateVec<Scalar> k4 = rhs(params, t + h, y4[0], y4[1], y4[2]);
    y += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!y.isFinite().all())
      throw DivergenceError("rk4_integrate: non-finite state at t = " +
                                format_display(double(traj.times[k + 1])),
                            double(traj.times[k + 1]));
    traj.states.row(k + 1) = y.transpose();
  }
  return traj;
}

/// Max over trajectory samples of the infinity norm of (series - state).
template <class Scalar>
Scalar max_deviation(const SeriesSolution<Scalar>& sol,
                     const Trajectory<Scalar>& traj) {
  if (traj.samples() == 0)
    throw UsageError("max_deviation: empty trajectory");
  Scalar worst(0);
  for (Index k = 0; k < traj.samples(); ++k) {
    const Scalar t = traj.times[k];
    StateVec<Scalar> diff{evaluate(sol.s, t) - traj.states(k, 0),
                          evaluate(sol.i, t) - traj.states(k, 1),
                          evaluate(sol.r, t) - traj.states(k, 2)};
    worst = std::max(worst, diff.abs().maxCoeff());
  }
  return worst;
}

/// CSV form: header `t,S,I,R`, one row per sample, 17 significant digits.
inline void write_csv(const Trajectoryd& traj, std::ostream& out) {
  out << "t,S,I,R\n";
  for (Index k = 0; k < traj.samples(); ++k)
    out << format_full(traj.times[k]) << ',' << format_full(traj.states(k, 0))
        << ',' << format_full(traj.states(k, 1)) << ','
        << format_full(traj.states(k, 2)) << '\n';
}

}  // namespace sirseries
