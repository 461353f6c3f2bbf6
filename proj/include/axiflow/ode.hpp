#pragma once

// Dormand-Prince 5(4) with the continuous extension of Hairer, Norsett & Wanner.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "axiflow/errors.hpp"

namespace axiflow {

template <std::size_t N>
using State = std::array<double, N>;

/// Thrown by a right-hand side to refuse a trial state; the step is retried smaller.
class StepRejected : public Error {
 public:
  StepRejected(int code, const std::string& what) : Error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  ///< 0 picks one automatically
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 500000;
};

/// One accepted step with its quartic interpolant.
template <std::size_t N>
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  std::array<State<N>, 5> c{};

  double t1() const { return t0 + h; }
  double lo() const { return std::min(t0, t0 + h); }
  double hi() const { return std::max(t0, t0 + h); }

  State<N> state(double t) const {
    const double th = (t - t0) / h, th1 = 1.0 - th;
    State<N> y;
    for (std::size_t i = 0; i < N; ++i)
      y[i] = c[0][i] + th * (c[1][i] + th1 * (c[2][i] + th * (c[3][i] + th1 * c[4][i])));
    return y;
  }

  State<N> rate(double t) const {
    const double th = (t - t0) / h, th1 = 1.0 - th;
    State<N> d;
    for (std::size_t i = 0; i < N; ++i) {
      const double R = c[3][i] + th1 * c[4][i];
      const double Q = c[2][i] + th * R;
      const double P = c[1][i] + th1 * Q;
      const double dR = -c[4][i];
      const double dQ = R + th * dR;
      const double dP = -Q + th1 * dQ;
      d[i] = (P + th * dP) / h;
    }
    return d;
  }
};

/// Piecewise dense output over the integrated interval, queryable in either direction.
template <std::size_t N>
class DenseSolution {
 public:
  DenseSolution() = default;

  void push(const DenseStep<N>& step) { steps_.push_back(step); }
  void set_end(double t) { end_ = t; has_end_ = true; }

  bool empty() const { return steps_.empty(); }
  const std::vector<DenseStep<N>>& steps() const { return steps_; }
  bool forward() const { return steps_.empty() || steps_.front().h > 0; }

  double t_start() const { return steps_.empty() ? start_ : steps_.front().t0; }
  double t_stop() const { return has_end_ ? end_ : (steps_.empty() ? start_ : steps_.back().t1()); }
  double t_min() const { return std::min(t_start(), t_stop()); }
  double t_max() const { return std::max(t_start(), t_stop()); }
  void set_start(double t, const State<N>& y) { start_ = t; y_start_ = y; }

  bool contains(double t) const {
    const double slack = 1e-13 * std::max(1.0, std::abs(t));
    return t >= t_min() - slack && t <= t_max() + slack;
  }

  const DenseStep<N>& step_at(double t) const {
    if (steps_.empty()) throw RangeError("empty solution");
    if (!contains(t)) throw RangeError("time " + std::to_string(t) + " outside integrated span");
    // Steps are ordered along the integration direction; search on that ordering.
    const bool fwd = forward();
    std::size_t lo = 0, hi = steps_.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      const bool after = fwd ? t >= steps_[mid].t0 : t <= steps_[mid].t0;
      if (after) lo = mid; else hi = mid;
    }
    return steps_[lo];
  }

  State<N> state(double t) const {
    if (steps_.empty()) {
      if (t == start_) return y_start_;
      throw RangeError("empty solution");
    }
    return step_at(t).state(t);
  }
  State<N> rate(double t) const { return step_at(t).rate(t); }

 private:
  std::vector<DenseStep<N>> steps_;
  double start_ = 0.0;
  State<N> y_start_{};
  double end_ = 0.0;
  bool has_end_ = false;
};

enum class OdeHalt { completed, guard, rejected };

template <std::size_t N>
struct OdeResult {
  DenseSolution<N> solution;
  OdeHalt halt = OdeHalt::completed;
  int code = 0;  ///< guard index, or rejection code from the right-hand side
  std::string reason;
  double t_end = 0.0;
  State<N> y_end{};
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Guard g(t, y) must stay >= 0; a sign change ends the integration at the crossing.
template <std::size_t N>
using Guard = std::function<double(double, const State<N>&)>;

namespace dopri {

inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

}  // namespace dopri

/// Integrates y' = f(t, y) from t0 to t1 (either direction).
template <std::size_t N, class Rhs>
OdeResult<N> integrate_dopri5(Rhs&& f, double t0, State<N> y0, double t1, const OdeOptions& opt,
                              const std::vector<Guard<N>>& guards = {}) {
  using namespace dopri;
  OdeResult<N> res;
  res.solution.set_start(t0, y0);
  res.t_end = t0;
  res.y_end = y0;
  if (t1 == t0) return res;
  const double dir = t1 > t0 ? 1.0 : -1.0;

  auto norm = [&](const State<N>& e, const State<N>& ya, const State<N>& yb) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt.abs_tol + opt.rel_tol * std::max(std::abs(ya[i]), std::abs(yb[i]));
      s += (e[i] / sk) * (e[i] / sk);
    }
    return std::sqrt(s / N);
  };
  auto axpy = [](const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
    State<N> out = y;
    for (const auto& [w, k] : terms)
      if (w != 0.0)
        for (std::size_t i = 0; i < N; ++i) out[i] += h * w * (*k)[i];
    return out;
  };

  State<N> k1;
  try {
    k1 = f(t0, y0);
  } catch (const StepRejected& e) {
    res.halt = OdeHalt::rejected;
    res.code = e.code();
    res.reason = e.what();
    return res;
  }

  // Initial step following Hairer's heuristic.
  double h = opt.initial_step;
  if (h <= 0.0) {
    const State<N> zero{};
    const double d0 = norm(y0, y0, zero), d1n = norm(k1, y0, zero);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, std::abs(t1 - t0));
    State<N> y1 = axpy(y0, dir * h0, {{1.0, &k1}});
    double d2 = 0.0;
    try {
      const State<N> f1 = f(t0 + dir * h0, y1);
      State<N> diff;
      for (std::size_t i = 0; i < N; ++i) diff[i] = f1[i] - k1[i];
      d2 = norm(diff, y0, zero) / h0;
    } catch (const StepRejected&) {
      d2 = 0.0;
      h0 *= 0.01;
    }
    const double dm = std::max(d1n, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min(100.0 * h0, h1);
  }
  h = std::min(h, opt.max_step);

  double t = t0;
  State<N> y = y0;
  bool last_rejected = false;
  while ((t1 - t) * dir > 0.0) {
    if (res.accepted + res.rejected >= opt.max_steps)
      throw NumericError("integrator exceeded " + std::to_string(opt.max_steps) + " steps");
    const double remaining = std::abs(t1 - t);
    bool final_step = false;
    if (h >= remaining * (1.0 - 1e-14)) {
      h = remaining;
      final_step = true;
    }
    const double hs = dir * h;
    const double h_floor = 1e-14 * std::max(1.0, std::abs(t));
    State<N> k2, k3, k4, k5, k6, k7, y5;
    try {
      k2 = f(t + c2 * hs, axpy(y, hs, {{a21, &k1}}));
      k3 = f(t + c3 * hs, axpy(y, hs, {{a31, &k1}, {a32, &k2}}));
      k4 = f(t + c4 * hs, axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
      k5 = f(t + c5 * hs, axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
      k6 = f(t + hs, axpy(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
      y5 = axpy(y, hs, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
      k7 = f(final_step ? t1 : t + hs, y5);
    } catch (const StepRejected& e) {
      ++res.rejected;
      h *= 0.25;
      last_rejected = true;
      if (h < h_floor) {
        res.halt = OdeHalt::rejected;
        res.code = e.code();
        res.reason = e.what();
        break;
      }
      continue;
    }
    State<N> err;
    for (std::size_t i = 0; i < N; ++i)
      err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double en = norm(err, y, y5);
    if (!std::isfinite(en)) {
      ++res.rejected;
      h *= 0.25;
      if (h < h_floor) throw NumericError("non-finite error estimate in integrator");
      continue;
    }
    if (en <= 1.0) {
      DenseStep<N> st;
      st.t0 = t;
      st.h = hs;
      for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = y5[i] - y[i];
        const double bspl = hs * k1[i] - ydiff;
        st.c[0][i] = y[i];
        st.c[1][i] = ydiff;
        st.c[2][i] = bspl;
        st.c[3][i] = ydiff - hs * k7[i] - bspl;
        st.c[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      const double t_new = final_step ? t1 : t + hs;
      // Earliest guard crossing inside the step, located by bisection on the interpolant.
      int hit = -1;
      double t_hit = t_new;
      for (std::size_t gi = 0; gi < guards.size(); ++gi) {
        if (guards[gi](t_new, y5) >= 0.0) continue;
        double lo = t, hi = t_new;
        for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
          const double mid = 0.5 * (lo + hi);
          if (guards[gi](mid, st.state(mid)) >= 0.0) lo = mid; else hi = mid;
        }
        if (hit < 0 || (lo - t_hit) * dir < 0.0) {
          hit = static_cast<int>(gi);
          t_hit = lo;
        }
      }
      res.solution.push(st);
      ++res.accepted;
      if (hit >= 0) {
        res.solution.set_end(t_hit);
        res.halt = OdeHalt::guard;
        res.code = hit;
        res.t_end = t_hit;
        res.y_end = st.state(t_hit);
        return res;
      }
      t = t_new;
      y = y5;
      k1 = k7;
      double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      h = std::min(h * fac, opt.max_step);
      last_rejected = false;
    } else {
      ++res.rejected;
      h *= std::clamp(0.9 * std::pow(en, -0.2), 0.2, 1.0);
      last_rejected = true;
      if (h < h_floor) {
        res.halt = OdeHalt::rejected;
        res.reason = "step size underflow";
        break;
      }
    }
  }
  res.t_end = t;
  res.y_end = y;
  if (!res.solution.empty()) res.solution.set_end(t);
  return res;
}

}  // namespace axiflow
