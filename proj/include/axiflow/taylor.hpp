#pragma once

// Forward-mode truncated Taylor arithmetic.
//
// Taylor<N>  - multivariate expansion in the three coordinates (r, z, t),
//              truncated at total degree N.
// Series<K>  - univariate expansion in a single increment h, truncated at h^K.
//
// Both are plain value types; elementary functions are applied by composing
// the expansion with the derivative list of the scalar function.

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <tuple>

namespace axiflow {

namespace detail {

constexpr double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace detail

/// Coordinate axes of a Taylor<N>.
enum class Axis : int { r = 0, z = 1, t = 2 };

template <int N>
class Taylor {
  static_assert(N >= 0 && N <= 6);

 public:
  static constexpr int kOrder = N;

  Taylor() = default;
  Taylor(double v) { c_[0] = v; }  // NOLINT: scalars promote freely

  /// The coordinate `axis` itself, expanded about `at`.
  static Taylor variable(Axis axis, double at) {
    Taylor x(at);
    if constexpr (N >= 1) {
      const int a = static_cast<int>(axis);
      x.c_[index(a == 0, a == 1, a == 2)] = 1.0;
    }
    return x;
  }

  double value() const { return c_[0]; }
  void set_value(double v) { c_[0] = v; }

  double coeff(int a, int b, int c) const { return c_[index(a, b, c)]; }
  double& coeff(int a, int b, int c) { return c_[index(a, b, c)]; }

  /// d^(a+b+c) / dr^a dz^b dt^c at the expansion point.
  double partial(int a, int b, int c) const {
    return coeff(a, b, c) * detail::factorial(a) * detail::factorial(b) *
           detail::factorial(c);
  }

  template <int M>
  Taylor<M> truncate() const {
    static_assert(M <= N);
    Taylor<M> out;
    for_each_monomial<M>([&](int a, int b, int c) { out.coeff(a, b, c) = coeff(a, b, c); });
    return out;
  }

  /// Partial derivative along `axis`; one order is lost.
  Taylor<(N > 0 ? N - 1 : 0)> diff(Axis axis) const {
    static_assert(N >= 1);
    constexpr int M = N - 1;
    Taylor<M> out;
    const int ax = static_cast<int>(axis);
    for_each_monomial<M>([&](int a, int b, int c) {
      const int da = (ax == 0), db = (ax == 1), dc = (ax == 2);
      const int power = ax == 0 ? a + 1 : (ax == 1 ? b + 1 : c + 1);
      out.coeff(a, b, c) = power * coeff(a + da, b + db, c + dc);
    });
    return out;
  }

  template <int M, class F>
  static void for_each_monomial(F&& f) {
    for (int a = 0; a <= M; ++a)
      for (int b = 0; a + b <= M; ++b)
        for (int c = 0; a + b + c <= M; ++c) f(a, b, c);
  }

  Taylor& operator+=(const Taylor& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Taylor& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  Taylor& operator+=(double s) {
    c_[0] += s;
    return *this;
  }
  Taylor& operator-=(double s) {
    c_[0] -= s;
    return *this;
  }

  friend Taylor operator+(Taylor x, const Taylor& y) { return x += y; }
  friend Taylor operator-(Taylor x, const Taylor& y) { return x -= y; }
  friend Taylor operator+(Taylor x, double s) { return x += s; }
  friend Taylor operator+(double s, Taylor x) { return x += s; }
  friend Taylor operator-(Taylor x, double s) { return x -= s; }
  friend Taylor operator-(double s, const Taylor& x) { return Taylor(s) - x; }
  friend Taylor operator-(Taylor x) { return x *= -1.0; }
  friend Taylor operator*(Taylor x, double s) { return x *= s; }
  friend Taylor operator*(double s, Taylor x) { return x *= s; }
  friend Taylor operator/(Taylor x, double s) { return x *= 1.0 / s; }

  friend Taylor operator*(const Taylor& x, const Taylor& y) {
    Taylor out;
    for_each_monomial<N>([&](int a, int b, int c) {
      const double xv = x.coeff(a, b, c);
      if (xv == 0.0) return;
      const int rest = N - a - b - c;
      for (int d = 0; d <= rest; ++d)
        for (int e = 0; d + e <= rest; ++e)
          for (int f = 0; d + e + f <= rest; ++f)
            out.coeff(a + d, b + e, c + f) += xv * y.coeff(d, e, f);
    });
    return out;
  }
  friend Taylor operator/(const Taylor& x, const Taylor& y) { return x * reciprocal(y); }
  friend Taylor operator/(double s, const Taylor& y) { return s * reciprocal(y); }

 private:
  static constexpr int kSide = N + 1;
  static constexpr int index(int a, int b, int c) { return (a * kSide + b) * kSide + c; }

  std::array<double, kSide * kSide * kSide> c_{};
};

/// Univariate truncated power series in an increment h.
template <int K>
class Series {
  static_assert(K >= 0);

 public:
  static constexpr int kOrder = K;

  Series() = default;
  Series(double v) { c_[0] = v; }  // NOLINT: scalars promote freely

  static Series variable(double at) {
    Series s(at);
    if constexpr (K >= 1) s.c_[1] = 1.0;
    return s;
  }

  double value() const { return c_[0]; }
  void set_value(double v) { c_[0] = v; }
  double operator[](int k) const { return c_[k]; }
  double& operator[](int k) { return c_[k]; }

  /// k-th derivative with respect to h at h = 0.
  double derivative(int k) const { return c_[k] * detail::factorial(k); }

  Series& operator+=(const Series& o) {
    for (int k = 0; k <= K; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Series& operator-=(const Series& o) {
    for (int k = 0; k <= K; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Series& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }

  friend Series operator+(Series x, const Series& y) { return x += y; }
  friend Series operator-(Series x, const Series& y) { return x -= y; }
  friend Series operator+(Series x, double s) { x.c_[0] += s; return x; }
  friend Series operator+(double s, Series x) { x.c_[0] += s; return x; }
  friend Series operator-(Series x, double s) { x.c_[0] -= s; return x; }
  friend Series operator-(double s, const Series& x) { return Series(s) - x; }
  friend Series operator-(Series x) { return x *= -1.0; }
  friend Series operator*(Series x, double s) { return x *= s; }
  friend Series operator*(double s, Series x) { return x *= s; }
  friend Series operator/(Series x, double s) { return x *= 1.0 / s; }

  friend Series operator*(const Series& x, const Series& y) {
    Series out;
    for (int i = 0; i <= K; ++i) {
      if (x.c_[i] == 0.0) continue;
      for (int j = 0; i + j <= K; ++j) out.c_[i + j] += x.c_[i] * y.c_[j];
    }
    return out;
  }
  friend Series operator/(const Series& x, const Series& y) { return x * reciprocal(y); }
  friend Series operator/(double s, const Series& y) { return s * reciprocal(y); }

 private:
  std::array<double, K + 1> c_{};
};

template <class J>
concept Jet = requires(const J& j) {
  { J::kOrder } -> std::convertible_to<int>;
  { j.value() } -> std::convertible_to<double>;
};

/// Derivative list f, f', ..., f^(5) at a point; enough for any order used here.
using DerivativeList = std::array<double, 6>;

/// f(x) for an expansion x, given the derivatives of f at x.value().
template <Jet J>
J compose(const J& x, const DerivativeList& d) {
  static_assert(J::kOrder < static_cast<int>(std::tuple_size_v<DerivativeList>));
  J h = x;
  h.set_value(0.0);
  J out(d[J::kOrder] / detail::factorial(J::kOrder));
  for (int k = J::kOrder - 1; k >= 0; --k) out = out * h + d[k] / detail::factorial(k);
  return out;
}

namespace detail {

inline DerivativeList exp_derivs(double x) {
  const double e = std::exp(x);
  return {e, e, e, e, e, e};
}
inline DerivativeList sin_derivs(double x) {
  const double s = std::sin(x), c = std::cos(x);
  return {s, c, -s, -c, s, c};
}
inline DerivativeList cos_derivs(double x) {
  const double s = std::sin(x), c = std::cos(x);
  return {c, -s, -c, s, c, -s};
}
inline DerivativeList sinh_derivs(double x) {
  const double s = std::sinh(x), c = std::cosh(x);
  return {s, c, s, c, s, c};
}
inline DerivativeList cosh_derivs(double x) {
  const double s = std::sinh(x), c = std::cosh(x);
  return {c, s, c, s, c, s};
}
inline DerivativeList log_derivs(double x) {
  const double u = 1.0 / x;
  return {std::log(x), u, -u * u, 2 * u * u * u, -6 * u * u * u * u, 24 * u * u * u * u * u};
}
inline DerivativeList pow_derivs(double x, double p) {
  DerivativeList d{};
  double coef = 1.0;
  for (int k = 0; k < 6; ++k) {
    d[k] = coef == 0.0 ? 0.0 : coef * std::pow(x, p - k);
    coef *= (p - k);
  }
  return d;
}
// d^k/dx^k tanh(x) is a polynomial in T = tanh(x); P_{k+1} = P_k' (1 - T^2).
inline DerivativeList tanh_derivs(double x) {
  const double T = std::tanh(x);
  std::array<double, 8> p{};  // coefficients of the current polynomial in T
  p[1] = 1.0;
  DerivativeList d{};
  for (int k = 0; k < 6; ++k) {
    double v = 0.0;
    for (int i = 7; i >= 0; --i) v = v * T + p[i];
    d[k] = v;
    std::array<double, 8> dp{};
    for (int i = 1; i < 8; ++i) dp[i - 1] = i * p[i];
    std::array<double, 8> next{};
    for (int i = 0; i < 8; ++i) {
      next[i] += dp[i];
      if (i + 2 < 8) next[i + 2] -= dp[i];
    }
    p = next;
  }
  return d;
}

}  // namespace detail

template <Jet J> J exp(const J& x) { return compose(x, detail::exp_derivs(x.value())); }
template <Jet J> J sin(const J& x) { return compose(x, detail::sin_derivs(x.value())); }
template <Jet J> J cos(const J& x) { return compose(x, detail::cos_derivs(x.value())); }
template <Jet J> J sinh(const J& x) { return compose(x, detail::sinh_derivs(x.value())); }
template <Jet J> J cosh(const J& x) { return compose(x, detail::cosh_derivs(x.value())); }
template <Jet J> J tanh(const J& x) { return compose(x, detail::tanh_derivs(x.value())); }
template <Jet J> J log(const J& x) { return compose(x, detail::log_derivs(x.value())); }
template <Jet J> J pow(const J& x, double p) { return compose(x, detail::pow_derivs(x.value(), p)); }
template <Jet J> J sqrt(const J& x) { return pow(x, 0.5); }
template <Jet J> J reciprocal(const J& x) { return pow(x, -1.0); }

inline double reciprocal(double x) { return 1.0 / x; }

/// sech^2, written through tanh so that it stays finite for large |x|.
template <class S>
S sech2(const S& x) {
  using std::tanh;
  const S th = tanh(x);
  return 1.0 - th * th;
}

/// Derivative of a series in h; the top coefficient becomes zero.
template <int K>
Series<K> differentiate(const Series<K>& s) {
  Series<K> out;
  for (int k = 0; k < K; ++k) out[k] = (k + 1) * s[k + 1];
  return out;
}

/// Antiderivative with constant term c0; the top term of `s` is dropped.
template <int K>
Series<K> integrate(const Series<K>& s, double c0) {
  Series<K> out(c0);
  for (int k = 1; k <= K; ++k) out[k] = s[k - 1] / k;
  return out;
}

/// f(g(h)) where g has zero constant term.
template <int K>
Series<K> substitute(const Series<K>& f, Series<K> g) {
  g.set_value(0.0);
  Series<K> out(f[K]);
  for (int k = K - 1; k >= 0; --k) out = out * g + f[k];
  return out;
}

/// Inverse of a series g with g(0) = 0 and g'(0) != 0: returns h with g(h(x)) = x.
template <int K>
Series<K> revert(Series<K> g) {
  g.set_value(0.0);
  const double c1 = g[1];
  const Series<K> x = Series<K>::variable(0.0);
  Series<K> h = x / c1;
  for (int it = 1; it < K; ++it) h = h + (x - substitute(g, h)) / c1;
  return h;
}

/// Evaluates a (r, z, t) expansion along increments that are themselves series in h.
template <int N, int K>
Series<K> along(const Taylor<N>& jet, const Series<K>& dr, const Series<K>& dz,
                const Series<K>& dt) {
  std::array<Series<K>, N + 1> pr, pz, pt;
  pr[0] = pz[0] = pt[0] = Series<K>(1.0);
  for (int k = 1; k <= N; ++k) {
    pr[k] = pr[k - 1] * dr;
    pz[k] = pz[k - 1] * dz;
    pt[k] = pt[k - 1] * dt;
  }
  Series<K> out;
  Taylor<N>::template for_each_monomial<N>([&](int a, int b, int c) {
    const double v = jet.coeff(a, b, c);
    if (v != 0.0) out += pr[a] * pz[b] * pt[c] * v;
  });
  return out;
}

}  // namespace axiflow
