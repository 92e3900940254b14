#ifndef SUPERMAG_DUAL_HPP
#define SUPERMAG_DUAL_HPP

#include <cmath>
#include <type_traits>

namespace supermag {

// Forward-mode dual number carrying one tangent direction. Nesting
// Dual<Dual<double>> yields mixed second derivatives.
template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(double c) : v(c), d(0.0) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T value, T tangent) : v(value), d(tangent) {}
  constexpr Dual(const T& value)
    requires(!std::is_same_v<T, double>)
      : v(value), d(0.0) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
// Extended-precision levels, used where double cancellation would dominate a
// residual (closure polynomials).
using LD = long double;
using LD1 = Dual<LD>;

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};

template <class T> constexpr Dual<T> operator+(const Dual<T>& a) { return a; }
template <class T> constexpr Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }

template <class T> constexpr Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T> constexpr Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T> constexpr Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
template <class T> constexpr Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T inv = T(1.0) / b.v;
  T q = a.v * inv;
  return {q, (a.d - q * b.d) * inv};
}

template <class T> constexpr Dual<T> operator+(const Dual<T>& a, double c) { return {a.v + c, a.d}; }
template <class T> constexpr Dual<T> operator+(double c, const Dual<T>& a) { return {a.v + c, a.d}; }
template <class T> constexpr Dual<T> operator-(const Dual<T>& a, double c) { return {a.v - c, a.d}; }
template <class T> constexpr Dual<T> operator-(double c, const Dual<T>& a) { return {c - a.v, -a.d}; }
template <class T> constexpr Dual<T> operator*(const Dual<T>& a, double c) { return {a.v * c, a.d * c}; }
template <class T> constexpr Dual<T> operator*(double c, const Dual<T>& a) { return {a.v * c, a.d * c}; }
template <class T> constexpr Dual<T> operator/(const Dual<T>& a, double c) { return {a.v / c, a.d / c}; }
template <class T> constexpr Dual<T> operator/(double c, const Dual<T>& a) { return Dual<T>(c) / a; }

template <class T> constexpr bool operator<(const Dual<T>& a, const Dual<T>& b) { return a.v < b.v; }
template <class T> constexpr bool operator>(const Dual<T>& a, const Dual<T>& b) { return a.v > b.v; }
template <class T> constexpr bool operator<(const Dual<T>& a, double c) { return a.v < c; }
template <class T> constexpr bool operator>(const Dual<T>& a, double c) { return a.v > c; }

inline constexpr double value(double x) { return x; }
inline constexpr double value(long double x) { return static_cast<double>(x); }
template <class T> constexpr double value(const Dual<T>& a) { return value(a.v); }

template <class T> Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T s = sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}
template <class T> Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.v), cos(a.v) * a.d};
}
template <class T> Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.v), -sin(a.v) * a.d};
}
template <class T> Dual<T> tan(const Dual<T>& a) {
  using std::tan;
  T t = tan(a.v);
  return {t, (1.0 + t * t) * a.d};
}
template <class T> Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.v);
  return {e, e * a.d};
}
template <class T> Dual<T> log(const Dual<T>& a) {
  using std::log;
  return {log(a.v), a.d / a.v};
}
template <class T> Dual<T> sinh(const Dual<T>& a) {
  using std::cosh;
  using std::sinh;
  return {sinh(a.v), cosh(a.v) * a.d};
}
template <class T> Dual<T> cosh(const Dual<T>& a) {
  using std::cosh;
  using std::sinh;
  return {cosh(a.v), sinh(a.v) * a.d};
}
template <class T> Dual<T> atan(const Dual<T>& a) {
  using std::atan;
  return {atan(a.v), a.d / (1.0 + a.v * a.v)};
}
template <class T> Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
  using std::atan2;
  T den = x.v * x.v + y.v * y.v;
  return {atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / den};
}
template <class T> Dual<T> acosh(const Dual<T>& a) {
  using std::acosh;
  using std::sqrt;
  return {acosh(a.v), a.d / sqrt(a.v * a.v - 1.0)};
}
template <class T> Dual<T> abs(const Dual<T>& a) { return value(a) < 0.0 ? -a : a; }

// Integer power by repeated squaring; works for double, Dual and Complex.
template <class T>
T ipow(T base, int e) {
  T result(1.0);
  if (e < 0) {
    base = T(1.0) / base;
    e = -e;
  }
  while (e > 0) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

template <class T> constexpr T sq(const T& x) { return x * x; }

// Minimal complex type usable with dual scalars (std::complex is only
// specified for floating-point element types).
template <class T>
struct Complex {
  T re{};
  T im{};
  constexpr Complex() = default;
  constexpr Complex(double r) : re(r), im(0.0) {}  // NOLINT
  constexpr Complex(T r, T i) : re(r), im(i) {}
  constexpr Complex(const T& r)
    requires(!std::is_same_v<T, double>)
      : re(r), im(0.0) {}
};

template <class T> Complex<T> operator+(const Complex<T>& a, const Complex<T>& b) { return {a.re + b.re, a.im + b.im}; }
template <class T> Complex<T> operator-(const Complex<T>& a, const Complex<T>& b) { return {a.re - b.re, a.im - b.im}; }
template <class T> Complex<T> operator-(const Complex<T>& a) { return {-a.re, -a.im}; }
template <class T> Complex<T> operator*(const Complex<T>& a, const Complex<T>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class T>
  requires(!std::is_same_v<T, double>)
Complex<T> operator*(const Complex<T>& a, const T& s) { return {a.re * s, a.im * s}; }
template <class T>
  requires(!std::is_same_v<T, double>)
Complex<T> operator*(const T& s, const Complex<T>& a) { return {a.re * s, a.im * s}; }
template <class T> Complex<T> operator*(const Complex<T>& a, double s) { return {a.re * s, a.im * s}; }
template <class T> Complex<T> operator*(double s, const Complex<T>& a) { return {a.re * s, a.im * s}; }
template <class T>
  requires(!std::is_same_v<T, double>)
Complex<T> operator/(const Complex<T>& a, const T& s) { return {a.re / s, a.im / s}; }
template <class T> Complex<T> operator/(const Complex<T>& a, double s) { return {a.re / s, a.im / s}; }
template <class T> Complex<T> operator/(const Complex<T>& a, const Complex<T>& b) {
  T den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
template <class T> T norm2(const Complex<T>& a) { return a.re * a.re + a.im * a.im; }

}  // namespace supermag

#endif  // SUPERMAG_DUAL_HPP
