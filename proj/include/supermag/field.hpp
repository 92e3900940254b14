#ifndef SUPERMAG_FIELD_HPP
#define SUPERMAG_FIELD_HPP

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>

#include "supermag/dual.hpp"
#include "supermag/errors.hpp"
#include "supermag/phase.hpp"

namespace supermag {

template <class T> using Scalar = T;

// Type-erased callable instantiated for double, D1 and D2 (and the extended
// LD, LD1), so that a field written once as a generic lambda can be
// evaluated with its value, first and second derivatives.
template <template <class> class Arg, template <class> class Ret>
class ErasedFn {
 public:
  ErasedFn() = default;
  template <class F>
    requires(!std::is_same_v<std::decay_t<F>, ErasedFn>)
  explicit ErasedFn(F f) : f0_(f), f1_(f), f2_(f), e0_(f), e1_(f) {}

  template <class T>
  Ret<T> operator()(const Arg<T>& a) const {
    if constexpr (std::is_same_v<T, double>) {
      return f0_(a);
    } else if constexpr (std::is_same_v<T, D1>) {
      return f1_(a);
    } else if constexpr (std::is_same_v<T, D2>) {
      return f2_(a);
    } else if constexpr (std::is_same_v<T, LD>) {
      return e0_(a);
    } else {
      static_assert(std::is_same_v<T, LD1>, "unsupported scalar level");
      return e1_(a);
    }
  }

  explicit operator bool() const { return static_cast<bool>(f0_); }

 private:
  std::function<Ret<double>(const Arg<double>&)> f0_;
  std::function<Ret<D1>(const Arg<D1>&)> f1_;
  std::function<Ret<D2>(const Arg<D2>&)> f2_;
  std::function<Ret<LD>(const Arg<LD>&)> e0_;
  std::function<Ret<LD1>(const Arg<LD1>&)> e1_;
};

// f(q) for q in R^3.
using ScalarField = ErasedFn<Vec3, Scalar>;
// (F_x, F_y, F_z)(q); used for covector fields and 2-form coefficients.
using VectorField = ErasedFn<Vec3, Vec3>;
// g(t) of one variable (the arbitrary functions of the integrable families).
using UnivariateFn = ErasedFn<Scalar, Scalar>;
using PhaseFn = ErasedFn<Phase, Scalar>;

// Next derivative level above T, or void when T is already the deepest.
template <class T> struct lift { using type = Dual<T>; };
template <> struct lift<D2> { using type = void; };
template <> struct lift<LD1> { using type = void; };
template <class T> using lift_t = typename lift<T>::type;
template <class T> inline constexpr bool can_lift_v = !std::is_void_v<lift_t<T>>;

// Differentiable scalar on phase space.
class Observable {
 public:
  Observable() = default;
  template <class F>
  Observable(std::string label, int momentum_order, F f)
      : label_(std::move(label)), order_(momentum_order), fn_(std::move(f)) {}

  const std::string& label() const { return label_; }
  int momentum_order() const { return order_; }

  template <class T>
  T eval(const Phase<T>& s) const { return fn_(s); }
  double operator()(const PhasePoint& s) const { return fn_(s); }

 private:
  std::string label_;
  int order_ = -1;
  PhaseFn fn_;
};

// Exact partials (d/dq_i, d/dp_i) at derivative level T.
template <class T>
std::array<T, 6> gradient_at(const Observable& f, const Phase<T>& s) {
  static_assert(can_lift_v<T>, "gradient requires one more derivative level");
  using U = lift_t<T>;
  std::array<T, 6> g;
  for (int k = 0; k < 6; ++k) {
    Phase<U> sd;
    for (int i = 0; i < 3; ++i) {
      sd.q[i] = U(s.q[i], T(k == i ? 1.0 : 0.0));
      sd.p[i] = U(s.p[i], T(k == 3 + i ? 1.0 : 0.0));
    }
    g[k] = f.eval(sd).d;
  }
  return g;
}

inline Grad6 gradient6(const Observable& f, const PhasePoint& s) {
  Grad6 g = gradient_at(f, s);
  for (int k = 0; k < 6; ++k) {
    if (!std::isfinite(g[k])) {
      throw EvaluationError("non-finite partial derivative of " + f.label(), k);
    }
  }
  return g;
}

// Position gradient of a scalar field at level T.
template <class T>
Vec3<T> partials_at(const ScalarField& f, const Vec3<T>& q) {
  static_assert(can_lift_v<T>);
  using U = lift_t<T>;
  Vec3<T> g;
  for (int k = 0; k < 3; ++k) {
    Vec3<U> qd;
    for (int i = 0; i < 3; ++i) qd[i] = U(q[i], T(k == i ? 1.0 : 0.0));
    g[k] = f(qd).d;
  }
  return g;
}

// jac[i][k] = d F_i / d q_k.
template <class T>
std::array<Vec3<T>, 3> jacobian_at(const VectorField& f, const Vec3<T>& q) {
  static_assert(can_lift_v<T>);
  using U = lift_t<T>;
  std::array<Vec3<T>, 3> jac;
  for (int k = 0; k < 3; ++k) {
    Vec3<U> qd;
    for (int i = 0; i < 3; ++i) qd[i] = U(q[i], T(k == i ? 1.0 : 0.0));
    Vec3<U> v = f(qd);
    for (int i = 0; i < 3; ++i) jac[i][k] = v[i].d;
  }
  return jac;
}

template <class T>
T derivative_at(const UnivariateFn& f, const T& t) {
  static_assert(can_lift_v<T>);
  using U = lift_t<T>;
  return f(U(t, T(1.0))).d;
}

[[noreturn]] inline void nesting_exhausted() {
  throw EvaluationError("derivative nesting depth exceeded", -1);
}

}  // namespace supermag

#endif  // SUPERMAG_FIELD_HPP
