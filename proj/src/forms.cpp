#include "supermag/forms.hpp"

namespace supermag {

TwoForm exterior_derivative(const CovectorField& A) {
  return TwoForm{VectorField([A](const auto& q) {
    using T = typename std::decay_t<decltype(q)>::value_type;
    if constexpr (can_lift_v<T>) {
      return exterior_derivative_at(A, q);
    } else {
      nesting_exhausted();
      return Vec3<T>{};
    }
  })};
}

double divergence(const TwoForm& B, const Vec3<double>& q) {
  auto J = jacobian_at(B.components, q);
  return J[0][0] + J[1][1] + J[2][2];
}

CovectorField apply_gauge(const CovectorField& A, const ScalarField& F) {
  return CovectorField{VectorField([A, F](const auto& q) {
    using T = typename std::decay_t<decltype(q)>::value_type;
    if constexpr (can_lift_v<T>) {
      return A(q) + partials_at(F, q);
    } else {
      nesting_exhausted();
      return Vec3<T>{};
    }
  })};
}

}  // namespace supermag
