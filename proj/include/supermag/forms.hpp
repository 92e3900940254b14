#ifndef SUPERMAG_FORMS_HPP
#define SUPERMAG_FORMS_HPP

#include "supermag/field.hpp"

namespace supermag {

// Vector potential A = A_x dx + A_y dy + A_z dz.
struct CovectorField {
  VectorField components;

  template <class T>
  Vec3<T> operator()(const Vec3<T>& q) const { return components(q); }
};

// Magnetic 2-form B = B_x dy^dz + B_y dz^dx + B_z dx^dy.
struct TwoForm {
  VectorField components;

  template <class T>
  Vec3<T> operator()(const Vec3<T>& q) const { return components(q); }
};

// Curl of A from exact first derivatives, at derivative level T.
template <class T>
Vec3<T> exterior_derivative_at(const CovectorField& A, const Vec3<T>& q) {
  auto J = jacobian_at(A.components, q);
  return {J[2][1] - J[1][2], J[0][2] - J[2][0], J[1][0] - J[0][1]};
}

inline Vec3<double> exterior_derivative(const CovectorField& A, const Vec3<double>& q) {
  return exterior_derivative_at(A, q);
}

// dA as a TwoForm (evaluable at value and first-derivative level).
TwoForm exterior_derivative(const CovectorField& A);

double divergence(const TwoForm& B, const Vec3<double>& q);

// A + grad F.
CovectorField apply_gauge(const CovectorField& A, const ScalarField& F);

}  // namespace supermag

#endif  // SUPERMAG_FORMS_HPP
