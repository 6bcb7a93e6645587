#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace pmchwt {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

/// Global point identifier shared by every surface derived from one skeleton.
using PointId = std::int64_t;

/// Bilinear cross product (Eigen's cross conjugates complex operands).
template <class A, class B>
auto cross(const A& a, const B& b) {
  using S = decltype(a[0] * b[0]);
  return Eigen::Matrix<S, 3, 1>(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}

/// Bilinear dot product (Eigen's dot conjugates the first complex operand).
template <class A, class B>
auto dot(const A& a, const B& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

constexpr double kPi = 3.14159265358979323846;
constexpr cplx kI{0.0, 1.0};

}  // namespace pmchwt
