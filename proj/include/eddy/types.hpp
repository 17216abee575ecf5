#pragma once

#include <Eigen/Core>

namespace eddy {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

/// Column-major 2×n block of planar positions; column i is the i-th sample.
template <typename Scalar>
using Path2 = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

using Vec2 = Vector2<double>;
using Mat2 = Matrix2<double>;
using Path = Path2<double>;

}  // namespace eddy
