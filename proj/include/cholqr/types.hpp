#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <limits>

namespace cholqr {

/// Dense working types, templated on the scalar. Everything in this library
/// stores tall matrices row-major so that row blocks are contiguous and the
/// on-disk layout matches the in-memory one.
template <typename Scalar_>
struct dense_types {
  using Scalar = Scalar_;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using MatrixRef = Eigen::Ref<Matrix>;
  using ConstMatrixRef = Eigen::Ref<const Matrix>;
};

using Index = Eigen::Index;

// Working precision of the toolkit is binary64.
using Matrix = dense_types<double>::Matrix;
using Vector = dense_types<double>::Vector;
using MatrixRef = dense_types<double>::MatrixRef;
using ConstMatrixRef = dense_types<double>::ConstMatrixRef;

/// Unit round-off of binary64, u = 2^-52.
inline constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon();

/// The algorithm family. HouseholderQr is the dense baseline; the Gaussian
/// variant of RqrCholeskyQr swaps the row-extraction sketch for a Gaussian one.
enum class Method {
  HouseholderQr,
  CholeskyQr,
  CholeskyQr2,
  ShiftedCholeskyQr3,
  RluCholeskyQr,
  RqrCholeskyQr,
  RqrCholeskyQrGaussian,
};

const char* method_name(Method m);

}  // namespace cholqr
