#include "latlab/rotation.hpp"

#include <cmath>
#include <stdexcept>

namespace latlab {

Rotation::Rotation(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1)
    throw std::invalid_argument("Rotation: matrix must be square");
  const auto d = matrix_.rows();
  const Eigen::MatrixXd gram = matrix_.transpose() * matrix_;
  if ((gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("Rotation: matrix is not orthogonal");
  if (std::abs(matrix_.determinant() - 1.0) > 1e-9)
    throw std::invalid_argument("Rotation: determinant must be +1");
}

Rotation Rotation::identity(int d) {
  return Rotation(Eigen::MatrixXd::Identity(d, d));
}

}  // namespace latlab
