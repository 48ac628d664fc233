#pragma once

#include <Eigen/Dense>

namespace latlab {

// Element of SO(d): orthogonal within 1e-9 with determinant +1.
class Rotation {
 public:
  explicit Rotation(Eigen::MatrixXd matrix);

  static Rotation identity(int d);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

 private:
  Eigen::MatrixXd matrix_;
};

}  // namespace latlab
