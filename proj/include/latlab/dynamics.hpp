#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <variant>

#include "latlab/estimates.hpp"
#include "latlab/geometry.hpp"
#include "latlab/prob_vector.hpp"
#include "latlab/rng.hpp"
#include "latlab/rotation.hpp"

namespace latlab {

// Diagonal flow diag(e^(r_1 t),...,e^(r_m t), e^(-s_1 t),...,e^(-s_n t)).
// Unimodular because r and s each sum to 1.
struct FlowParams {
  ProbabilityVector r;
  ProbabilityVector s;
  double t = 0.0;

  int dim() const { return r.size() + s.size(); }
};

Eigen::VectorXd flow_diagonal(const FlowParams& fp);
Eigen::MatrixXd flow_matrix(const FlowParams& fp);

// Haar-distributed rotation: QR of a Gaussian matrix with the R-diagonal
// sign convention, det fixed to +1 by flipping the last column.
// Deterministic given the stream state.
Rotation haar_rotation(int d, RandomStream& rng);

// Euclidean ball target for Siegel counts; closed by default.
struct BallSpec {
  Eigen::VectorXd center;
  double radius = 0.0;
  bool closed = true;

  bool contains(const Eigen::VectorXd& x) const {
    const double dist_sq = (x - center).squaredNorm();
    const double rad_sq = radius * radius;
    return closed ? dist_sq <= rad_sq : dist_sq < rad_sq;
  }
};

using TargetSet = std::variant<RegionSpec, BallSpec>;

bool target_contains(const TargetSet& target, const Eigen::VectorXd& x);

// Monte Carlo estimate of the Haar probability that g_t k v lands in the
// target set.  Standard error is the binomial plug-in.  v must be nonzero.
AverageEstimate rotation_hit_fraction(const Eigen::VectorXd& v,
                                      const TargetSet& target,
                                      const FlowParams& fp, long long samples,
                                      std::uint64_t seed, int threads = 1);

}  // namespace latlab
