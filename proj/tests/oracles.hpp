#pragma once

#include <Eigen/Dense>

#include <vector>

#include "latlab/lattice.hpp"
#include "latlab/prob_vector.hpp"
#include "latlab/rng.hpp"

namespace latlab::testing {

// Brute-force ball enumeration over a coefficient box derived from the
// inverse basis; independent of the sphere-decoding path.  Membership uses
// the same expression as the production enumerator,
// (L.point(c) - center).squaredNorm() <= radius^2, so the two routes must
// agree exactly.
std::vector<VectorXll> brute_force_ball(const LatticeBasis& L,
                                        const Eigen::VectorXd& center,
                                        double radius);

std::vector<std::vector<long long>> sorted_coeffs(
    const std::vector<LatticePoint>& points);
std::vector<std::vector<long long>> sorted_coeffs(
    const std::vector<VectorXll>& points);

// Gaussian matrix rescaled to determinant exactly... well, 1 up to rounding;
// redraws while the draw is ill-conditioned.
Eigen::MatrixXd random_unimodular(int d, RandomStream& rng);

// Random weights bounded away from zero (entries >= ~0.1 after normalizing).
ProbabilityVector random_weights(int len, RandomStream& rng);

}  // namespace latlab::testing
