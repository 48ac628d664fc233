#pragma once

#include <Eigen/Dense>

#include <vector>

#include "latlab/lattice.hpp"
#include "latlab/prob_vector.hpp"

namespace latlab {

// One approximation of the m x n matrix alpha: integer denominators q and
// numerators p with errors = alpha q - p.
struct ApproximatePair {
  Eigen::VectorXi q;       // n denominators
  Eigen::VectorXi p;       // m numerators
  Eigen::VectorXd errors;  // alpha q - p
  double height = 0.0;     // the solver's norm of q
};

// First pair found in canonical search order (sup-norm shells; within a
// shell the last coordinate varies slowest and values are tried in the
// order 0, 1, -1, 2, -2, ...) with
//   1 <= ||q||_inf <= Q   and   ||alpha q - p||_inf <= Q^(-n/m).
// Existence is a theorem; exhausting the box without a witness throws
// logic_error because it can only mean a bug.
ApproximatePair dirichlet_solve(const Eigen::MatrixXd& alpha, double Q);

// Best pair (smallest error product, then smallest height product, then
// first in canonical order) with
//   (prod_j max(1,|q_j|))^(1/n) <= Q  and  (prod_i |err_i|)^(1/m) <= Q^(-n/m).
ApproximatePair multiplicative_solve(const Eigen::MatrixXd& alpha, double Q);

// Every pair with ||q||_s <= height_bound and ||alpha q - p||_r <= 1/||q||_s,
// ordered lexicographically in q then p.  Zero-error pairs are included.
std::vector<ApproximatePair> weighted_solutions(const Eigen::MatrixXd& alpha,
                                                const ProbabilityVector& r,
                                                const ProbabilityVector& s,
                                                double height_bound);

// Flowed spiraling direction of each pair's error vector: the unit vector
// of diag(T^(r_1),...,T^(r_m)) * errors.  Pairs with a zero error vector are
// skipped; their indices are appended to `skipped` when given.
std::vector<Eigen::VectorXd> approximate_directions(
    const std::vector<ApproximatePair>& pairs, const ProbabilityVector& r,
    double T, std::vector<std::size_t>* skipped = nullptr);

}  // namespace latlab
