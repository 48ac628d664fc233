#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "latlab/geometry.hpp"
#include "latlab/rotation.hpp"

namespace latlab {

using VectorXll = Eigen::Matrix<long long, Eigen::Dynamic, 1>;
using MatrixXll = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

struct LatticePoint {
  VectorXll coeffs;        // integer coordinates w.r.t. the basis handed in
  Eigen::VectorXd coords;  // basis * coeffs
};

// Basis of a unimodular lattice: d x d matrix whose columns generate, with
// |det - 1| <= 1e-9.
class LatticeBasis {
 public:
  explicit LatticeBasis(Eigen::MatrixXd basis);

  static LatticeBasis identity(int d);

  // Block upper-triangular basis [[I_m, alpha],[0, I_n]] attached to an
  // m x n matrix alpha; its points are (alpha q + p'; q) over integer
  // (p', q).  Determinant is exactly 1.
  static LatticeBasis from_alpha(const Eigen::MatrixXd& alpha);

  int dim() const { return static_cast<int>(basis_.rows()); }
  const Eigen::MatrixXd& matrix() const { return basis_; }

  Eigen::VectorXd point(const VectorXll& coeffs) const;

  // Same lattice under the linear map g (g must keep it unimodular).
  LatticeBasis transformed(const Eigen::MatrixXd& g) const;

 private:
  Eigen::MatrixXd basis_;
};

struct EnumerationOptions {
  long long max_points = 100'000'000;  // resource cap on visited points
};

struct ReducedBasis {
  Eigen::MatrixXd basis;  // = original * transform
  MatrixXll transform;    // integer, determinant +-1
};

// LLL reduction (Lovász parameter 0.99) with the exact integer change of
// basis.  Throws PrecisionError on numerically singular input.
ReducedBasis reduce_with_transform(const Eigen::MatrixXd& basis);
LatticeBasis reduce(const LatticeBasis& L);

// Visits every nonzero lattice point x with ||x - center|| <= radius
// (closed ball; the zero lattice vector is always skipped).  Membership is
// decided on (L.point(coeffs) - center).squaredNorm() <= radius^2 so that
// results agree bit-for-bit with a brute-force scan using the same
// expression.  Deterministic visiting order.
void for_each_point_in_ball(const LatticeBasis& L, const Eigen::VectorXd& center,
                            double radius,
                            const std::function<void(const LatticePoint&)>& visit,
                            const EnumerationOptions& options = {});

// Materialized variants, sorted by coefficient vector (canonical order).
std::vector<LatticePoint> enumerate_in_ball(const LatticeBasis& L, double radius,
                                            const EnumerationOptions& options = {});
std::vector<LatticePoint> enumerate_in_ball(const LatticeBasis& L,
                                            const Eigen::VectorXd& center,
                                            double radius,
                                            const EnumerationOptions& options = {});

// #{ (rot Lambda) intersect region }: enumerates the rotated lattice inside
// the region's circumscribing ball and filters by membership.  Throws
// UnboundedRegionError when the region has no finite radius and no cap is
// supplied.
long long count_in_region(const LatticeBasis& L, const RegionSpec& spec,
                          const Rotation& rot,
                          const EnumerationOptions& options = {});

// Same, but enumeration is clipped to radius_cap (used for region families
// whose true extent is infinite; the result is then a lower bound).
long long count_in_region_capped(const LatticeBasis& L, const RegionSpec& spec,
                                 const Rotation& rot, double radius_cap,
                                 const EnumerationOptions& options = {});

// Certified positive lower bound on the shortest nonzero vector norm: the
// Gram-Schmidt minimum of an LLL-reduced basis.
double shortest_vector_norm_lower_bound(const LatticeBasis& L);

}  // namespace latlab
