#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "latlab/prob_vector.hpp"

namespace latlab {

// max_i |v_i|^(1/p_i).  Zero exactly when v = 0.
double weighted_quasinorm(const Eigen::VectorXd& v, const ProbabilityVector& p);

// prod_i |v_i|.
double product_norm(const Eigen::VectorXd& v);

// m-volume of the slice { v : ||v||_(1/m,...,1/m) <= 1 } = [-1,1]^m, i.e. 2^m.
// Closed form for uniform weights only.
double reference_slice_volume(int m);

// True when the unit vector u stays off every delta-thickened great sphere,
// i.e. |u_i| > delta for all i.  Requires ||u|| = 1 within 1e-9 and
// 0 < delta < 1.
bool admissible_set_contains(double delta, const Eigen::VectorXd& u);

// Measurable direction sets on S^(m-1) used by the region families.  All
// variants have zero-measure boundary by construction.
class DirectionSet {
 public:
  enum class Kind { full_sphere, cap, admissible_complement, cap_in_admissible };

  static DirectionSet full_sphere(int m);
  // Euclidean metric cap: { u : ||u - center|| <= radius }, center unit.
  static DirectionSet cap(Eigen::VectorXd center, double radius);
  // Complement of all delta-thickened great spheres, 0 < delta < 1.
  static DirectionSet admissible_complement(int m, double delta);
  static DirectionSet cap_in_admissible(Eigen::VectorXd center, double radius,
                                        double delta);

  Kind kind() const { return kind_; }
  int ambient_dim() const { return dim_; }
  double delta() const { return delta_; }
  const Eigen::VectorXd& cap_center() const { return center_; }
  double cap_radius() const { return radius_; }

  // Membership for an (assumed unit) direction.
  bool contains_unit(const Eigen::VectorXd& u) const;

  // Invariant under coordinate sign flips (full sphere, admissible
  // complement, and caps whose center sits on a coordinate axis are not
  // detected; only the structurally symmetric variants return true).
  bool sign_symmetric() const;

  // Lower bound on min_i |u_i| over the set, or <= 0 when the set reaches a
  // great sphere.  A positive margin is what makes multiplicative regions
  // bounded in the v1 block.
  double admissible_margin() const;

 private:
  DirectionSet(Kind kind, int dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  int dim_;
  Eigen::VectorXd center_;
  double radius_ = 0.0;
  double delta_ = 0.0;
};

// True when the ray through w, flowed by diag(T^(r_1),...,T^(r_m)), points
// into A; equivalently w lies in the cone through A pulled back by the
// inverse flow.  w must be nonzero.
bool cone_contains(const DirectionSet& A, const Eigen::VectorXd& w,
                   const ProbabilityVector& r, double T);

enum class RegionFamily { weighted, multiplicative };

// One member of the weighted / multiplicative region families:
//
//   weighted:        0 < ||v1||_r ||v2||_s <= 1,   eps*T <= ||v2||_s <= T
//   multiplicative:  0 < ||v1||_pr ||v2||_pr <= 1, eps*T <= ||v2||_pr <= T
//
// plus, when a direction set A is present, the flowed ray condition on v1.
// The weights r,s always ride along: the weighted family uses them in its
// norms, and both families use r for the direction flow and (r,s) for the
// time-log(T) equivariance that maps the region onto its T=1 shape.
class RegionSpec {
 public:
  RegionSpec(RegionFamily family, int m, int n, ProbabilityVector r,
             ProbabilityVector s, double epsilon, double T,
             std::optional<DirectionSet> direction);

  // Multiplicative family with uniform weights.
  static RegionSpec multiplicative(int m, int n, double epsilon, double T,
                                   std::optional<DirectionSet> direction);

  RegionFamily family() const { return family_; }
  int m() const { return m_; }
  int n() const { return n_; }
  int dim() const { return m_ + n_; }
  const ProbabilityVector& r() const { return r_; }
  const ProbabilityVector& s() const { return s_; }
  double epsilon() const { return epsilon_; }
  double T() const { return T_; }
  const std::optional<DirectionSet>& direction() const { return direction_; }

  RegionSpec with_T(double T) const;
  RegionSpec with_direction(std::optional<DirectionSet> direction) const;

  bool contains(const Eigen::VectorXd& v) const;

  // Euclidean radius of a ball guaranteed to contain the region.  Throws
  // UnboundedRegionError when no finite radius exists (multiplicative family
  // without a positive direction margin, or with n >= 2 where the v2 product
  // annulus is itself unbounded).
  double circumscribed_radius() const;

  // Per-coordinate half-widths of an axis-aligned box containing the region;
  // the rejection-sampling domain for volume estimates.  Throws like
  // circumscribed_radius().
  Eigen::VectorXd sampling_box_halfwidths() const;

  bool bounded() const;

 private:
  RegionFamily family_;
  int m_, n_;
  ProbabilityVector r_, s_;
  double epsilon_, T_;
  std::optional<DirectionSet> direction_;

  // Cached per-construction values for the hot membership path.
  std::vector<double> inv_r_, inv_s_, dir_scale_;
  double eps_T_;
};

}  // namespace latlab
