#include "latlab/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "latlab/errors.hpp"

namespace latlab {

double weighted_quasinorm(const Eigen::VectorXd& v, const ProbabilityVector& p) {
  if (v.size() != p.size())
    throw std::invalid_argument("weighted_quasinorm: dimension mismatch");
  double best = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    const double a = std::pow(std::abs(v[i]), 1.0 / p[i]);
    if (a > best) best = a;
  }
  return best;
}

double product_norm(const Eigen::VectorXd& v) {
  if (v.size() < 1) throw std::invalid_argument("product_norm: empty vector");
  double prod = 1.0;
  for (int i = 0; i < v.size(); ++i) prod *= std::abs(v[i]);
  return prod;
}

double reference_slice_volume(int m) {
  if (m < 1) throw std::invalid_argument("reference_slice_volume: m >= 1");
  return std::ldexp(1.0, m);
}

bool admissible_set_contains(double delta, const Eigen::VectorXd& u) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("admissible_set_contains: delta in (0,1)");
  if (std::abs(u.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("admissible_set_contains: u must be unit");
  for (int i = 0; i < u.size(); ++i)
    if (!(std::abs(u[i]) > delta)) return false;
  return true;
}

DirectionSet DirectionSet::full_sphere(int m) {
  if (m < 1) throw std::invalid_argument("DirectionSet: ambient dim >= 1");
  return DirectionSet(Kind::full_sphere, m);
}

DirectionSet DirectionSet::cap(Eigen::VectorXd center, double radius) {
  if (center.size() < 1)
    throw std::invalid_argument("DirectionSet: empty cap center");
  if (std::abs(center.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("DirectionSet: cap center must be unit");
  if (!(radius > 0.0))
    throw std::invalid_argument("DirectionSet: cap radius must be positive");
  DirectionSet a(Kind::cap, static_cast<int>(center.size()));
  a.center_ = std::move(center);
  a.radius_ = radius;
  return a;
}

DirectionSet DirectionSet::admissible_complement(int m, double delta) {
  if (m < 1) throw std::invalid_argument("DirectionSet: ambient dim >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("DirectionSet: delta in (0,1)");
  DirectionSet a(Kind::admissible_complement, m);
  a.delta_ = delta;
  return a;
}

DirectionSet DirectionSet::cap_in_admissible(Eigen::VectorXd center,
                                             double radius, double delta) {
  DirectionSet a = cap(std::move(center), radius);
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("DirectionSet: delta in (0,1)");
  a.kind_ = Kind::cap_in_admissible;
  a.delta_ = delta;
  return a;
}

bool DirectionSet::contains_unit(const Eigen::VectorXd& u) const {
  switch (kind_) {
    case Kind::full_sphere:
      return true;
    case Kind::cap:
      return (u - center_).norm() <= radius_;
    case Kind::admissible_complement: {
      for (int i = 0; i < u.size(); ++i)
        if (!(std::abs(u[i]) > delta_)) return false;
      return true;
    }
    case Kind::cap_in_admissible: {
      for (int i = 0; i < u.size(); ++i)
        if (!(std::abs(u[i]) > delta_)) return false;
      return (u - center_).norm() <= radius_;
    }
  }
  return false;
}

bool DirectionSet::sign_symmetric() const {
  return kind_ == Kind::full_sphere || kind_ == Kind::admissible_complement;
}

double DirectionSet::admissible_margin() const {
  switch (kind_) {
    case Kind::full_sphere:
      return 0.0;
    case Kind::cap: {
      // Every u in the cap has |u_i| >= |c_i| - radius.
      double margin = 1.0;
      for (int i = 0; i < center_.size(); ++i)
        margin = std::min(margin, std::abs(center_[i]) - radius_);
      return margin;
    }
    case Kind::admissible_complement:
      return delta_;
    case Kind::cap_in_admissible: {
      double margin = 1.0;
      for (int i = 0; i < center_.size(); ++i)
        margin = std::min(margin, std::abs(center_[i]) - radius_);
      return std::max(margin, delta_);
    }
  }
  return 0.0;
}

bool cone_contains(const DirectionSet& A, const Eigen::VectorXd& w,
                   const ProbabilityVector& r, double T) {
  if (w.size() != A.ambient_dim() || w.size() != r.size())
    throw std::invalid_argument("cone_contains: dimension mismatch");
  if (!(T > 0.0)) throw std::invalid_argument("cone_contains: T must be > 0");
  Eigen::VectorXd flowed(w.size());
  for (int i = 0; i < w.size(); ++i) flowed[i] = std::pow(T, r[i]) * w[i];
  const double norm = flowed.norm();
  if (!(norm > 0.0))
    throw std::invalid_argument("cone_contains: rays undefined at the origin");
  return A.contains_unit(flowed / norm);
}

RegionSpec::RegionSpec(RegionFamily family, int m, int n, ProbabilityVector r,
                       ProbabilityVector s, double epsilon, double T,
                       std::optional<DirectionSet> direction)
    : family_(family),
      m_(m),
      n_(n),
      r_(std::move(r)),
      s_(std::move(s)),
      epsilon_(epsilon),
      T_(T),
      direction_(std::move(direction)) {
  if (m_ < 1 || n_ < 1) throw std::invalid_argument("RegionSpec: m,n >= 1");
  if (r_.size() != m_ || s_.size() != n_)
    throw std::invalid_argument("RegionSpec: weight dimensions must match m,n");
  if (!(epsilon_ > 0.0 && epsilon_ <= 1.0))
    throw std::invalid_argument("RegionSpec: epsilon in (0,1]");
  if (!(T_ >= 1.0)) throw std::invalid_argument("RegionSpec: T >= 1");
  if (direction_ && direction_->ambient_dim() != m_)
    throw std::invalid_argument("RegionSpec: direction set lives on S^(m-1)");

  inv_r_.resize(static_cast<std::size_t>(m_));
  inv_s_.resize(static_cast<std::size_t>(n_));
  dir_scale_.resize(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) {
    inv_r_[static_cast<std::size_t>(i)] = 1.0 / r_[i];
    dir_scale_[static_cast<std::size_t>(i)] = std::pow(T_, r_[i]);
  }
  for (int j = 0; j < n_; ++j) inv_s_[static_cast<std::size_t>(j)] = 1.0 / s_[j];
  eps_T_ = epsilon_ * T_;
}

RegionSpec RegionSpec::multiplicative(int m, int n, double epsilon, double T,
                                      std::optional<DirectionSet> direction) {
  return RegionSpec(RegionFamily::multiplicative, m, n,
                    ProbabilityVector::uniform(m), ProbabilityVector::uniform(n),
                    epsilon, T, std::move(direction));
}

RegionSpec RegionSpec::with_T(double T) const {
  return RegionSpec(family_, m_, n_, r_, s_, epsilon_, T, direction_);
}

RegionSpec RegionSpec::with_direction(
    std::optional<DirectionSet> direction) const {
  return RegionSpec(family_, m_, n_, r_, s_, epsilon_, T_, std::move(direction));
}

bool RegionSpec::contains(const Eigen::VectorXd& v) const {
  if (v.size() != dim())
    throw std::invalid_argument("RegionSpec::contains: dimension mismatch");
  const double* x = v.data();

  double n1, n2;
  if (family_ == RegionFamily::weighted) {
    n1 = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double a =
          std::pow(std::abs(x[i]), inv_r_[static_cast<std::size_t>(i)]);
      if (a > n1) n1 = a;
    }
    n2 = 0.0;
    for (int j = 0; j < n_; ++j) {
      const double a =
          std::pow(std::abs(x[m_ + j]), inv_s_[static_cast<std::size_t>(j)]);
      if (a > n2) n2 = a;
    }
  } else {
    n1 = 1.0;
    for (int i = 0; i < m_; ++i) n1 *= std::abs(x[i]);
    n2 = 1.0;
    for (int j = 0; j < n_; ++j) n2 *= std::abs(x[m_ + j]);
  }

  const double prod = n1 * n2;
  if (!(prod > 0.0 && prod <= 1.0)) return false;
  if (!(n2 >= eps_T_ && n2 <= T_)) return false;

  if (direction_) {
    double norm_sq = 0.0;
    Eigen::VectorXd flowed(m_);
    for (int i = 0; i < m_; ++i) {
      flowed[i] = dir_scale_[static_cast<std::size_t>(i)] * x[i];
      norm_sq += flowed[i] * flowed[i];
    }
    // prod > 0 rules v1 = 0 out already.
    return direction_->contains_unit(flowed / std::sqrt(norm_sq));
  }
  return true;
}

Eigen::VectorXd RegionSpec::sampling_box_halfwidths() const {
  Eigen::VectorXd half(dim());
  if (family_ == RegionFamily::weighted) {
    // ||v1||_r <= 1/(eps T) boxes each |v1_i| by (1/(eps T))^(r_i), and
    // ||v2||_s <= T boxes each |v2_j| by T^(s_j).
    const double b1 = 1.0 / eps_T_;
    for (int i = 0; i < m_; ++i) half[i] = std::pow(b1, r_[i]);
    for (int j = 0; j < n_; ++j) half[m_ + j] = std::pow(T_, s_[j]);
    return half;
  }

  // Multiplicative family.  For n >= 2 the product annulus on v2 is already
  // unbounded; for n = 1 it gives |v2| <= T.  The v1 block is bounded only
  // when the flowed direction is kept a positive margin away from every
  // great sphere: with w = g^(r)_log(T) v1 and min_i |w_i|/||w|| > margin,
  //   prod|w_i| = T prod|v1_i| <= 1/eps  and  prod|w_i| > ||w||^m margin^m,
  // so ||w|| < (1/eps)^(1/m)/margin and |v1_i| <= T^(-r_i) ||w||.
  if (n_ >= 2)
    throw UnboundedRegionError(
        "multiplicative region with n >= 2 has an unbounded product annulus");
  const double margin = direction_ ? direction_->admissible_margin() : 0.0;
  if (!(margin > 0.0))
    throw UnboundedRegionError(
        "multiplicative region needs a direction set with positive margin "
        "from every great sphere");
  const double w_bound =
      std::pow(1.0 / epsilon_, 1.0 / static_cast<double>(m_)) / margin;
  for (int i = 0; i < m_; ++i) half[i] = std::pow(T_, -r_[i]) * w_bound;
  half[m_] = T_;
  return half;
}

double RegionSpec::circumscribed_radius() const {
  return sampling_box_halfwidths().norm();
}

bool RegionSpec::bounded() const {
  if (family_ == RegionFamily::weighted) return true;
  return n_ == 1 && direction_ && direction_->admissible_margin() > 0.0;
}

}  // namespace latlab
