#include "latlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "latlab/errors.hpp"

namespace latlab {

LatticeBasis::LatticeBasis(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
  if (basis_.rows() != basis_.cols() || basis_.rows() < 1)
    throw std::invalid_argument("LatticeBasis: matrix must be square");
  const double det = basis_.determinant();
  if (std::abs(det - 1.0) > 1e-9)
    throw std::invalid_argument("LatticeBasis: determinant must be 1");
}

LatticeBasis LatticeBasis::identity(int d) {
  return LatticeBasis(Eigen::MatrixXd::Identity(d, d));
}

LatticeBasis LatticeBasis::from_alpha(const Eigen::MatrixXd& alpha) {
  const auto m = alpha.rows();
  const auto n = alpha.cols();
  if (m < 1 || n < 1)
    throw std::invalid_argument("from_alpha: alpha must be m x n with m,n >= 1");
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(m + n, m + n);
  b.block(0, m, m, n) = alpha;
  return LatticeBasis(std::move(b));
}

Eigen::VectorXd LatticeBasis::point(const VectorXll& coeffs) const {
  return basis_ * coeffs.cast<double>();
}

LatticeBasis LatticeBasis::transformed(const Eigen::MatrixXd& g) const {
  return LatticeBasis(g * basis_);
}

namespace {

constexpr double kLovaszDelta = 0.99;

// Classical Gram-Schmidt of the columns of b: coefficients mu and squared
// star norms.  Throws when a star vector collapses numerically.
void gram_schmidt(const Eigen::MatrixXd& b, Eigen::MatrixXd& mu,
                  Eigen::VectorXd& bstar_sq, Eigen::MatrixXd& bstar) {
  const auto d = b.cols();
  const double scale = b.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < d; ++k) {
    bstar.col(k) = b.col(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      mu(k, j) = b.col(k).dot(bstar.col(j)) / bstar_sq[j];
      bstar.col(k) -= mu(k, j) * bstar.col(j);
    }
    bstar_sq[k] = bstar.col(k).squaredNorm();
    if (!(bstar_sq[k] > 1e-24 * scale * scale))
      throw PrecisionError("LLL: basis is numerically singular");
  }
}

}  // namespace

ReducedBasis reduce_with_transform(const Eigen::MatrixXd& basis) {
  const auto d = basis.cols();
  if (d != basis.rows() || d < 1)
    throw std::invalid_argument("reduce: matrix must be square");

  Eigen::MatrixXd b = basis;
  MatrixXll u = MatrixXll::Identity(d, d);
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd bstar = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd bstar_sq = Eigen::VectorXd::Zero(d);

  gram_schmidt(b, mu, bstar_sq, bstar);

  const long long max_iters = 10000 + 500 * static_cast<long long>(d) * d;
  long long iters = 0;
  Eigen::Index k = 1;
  while (k < d) {
    if (++iters > max_iters)
      throw PrecisionError("LLL: failed to converge");

    // Size-reduce column k, keeping mu consistent as we go.
    bool changed = false;
    for (Eigen::Index j = k - 1; j >= 0; --j) {
      const long long q = std::llround(mu(k, j));
      if (q != 0) {
        b.col(k) -= static_cast<double>(q) * b.col(j);
        u.col(k) -= q * u.col(j);
        for (Eigen::Index l = 0; l < j; ++l) mu(k, l) -= static_cast<double>(q) * mu(j, l);
        mu(k, j) -= static_cast<double>(q);
        changed = true;
      }
    }
    if (changed) gram_schmidt(b, mu, bstar_sq, bstar);

    const double lovasz = (kLovaszDelta - mu(k, k - 1) * mu(k, k - 1)) * bstar_sq[k - 1];
    if (bstar_sq[k] >= lovasz) {
      ++k;
    } else {
      b.col(k).swap(b.col(k - 1));
      u.col(k).swap(u.col(k - 1));
      gram_schmidt(b, mu, bstar_sq, bstar);
      k = std::max<Eigen::Index>(1, k - 1);
    }
  }

  // LLL swaps may leave the change of basis with determinant -1; flip the
  // last vector so reduced bases stay in SL_d.
  if (b.determinant() < 0.0) {
    b.col(d - 1) = -b.col(d - 1);
    u.col(d - 1) = -u.col(d - 1);
  }
  return ReducedBasis{std::move(b), std::move(u)};
}

LatticeBasis reduce(const LatticeBasis& L) {
  return LatticeBasis(reduce_with_transform(L.matrix()).basis);
}

namespace {

// Depth-first sphere enumeration over the Gram-Schmidt coordinates of an
// LLL-reduced basis (Fincke-Pohst).  Candidate coefficients come from the
// triangular system; each surviving candidate is re-checked against the
// caller-visible distance expression before being emitted.
class SphereEnumerator {
 public:
  SphereEnumerator(const LatticeBasis& original, const Eigen::VectorXd& center,
                   double radius, const EnumerationOptions& options)
      : original_(original), center_(center), radius_sq_(radius * radius),
        options_(options) {
    const int d = original.dim();
    if (!(radius > 0.0))
      throw std::invalid_argument("enumerate_in_ball: radius must be positive");
    if (center.size() != d)
      throw std::invalid_argument("enumerate_in_ball: center dimension mismatch");

    ReducedBasis red = reduce_with_transform(original.matrix());
    transform_ = std::move(red.transform);

    // QR with a positive diagonal so R plays the Gram-Schmidt role.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(red.basis);
    Eigen::MatrixXd q = qr.householderQ();
    r_ = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
      if (r_(i, i) < 0.0) {
        r_.row(i) = -r_.row(i);
        q.col(i) = -q.col(i);
      }
    }
    target_ = q.transpose() * center;

    prune_sq_ = radius_sq_ * (1.0 + 1e-9) + 1e-9;
    acc_.assign(static_cast<std::size_t>(d) * d, 0.0);
    coeff_red_.resize(d);
  }

  void run(const std::function<void(const LatticePoint&)>& visit) {
    visit_ = &visit;
    visited_ = 0;
    descend(original_.dim() - 1, prune_sq_);
  }

 private:
  double* acc_row(int level) { return acc_.data() + static_cast<std::size_t>(level) * original_.dim(); }

  void descend(int level, double budget) {
    const double diag = r_(level, level);
    const double off = acc_row(level)[level] - target_[level];
    const double mid = -off / diag;
    const double half = std::sqrt(std::max(budget, 0.0)) / diag;
    const long long lo = static_cast<long long>(std::ceil(mid - half));
    const long long hi = static_cast<long long>(std::floor(mid + half));

    for (long long c = lo; c <= hi; ++c) {
      const double diff = diag * static_cast<double>(c) + off;
      const double rest = budget - diff * diff;
      if (rest < 0.0) continue;
      coeff_red_[level] = c;
      if (level == 0) {
        emit();
      } else {
        const double* cur = acc_row(level);
        double* next = acc_row(level - 1);
        for (int row = 0; row < level; ++row)
          next[row] = cur[row] + r_(row, level) * static_cast<double>(c);
        descend(level - 1, rest);
      }
    }
  }

  void emit() {
    if (++visited_ > options_.max_points)
      throw ResourceError("enumerate_in_ball: point-count cap exceeded");
    LatticePoint p;
    p.coeffs = transform_ * coeff_red_;
    if (p.coeffs.isZero()) return;  // Siegel transforms sum over the nonzero points
    p.coords = original_.point(p.coeffs);
    if ((p.coords - center_).squaredNorm() <= radius_sq_) (*visit_)(p);
  }

  const LatticeBasis& original_;
  Eigen::VectorXd center_;
  double radius_sq_;
  EnumerationOptions options_;

  MatrixXll transform_;
  Eigen::MatrixXd r_;
  Eigen::VectorXd target_;
  double prune_sq_ = 0.0;

  std::vector<double> acc_;
  VectorXll coeff_red_;
  const std::function<void(const LatticePoint&)>* visit_ = nullptr;
  long long visited_ = 0;
};

}  // namespace

void for_each_point_in_ball(const LatticeBasis& L, const Eigen::VectorXd& center,
                            double radius,
                            const std::function<void(const LatticePoint&)>& visit,
                            const EnumerationOptions& options) {
  SphereEnumerator(L, center, radius, options).run(visit);
}

std::vector<LatticePoint> enumerate_in_ball(const LatticeBasis& L,
                                            const Eigen::VectorXd& center,
                                            double radius,
                                            const EnumerationOptions& options) {
  std::vector<LatticePoint> points;
  for_each_point_in_ball(
      L, center, radius, [&](const LatticePoint& p) { points.push_back(p); },
      options);
  std::sort(points.begin(), points.end(),
            [](const LatticePoint& a, const LatticePoint& b) {
              return std::lexicographical_compare(
                  a.coeffs.data(), a.coeffs.data() + a.coeffs.size(),
                  b.coeffs.data(), b.coeffs.data() + b.coeffs.size());
            });
  return points;
}

std::vector<LatticePoint> enumerate_in_ball(const LatticeBasis& L, double radius,
                                            const EnumerationOptions& options) {
  return enumerate_in_ball(L, Eigen::VectorXd::Zero(L.dim()), radius, options);
}

long long count_in_region(const LatticeBasis& L, const RegionSpec& spec,
                          const Rotation& rot, const EnumerationOptions& options) {
  return count_in_region_capped(L, spec, rot,
                                std::numeric_limits<double>::infinity(), options);
}

long long count_in_region_capped(const LatticeBasis& L, const RegionSpec& spec,
                                 const Rotation& rot, double radius_cap,
                                 const EnumerationOptions& options) {
  if (spec.dim() != L.dim())
    throw std::invalid_argument("count_in_region: dimension mismatch");
  double radius = radius_cap;
  if (spec.bounded()) radius = std::min(radius, spec.circumscribed_radius());
  if (!std::isfinite(radius))
    throw UnboundedRegionError(
        "count_in_region: region has no finite circumscribing radius; supply "
        "an explicit radius cap");

  const LatticeBasis rotated = L.transformed(rot.matrix());
  long long count = 0;
  for_each_point_in_ball(
      rotated, Eigen::VectorXd::Zero(L.dim()), radius,
      [&](const LatticePoint& p) {
        if (spec.contains(p.coords)) ++count;
      },
      options);
  return count;
}

double shortest_vector_norm_lower_bound(const LatticeBasis& L) {
  // For any basis, every nonzero lattice vector has norm >= min_i ||b*_i||;
  // reduction first makes the bound meaningful.
  ReducedBasis red = reduce_with_transform(L.matrix());
  const int d = L.dim();
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd bstar = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd bstar_sq = Eigen::VectorXd::Zero(d);
  gram_schmidt(red.basis, mu, bstar_sq, bstar);
  return std::sqrt(bstar_sq.minCoeff()) * (1.0 - 1e-9);
}

}  // namespace latlab
