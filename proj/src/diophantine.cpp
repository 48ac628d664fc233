#include "latlab/diophantine.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace latlab {
namespace {

constexpr double kSlack = 1e-12;

// Canonical order for exhaustive searches: sup-norm shells h = 1, 2, ...;
// within a shell an odometer whose last coordinate varies slowest and whose
// per-coordinate values run 0, 1, -1, 2, -2, ...  This makes e_1 the first
// candidate overall.
long long value_of_rank(long long rank) {
  return rank % 2 == 1 ? (rank + 1) / 2 : -(rank / 2);
}

bool visit_shell(int dims, long long shell,
                 const std::function<bool(const Eigen::VectorXi&)>& visit) {
  Eigen::VectorXi q(dims);
  std::vector<long long> rank(static_cast<std::size_t>(dims), 0);
  const long long n_values = 2 * shell + 1;

  std::function<bool(int)> walk = [&](int level) -> bool {
    if (level < 0) {
      long long sup = 0;
      for (int i = 0; i < dims; ++i) sup = std::max<long long>(sup, std::abs(q[i]));
      if (sup != shell) return true;
      return visit(q);
    }
    for (long long rk = 0; rk < n_values; ++rk) {
      q[level] = static_cast<int>(value_of_rank(rk));
      if (!walk(level - 1)) return false;
    }
    return true;
  };
  return walk(dims - 1);
}

// Visits nonzero integer vectors in canonical order up to sup norm `bound`;
// stops early when visit returns false.
void visit_canonical(int dims, long long bound,
                     const std::function<bool(const Eigen::VectorXi&)>& visit) {
  for (long long shell = 1; shell <= bound; ++shell)
    if (!visit_shell(dims, shell, visit)) return;
}

Eigen::VectorXi nearest_integer(const Eigen::VectorXd& x) {
  Eigen::VectorXi p(x.size());
  for (int i = 0; i < x.size(); ++i)
    p[i] = static_cast<int>(std::llround(x[i]));
  return p;
}

}  // namespace

ApproximatePair dirichlet_solve(const Eigen::MatrixXd& alpha, double Q) {
  const int m = static_cast<int>(alpha.rows());
  const int n = static_cast<int>(alpha.cols());
  if (m < 1 || n < 1) throw std::invalid_argument("dirichlet_solve: bad alpha");
  if (!(Q > 1.0)) throw std::invalid_argument("dirichlet_solve: Q > 1");

  const double error_bound =
      std::pow(Q, -static_cast<double>(n) / static_cast<double>(m));
  const long long q_bound = static_cast<long long>(std::floor(Q + kSlack));

  ApproximatePair result;
  bool found = false;
  visit_canonical(n, q_bound, [&](const Eigen::VectorXi& q) {
    const Eigen::VectorXd image = alpha * q.cast<double>();
    const Eigen::VectorXi p = nearest_integer(image);
    const Eigen::VectorXd errors = image - p.cast<double>();
    if (errors.cwiseAbs().maxCoeff() <= error_bound + kSlack) {
      result.q = q;
      result.p = p;
      result.errors = errors;
      result.height = q.cast<double>().cwiseAbs().maxCoeff();
      found = true;
      return false;
    }
    return true;
  });
  if (!found)
    throw std::logic_error(
        "dirichlet_solve: exhausted the box without a witness (bug)");
  return result;
}

ApproximatePair multiplicative_solve(const Eigen::MatrixXd& alpha, double Q) {
  const int m = static_cast<int>(alpha.rows());
  const int n = static_cast<int>(alpha.cols());
  if (m < 1 || n < 1)
    throw std::invalid_argument("multiplicative_solve: bad alpha");
  if (!(Q > 1.0)) throw std::invalid_argument("multiplicative_solve: Q > 1");

  // Height (prod max(1,|q_j|))^(1/n) <= Q allows a single coordinate as
  // large as Q^n when the others stay at 1.
  const double height_cap = std::pow(Q, n);
  const long long q_bound = static_cast<long long>(std::floor(height_cap + kSlack));
  const double error_cap = std::pow(Q, -n);  // prod |err_i| <= Q^(-n)

  ApproximatePair best;
  bool found = false;
  double best_err_prod = 0.0, best_height_prod = 0.0;

  visit_canonical(n, q_bound, [&](const Eigen::VectorXi& q) {
    double height_prod = 1.0;
    for (int j = 0; j < n; ++j)
      height_prod *= std::max(1.0, std::abs(static_cast<double>(q[j])));
    if (height_prod > height_cap + kSlack) return true;

    const Eigen::VectorXd image = alpha * q.cast<double>();
    const Eigen::VectorXi p = nearest_integer(image);
    const Eigen::VectorXd errors = image - p.cast<double>();
    double err_prod = 1.0;
    for (int i = 0; i < m; ++i) err_prod *= std::abs(errors[i]);
    if (err_prod > error_cap + kSlack) return true;

    const bool better =
        !found || err_prod < best_err_prod ||
        (err_prod == best_err_prod && height_prod < best_height_prod);
    if (better) {
      best.q = q;
      best.p = p;
      best.errors = errors;
      best.height = std::pow(height_prod, 1.0 / static_cast<double>(n));
      best_err_prod = err_prod;
      best_height_prod = height_prod;
      found = true;
    }
    return true;
  });
  if (!found)
    throw std::logic_error(
        "multiplicative_solve: exhausted the box without a witness (bug)");
  return best;
}

std::vector<ApproximatePair> weighted_solutions(const Eigen::MatrixXd& alpha,
                                                const ProbabilityVector& r,
                                                const ProbabilityVector& s,
                                                double height_bound) {
  const int m = static_cast<int>(alpha.rows());
  const int n = static_cast<int>(alpha.cols());
  if (m < 1 || n < 1)
    throw std::invalid_argument("weighted_solutions: bad alpha");
  if (r.size() != m || s.size() != n)
    throw std::invalid_argument("weighted_solutions: weight dimension mismatch");
  if (!(height_bound >= 1.0))
    throw std::invalid_argument("weighted_solutions: height_bound >= 1");

  // ||q||_s <= H boxes each |q_j| by H^(s_j).
  Eigen::VectorXi box(n);
  for (int j = 0; j < n; ++j)
    box[j] = static_cast<int>(std::floor(std::pow(height_bound, s[j]) + kSlack));

  std::vector<ApproximatePair> out;
  Eigen::VectorXi q(n);

  std::function<void(int)> walk = [&](int level) {
    if (level == n) {
      if (q.isZero()) return;
      const double height = weighted_quasinorm(q.cast<double>(), s);
      if (height > height_bound) return;
      const double bound = 1.0 / height;

      // ||alpha q - p||_r <= bound decouples into |err_i| <= bound^(r_i).
      const Eigen::VectorXd image = alpha * q.cast<double>();
      Eigen::VectorXd width(m);
      for (int i = 0; i < m; ++i) width[i] = std::pow(bound, r[i]);

      Eigen::VectorXi p(m);
      std::function<void(int)> walk_p = [&](int i) {
        if (i == m) {
          ApproximatePair pair;
          pair.q = q;
          pair.p = p;
          pair.errors = image - p.cast<double>();
          pair.height = height;
          out.push_back(std::move(pair));
          return;
        }
        const long long lo = static_cast<long long>(std::ceil(image[i] - width[i]));
        const long long hi = static_cast<long long>(std::floor(image[i] + width[i]));
        for (long long v = lo; v <= hi; ++v) {
          if (std::abs(image[i] - static_cast<double>(v)) > width[i]) continue;
          p[i] = static_cast<int>(v);
          walk_p(i + 1);
        }
      };
      walk_p(0);
      return;
    }
    for (int v = -box[level]; v <= box[level]; ++v) {
      q[level] = v;
      walk(level + 1);
    }
  };
  walk(0);
  return out;
}

std::vector<Eigen::VectorXd> approximate_directions(
    const std::vector<ApproximatePair>& pairs, const ProbabilityVector& r,
    double T, std::vector<std::size_t>* skipped) {
  if (!(T > 0.0))
    throw std::invalid_argument("approximate_directions: T > 0");
  std::vector<Eigen::VectorXd> directions;
  directions.reserve(pairs.size());
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const Eigen::VectorXd& err = pairs[idx].errors;
    if (err.size() != r.size())
      throw std::invalid_argument("approximate_directions: dimension mismatch");
    Eigen::VectorXd flowed(err.size());
    for (int i = 0; i < err.size(); ++i) flowed[i] = std::pow(T, r[i]) * err[i];
    const double norm = flowed.norm();
    if (!(norm > 0.0)) {
      if (skipped) skipped->push_back(idx);
      continue;
    }
    directions.push_back(flowed / norm);
  }
  return directions;
}

}  // namespace latlab
