#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace latlab::testing {

std::vector<VectorXll> brute_force_ball(const LatticeBasis& L,
                                        const Eigen::VectorXd& center,
                                        double radius) {
  const int d = L.dim();
  const Eigen::MatrixXd inverse = L.matrix().inverse();
  const double reach = center.norm() + radius;

  std::vector<long long> bound(static_cast<std::size_t>(d));
  double total = 1.0;
  for (int i = 0; i < d; ++i) {
    bound[static_cast<std::size_t>(i)] =
        static_cast<long long>(std::ceil(inverse.row(i).norm() * reach)) + 1;
    total *= static_cast<double>(2 * bound[static_cast<std::size_t>(i)] + 1);
  }
  if (total > 2e8) throw std::runtime_error("brute_force_ball: box too large");

  const double radius_sq = radius * radius;
  std::vector<VectorXll> points;
  VectorXll c(d);
  std::function<void(int)> walk = [&](int level) {
    if (level == d) {
      if (c.isZero()) return;
      if ((L.point(c) - center).squaredNorm() <= radius_sq) points.push_back(c);
      return;
    }
    for (long long v = -bound[static_cast<std::size_t>(level)];
         v <= bound[static_cast<std::size_t>(level)]; ++v) {
      c[level] = v;
      walk(level + 1);
    }
  };
  walk(0);
  return points;
}

namespace {

std::vector<std::vector<long long>> sort_rows(
    std::vector<std::vector<long long>> rows) {
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace

std::vector<std::vector<long long>> sorted_coeffs(
    const std::vector<LatticePoint>& points) {
  std::vector<std::vector<long long>> rows;
  rows.reserve(points.size());
  for (const auto& p : points)
    rows.emplace_back(p.coeffs.data(), p.coeffs.data() + p.coeffs.size());
  return sort_rows(std::move(rows));
}

std::vector<std::vector<long long>> sorted_coeffs(
    const std::vector<VectorXll>& points) {
  std::vector<std::vector<long long>> rows;
  rows.reserve(points.size());
  for (const auto& c : points)
    rows.emplace_back(c.data(), c.data() + c.size());
  return sort_rows(std::move(rows));
}

Eigen::MatrixXd random_unimodular(int d, RandomStream& rng) {
  while (true) {
    Eigen::MatrixXd g(d, d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) g(i, j) = rng.next_normal();
    double det = g.determinant();
    if (std::abs(det) < 0.2) continue;
    if (det < 0.0) {
      g.col(0) = -g.col(0);
      det = -det;
    }
    g /= std::pow(det, 1.0 / d);
    return g;
  }
}

ProbabilityVector random_weights(int len, RandomStream& rng) {
  std::vector<double> w(static_cast<std::size_t>(len));
  double sum = 0.0;
  for (double& v : w) {
    v = rng.next_uniform(0.25, 1.0);
    sum += v;
  }
  double acc = 0.0;
  for (int i = 0; i + 1 < len; ++i) {
    w[static_cast<std::size_t>(i)] /= sum;
    acc += w[static_cast<std::size_t>(i)];
  }
  w[static_cast<std::size_t>(len - 1)] = 1.0 - acc;
  return ProbabilityVector(std::move(w));
}

}  // namespace latlab::testing
