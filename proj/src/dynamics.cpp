#include "latlab/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "latlab/parallel.hpp"

namespace latlab {

Eigen::VectorXd flow_diagonal(const FlowParams& fp) {
  const int m = fp.r.size();
  const int n = fp.s.size();
  Eigen::VectorXd diag(m + n);
  for (int i = 0; i < m; ++i) diag[i] = std::exp(fp.r[i] * fp.t);
  for (int j = 0; j < n; ++j) diag[m + j] = std::exp(-fp.s[j] * fp.t);
  return diag;
}

Eigen::MatrixXd flow_matrix(const FlowParams& fp) {
  return flow_diagonal(fp).asDiagonal();
}

Rotation haar_rotation(int d, RandomStream& rng) {
  if (d < 2) throw std::invalid_argument("haar_rotation: d >= 2");
  Eigen::MatrixXd g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = rng.next_normal();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& packed = qr.matrixQR();
  for (int i = 0; i < d; ++i)
    if (packed(i, i) < 0.0) q.col(i) = -q.col(i);
  if (q.determinant() < 0.0) q.col(d - 1) = -q.col(d - 1);
  return Rotation(std::move(q));
}

bool target_contains(const TargetSet& target, const Eigen::VectorXd& x) {
  return std::visit([&](const auto& t) { return t.contains(x); }, target);
}

AverageEstimate rotation_hit_fraction(const Eigen::VectorXd& v,
                                      const TargetSet& target,
                                      const FlowParams& fp, long long samples,
                                      std::uint64_t seed, int threads) {
  if (!(v.norm() > 0.0))
    throw std::invalid_argument("rotation_hit_fraction: v must be nonzero");
  if (samples < 1)
    throw std::invalid_argument("rotation_hit_fraction: samples >= 1");
  const int d = static_cast<int>(v.size());
  if (fp.dim() != d)
    throw std::invalid_argument("rotation_hit_fraction: flow dimension mismatch");

  const Eigen::VectorXd diag = flow_diagonal(fp);
  const std::size_t n_chunks =
      static_cast<std::size_t>((samples + kChunkSamples - 1) / kChunkSamples);
  std::vector<long long> chunk_hits(n_chunks, 0);

  parallel_for_chunks(n_chunks, threads, [&](std::size_t c) {
    RandomStream stream = RandomStream::substream(seed, c);
    const long long begin = static_cast<long long>(c) * kChunkSamples;
    const long long end = std::min(samples, begin + kChunkSamples);
    long long hits = 0;
    for (long long i = begin; i < end; ++i) {
      const Rotation k = haar_rotation(d, stream);
      const Eigen::VectorXd x = diag.cwiseProduct(k.matrix() * v);
      if (target_contains(target, x)) ++hits;
    }
    chunk_hits[c] = hits;
  });

  long long hits = 0;
  for (long long h : chunk_hits) hits += h;
  return estimate_from_hits(samples, hits, 1.0, seed);
}

}  // namespace latlab
