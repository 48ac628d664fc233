#include "latlab/siegel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "latlab/errors.hpp"
#include "latlab/parallel.hpp"

namespace latlab {
namespace {

// Seed-substream indices reserved for the sub-tasks of an experiment, so a
// single experiment seed drives every stochastic piece independently.
constexpr std::uint64_t kNumeratorVolumeStream = 0xA1;
constexpr std::uint64_t kDenominatorVolumeStream = 0xA2;
constexpr std::uint64_t kRowStreamBase = 0xB000;

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t index) {
  return RandomStream::substream(seed, index).next_u64();
}

Eigen::MatrixXd flowed_rotated_basis(const Eigen::VectorXd& diag,
                                     const Rotation& k, const LatticeBasis& L) {
  Eigen::MatrixXd m = k.matrix() * L.matrix();
  m.array().colwise() *= diag.array();
  return m;
}

template <class Pred>
long long count_points(const Eigen::MatrixXd& basis, const Eigen::VectorXd& center,
                       double radius, Pred pred, const EnumerationOptions& options) {
  const LatticeBasis lattice(basis);
  long long count = 0;
  for_each_point_in_ball(
      lattice, center, radius,
      [&](const LatticePoint& p) {
        if (pred(p.coords)) ++count;
      },
      options);
  return count;
}

struct CountMoments {
  long long sum = 0;
  long long sum_sq = 0;
};

// Mean/SE over `samples` Haar rotations of an integer per-rotation count.
template <class CountFn>
AverageEstimate rotation_average(int d, long long samples, std::uint64_t seed,
                                 int threads, CountFn count_of_rotation) {
  const std::size_t n_chunks =
      static_cast<std::size_t>((samples + kChunkSamples - 1) / kChunkSamples);
  std::vector<CountMoments> chunks(n_chunks);

  parallel_for_chunks(n_chunks, threads, [&](std::size_t c) {
    RandomStream stream = RandomStream::substream(seed, c);
    const long long begin = static_cast<long long>(c) * kChunkSamples;
    const long long end = std::min(samples, begin + kChunkSamples);
    CountMoments acc;
    for (long long i = begin; i < end; ++i) {
      const Rotation k = haar_rotation(d, stream);
      const long long count = count_of_rotation(k);
      acc.sum += count;
      acc.sum_sq += count * count;
    }
    chunks[c] = acc;
  });

  CountMoments total;
  for (const CountMoments& c : chunks) {
    total.sum += c.sum;
    total.sum_sq += c.sum_sq;
  }
  return estimate_from_sums(samples, total.sum, total.sum_sq, seed);
}

// Rejection sampling volume over an axis-aligned box.
template <class Pred>
AverageEstimate box_rejection_volume(const Eigen::VectorXd& lo,
                                     const Eigen::VectorXd& hi, Pred pred,
                                     long long samples, std::uint64_t seed,
                                     int threads) {
  if (samples < 1)
    throw std::invalid_argument("box_rejection_volume: samples >= 1");
  const int d = static_cast<int>(lo.size());
  double box_volume = 1.0;
  for (int i = 0; i < d; ++i) box_volume *= hi[i] - lo[i];

  const std::size_t n_chunks =
      static_cast<std::size_t>((samples + kChunkSamples - 1) / kChunkSamples);
  std::vector<long long> chunk_hits(n_chunks, 0);

  parallel_for_chunks(n_chunks, threads, [&](std::size_t c) {
    RandomStream stream = RandomStream::substream(seed, c);
    const long long begin = static_cast<long long>(c) * kChunkSamples;
    const long long end = std::min(samples, begin + kChunkSamples);
    Eigen::VectorXd x(d);
    long long hits = 0;
    for (long long i = begin; i < end; ++i) {
      for (int j = 0; j < d; ++j) x[j] = stream.next_uniform(lo[j], hi[j]);
      if (pred(x)) ++hits;
    }
    chunk_hits[c] = hits;
  });

  long long hits = 0;
  for (long long h : chunk_hits) hits += h;
  return estimate_from_hits(samples, hits, box_volume, seed);
}

}  // namespace

long long siegel_count(const LatticeBasis& L, const TargetSet& target,
                       const EnumerationOptions& options) {
  if (const auto* ball = std::get_if<BallSpec>(&target)) {
    if (!(ball->radius > 0.0) || !std::isfinite(ball->radius))
      throw UnboundedRegionError("siegel_count: ball must have finite radius");
    long long count = 0;
    for_each_point_in_ball(
        L, ball->center, ball->radius,
        [&](const LatticePoint& p) {
          if (ball->contains(p.coords)) ++count;
        },
        options);
    return count;
  }
  const auto& spec = std::get<RegionSpec>(target);
  return count_in_region(L, spec, Rotation::identity(L.dim()), options);
}

AverageEstimate spherical_average_mc(const LatticeBasis& L,
                                     const RegionSpec& spec, long long samples,
                                     std::uint64_t seed, int threads,
                                     const EnumerationOptions& options) {
  if (samples < 2)
    throw std::invalid_argument("spherical_average_mc: samples >= 2");
  if (spec.dim() != L.dim())
    throw std::invalid_argument("spherical_average_mc: dimension mismatch");
  const RegionSpec unit = spec.with_T(1.0);
  const double radius = unit.circumscribed_radius();
  const FlowParams fp{spec.r(), spec.s(), std::log(spec.T())};
  const Eigen::VectorXd diag = flow_diagonal(fp);
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(L.dim());

  return rotation_average(L.dim(), samples, seed, threads, [&](const Rotation& k) {
    return count_points(
        flowed_rotated_basis(diag, k, L), origin, radius,
        [&](const Eigen::VectorXd& x) { return unit.contains(x); }, options);
  });
}

AverageEstimate flowed_ball_average_mc(const LatticeBasis& L,
                                       const BallSpec& ball,
                                       const FlowParams& fp, long long samples,
                                       std::uint64_t seed, int threads,
                                       const EnumerationOptions& options) {
  if (samples < 2)
    throw std::invalid_argument("flowed_ball_average_mc: samples >= 2");
  if (fp.dim() != L.dim() || ball.center.size() != L.dim())
    throw std::invalid_argument("flowed_ball_average_mc: dimension mismatch");
  const Eigen::VectorXd diag = flow_diagonal(fp);

  return rotation_average(L.dim(), samples, seed, threads, [&](const Rotation& k) {
    return count_points(
        flowed_rotated_basis(diag, k, L), ball.center, ball.radius,
        [&](const Eigen::VectorXd& x) { return ball.contains(x); }, options);
  });
}

AverageEstimate spherical_average_shellsum(const LatticeBasis& L,
                                           const RegionSpec& spec,
                                           long long sphere_samples,
                                           std::uint64_t seed, int threads,
                                           const EnumerationOptions& options) {
  if (sphere_samples < 2)
    throw std::invalid_argument("spherical_average_shellsum: samples >= 2");
  if (spec.dim() != L.dim())
    throw std::invalid_argument("spherical_average_shellsum: dimension mismatch");

  // Rotations preserve norms, so only vectors inside the region's own
  // circumscribing ball can ever land in it.
  const double reach = spec.circumscribed_radius();
  const std::vector<LatticePoint> vectors = enumerate_in_ball(L, reach, options);

  const RegionSpec unit = spec.with_T(1.0);
  const FlowParams fp{spec.r(), spec.s(), std::log(spec.T())};
  const TargetSet target{unit};

  std::vector<AverageEstimate> per_vector(vectors.size());
  parallel_for_chunks(vectors.size(), threads, [&](std::size_t j) {
    per_vector[j] = rotation_hit_fraction(vectors[j].coords, target, fp,
                                          sphere_samples, derived_seed(seed, j),
                                          /*threads=*/1);
  });

  AverageEstimate total;
  total.samples = sphere_samples;
  total.seed = seed;
  double var = 0.0;
  for (const AverageEstimate& e : per_vector) {
    total.mean += e.mean;
    var += e.std_error * e.std_error;
  }
  total.std_error = std::sqrt(var);
  return total;
}

AverageEstimate volume_mc(const RegionSpec& spec, long long samples,
                          std::uint64_t seed, int threads) {
  const Eigen::VectorXd half = spec.sampling_box_halfwidths();
  return box_rejection_volume(
      (-half).eval(), half,
      [&](const Eigen::VectorXd& x) { return spec.contains(x); }, samples, seed,
      threads);
}

AverageEstimate ball_volume_mc(const BallSpec& ball, long long samples,
                               std::uint64_t seed, int threads) {
  const Eigen::VectorXd lo = ball.center.array() - ball.radius;
  const Eigen::VectorXd hi = ball.center.array() + ball.radius;
  return box_rejection_volume(
      lo, hi, [&](const Eigen::VectorXd& x) { return ball.contains(x); },
      samples, seed, threads);
}

AverageEstimate slice_volume_mc(const ProbabilityVector& r, long long samples,
                                std::uint64_t seed, int threads) {
  const int m = r.size();
  // ||v||_r <= 1 boxes every coordinate by 1; enlarge so rejection happens.
  const Eigen::VectorXd half = Eigen::VectorXd::Constant(m, 1.5);
  return box_rejection_volume(
      (-half).eval(), half,
      [&](const Eigen::VectorXd& x) { return weighted_quasinorm(x, r) <= 1.0; },
      samples, seed, threads);
}

AverageEstimate truncated_cone_volume(const DirectionSet& cap, double tau,
                                      long long samples, std::uint64_t seed,
                                      int threads) {
  if (cap.kind() != DirectionSet::Kind::cap &&
      cap.kind() != DirectionSet::Kind::cap_in_admissible)
    throw std::invalid_argument("truncated_cone_volume: direction set must be a cap");
  if (tau <= 1.0) {
    AverageEstimate zero;
    zero.samples = samples;
    zero.seed = seed;
    return zero;
  }

  const int m = cap.ambient_dim();
  const Eigen::VectorXd& c = cap.cap_center();
  const double rho = cap.cap_radius();
  Eigen::VectorXd lo(m), hi(m);
  for (int i = 0; i < m; ++i) {
    const double u_lo = std::max(c[i] - rho, -1.0);
    const double u_hi = std::min(c[i] + rho, 1.0);
    lo[i] = u_lo >= 0.0 ? 0.0 : tau * u_lo;
    hi[i] = u_hi <= 0.0 ? 0.0 : tau * u_hi;
  }

  const double tau_sq = tau * tau;
  return box_rejection_volume(
      lo, hi,
      [&](const Eigen::VectorXd& x) {
        const double norm_sq = x.squaredNorm();
        if (!(norm_sq >= 1.0 && norm_sq <= tau_sq)) return false;
        if (!(product_norm(x) <= 1.0)) return false;
        return cap.contains_unit(x / std::sqrt(norm_sq));
      },
      samples, seed, threads);
}

namespace {

struct SharedMoments {
  long long num = 0, den = 0;
  long long num_sq = 0, den_sq = 0, cross = 0;
};

// Shared-rotation numerator/denominator counts with the exact moments the
// ratio standard error needs.
SharedMoments shared_counts(const LatticeBasis& L, const RegionSpec& num_unit,
                            const RegionSpec& den_unit, const FlowParams& fp,
                            long long samples, std::uint64_t seed, int threads,
                            const EnumerationOptions& options) {
  const double radius = den_unit.circumscribed_radius();
  const Eigen::VectorXd diag = flow_diagonal(fp);
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(L.dim());

  const std::size_t n_chunks =
      static_cast<std::size_t>((samples + kChunkSamples - 1) / kChunkSamples);
  std::vector<SharedMoments> chunks(n_chunks);

  parallel_for_chunks(n_chunks, threads, [&](std::size_t c) {
    RandomStream stream = RandomStream::substream(seed, c);
    const long long begin = static_cast<long long>(c) * kChunkSamples;
    const long long end = std::min(samples, begin + kChunkSamples);
    SharedMoments acc;
    for (long long i = begin; i < end; ++i) {
      const Rotation k = haar_rotation(L.dim(), stream);
      const LatticeBasis flowed(flowed_rotated_basis(diag, k, L));
      long long nc = 0, dc = 0;
      for_each_point_in_ball(
          flowed, origin, radius,
          [&](const LatticePoint& p) {
            if (den_unit.contains(p.coords)) ++dc;
            if (num_unit.contains(p.coords)) ++nc;
          },
          options);
      acc.num += nc;
      acc.den += dc;
      acc.num_sq += nc * nc;
      acc.den_sq += dc * dc;
      acc.cross += nc * dc;
    }
    chunks[c] = acc;
  });

  SharedMoments total;
  for (const SharedMoments& c : chunks) {
    total.num += c.num;
    total.den += c.den;
    total.num_sq += c.num_sq;
    total.den_sq += c.den_sq;
    total.cross += c.cross;
  }
  return total;
}

}  // namespace

RatioCurve ratio_experiment(const LatticeBasis& L, const RegionSpec& base,
                            const DirectionSet& A,
                            const std::vector<double>& T_grid,
                            long long samples, long long volume_samples,
                            std::uint64_t seed, int threads,
                            std::optional<double> denominator_delta,
                            const EnumerationOptions& options) {
  if (A.ambient_dim() != base.m())
    throw std::invalid_argument("ratio_experiment: direction set lives on S^(m-1)");
  if (samples < 2)
    throw std::invalid_argument("ratio_experiment: samples >= 2");
  for (std::size_t i = 1; i < T_grid.size(); ++i)
    if (!(T_grid[i] > T_grid[i - 1]))
      throw std::invalid_argument("ratio_experiment: T grid must be increasing");

  const RegionSpec numerator_base = base.with_direction(A);
  std::optional<RegionSpec> denominator_base;
  if (base.family() == RegionFamily::weighted) {
    denominator_base = base.with_direction(std::nullopt);
  } else {
    if (!denominator_delta)
      throw std::invalid_argument(
          "ratio_experiment: multiplicative family needs the admissible delta");
    if (!(A.admissible_margin() > *denominator_delta))
      throw std::invalid_argument(
          "ratio_experiment: A must sit inside the admissible set");
    denominator_base = base.with_direction(
        DirectionSet::admissible_complement(base.m(), *denominator_delta));
  }

  RatioCurve curve;
  curve.numerator_volume =
      volume_mc(numerator_base.with_T(1.0), volume_samples,
                derived_seed(seed, kNumeratorVolumeStream), threads);
  curve.denominator_volume =
      volume_mc(denominator_base->with_T(1.0), volume_samples,
                derived_seed(seed, kDenominatorVolumeStream), threads);
  const double vn = curve.numerator_volume.mean;
  const double vd = curve.denominator_volume.mean;
  if (vd > 0.0) {
    curve.target_ratio = vn / vd;
    const double rel_n = vn > 0.0 ? curve.numerator_volume.std_error / vn : 0.0;
    const double rel_d = curve.denominator_volume.std_error / vd;
    curve.target_se =
        std::abs(curve.target_ratio) * std::sqrt(rel_n * rel_n + rel_d * rel_d);
  } else {
    curve.target_ratio = std::numeric_limits<double>::quiet_NaN();
    curve.target_se = std::numeric_limits<double>::quiet_NaN();
  }

  const RegionSpec num_unit = numerator_base.with_T(1.0);
  const RegionSpec den_unit = denominator_base->with_T(1.0);
  for (std::size_t ti = 0; ti < T_grid.size(); ++ti) {
    const double T = T_grid[ti];
    const FlowParams fp{base.r(), base.s(), std::log(T)};
    const std::uint64_t row_seed = derived_seed(seed, kRowStreamBase + ti);

    const SharedMoments mm = shared_counts(L, num_unit, den_unit, fp, samples,
                                           row_seed, threads, options);

    RatioRow row;
    row.T = T;
    row.numerator = estimate_from_sums(samples, mm.num, mm.num_sq, row_seed);
    row.denominator = estimate_from_sums(samples, mm.den, mm.den_sq, row_seed);
    row.degenerate =
        row.denominator.mean - 4.0 * row.denominator.std_error <= 0.0;
    if (!row.degenerate) {
      const double k = static_cast<double>(samples);
      const double nbar = row.numerator.mean;
      const double dbar = row.denominator.mean;
      const double ratio = nbar / dbar;
      // Delta method for the ratio of correlated sample means.
      const double s_nn =
          (static_cast<double>(mm.num_sq) - k * nbar * nbar) / (k - 1.0);
      const double s_dd =
          (static_cast<double>(mm.den_sq) - k * dbar * dbar) / (k - 1.0);
      const double s_nd =
          (static_cast<double>(mm.cross) - k * nbar * dbar) / (k - 1.0);
      const double var =
          (s_nn - 2.0 * ratio * s_nd + ratio * ratio * s_dd) / (k * dbar * dbar);
      row.ratio = ratio;
      row.ratio_se = var > 0.0 ? std::sqrt(var) : 0.0;
    } else {
      row.ratio = std::numeric_limits<double>::quiet_NaN();
      row.ratio_se = std::numeric_limits<double>::quiet_NaN();
    }
    curve.rows.push_back(std::move(row));
  }
  return curve;
}

CuspCurve cusp_divergence_experiment(const LatticeBasis& L,
                                     const DirectionSet& A, double epsilon,
                                     const std::vector<double>& T_grid,
                                     long long samples, std::uint64_t seed,
                                     const ProbabilityVector& r,
                                     const ProbabilityVector& s, int threads,
                                     double kappa, std::optional<double> gamma,
                                     const EnumerationOptions& options) {
  const int m = A.ambient_dim();
  const int n = L.dim() - m;
  if (n < 1)
    throw std::invalid_argument("cusp_divergence_experiment: lattice too small");
  if (!(kappa > 0.0))
    throw std::invalid_argument("cusp_divergence_experiment: kappa > 0");

  const RegionSpec unit(RegionFamily::multiplicative, m, n, r, s, epsilon, 1.0,
                        A);
  const double region_radius =
      unit.bounded() ? unit.circumscribed_radius()
                     : std::numeric_limits<double>::infinity();

  CuspCurve curve;
  curve.kappa = kappa;
  curve.gamma = gamma.value_or(r.min_entry());
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(L.dim());

  for (std::size_t ti = 0; ti < T_grid.size(); ++ti) {
    const double T = T_grid[ti];
    const double cap_radius = kappa * std::pow(T, curve.gamma);
    const double radius = std::min(cap_radius, region_radius);
    const FlowParams fp{r, s, std::log(T)};
    const Eigen::VectorXd diag = flow_diagonal(fp);
    const std::uint64_t row_seed = derived_seed(seed, kRowStreamBase + ti);

    CuspRow row;
    row.T = T;
    row.radius_cap = cap_radius;
    try {
      row.estimate =
          rotation_average(L.dim(), samples, row_seed, threads, [&](const Rotation& k) {
            return count_points(
                flowed_rotated_basis(diag, k, L), origin, radius,
                [&](const Eigen::VectorXd& x) { return unit.contains(x); },
                options);
          });
    } catch (const ResourceError& err) {
      curve.truncated = true;
      curve.truncation_error = err.what();
      return curve;
    }
    curve.rows.push_back(std::move(row));
  }
  return curve;
}

bool cusp_growth_pass(const std::vector<CuspRow>& rows, double growth_factor) {
  if (rows.size() < 2) return false;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].estimate.mean > rows[i - 1].estimate.mean)) return false;
  return rows.back().estimate.mean >=
         growth_factor * rows.front().estimate.mean;
}

bool cusp_stabilize_pass(const std::vector<CuspRow>& rows) {
  if (rows.size() < 2) return false;
  const AverageEstimate& last = rows[rows.size() - 1].estimate;
  const AverageEstimate& prev = rows[rows.size() - 2].estimate;
  const double combined = std::sqrt(last.std_error * last.std_error +
                                    prev.std_error * prev.std_error);
  return std::abs(last.mean - prev.mean) <= 4.0 * combined;
}

std::vector<LimitRow> average_limit_experiment(
    const LatticeBasis& L, const BallSpec& ball, const ProbabilityVector& r,
    const ProbabilityVector& s, const std::vector<double>& t_grid,
    long long samples, std::uint64_t seed, int threads,
    const EnumerationOptions& options) {
  std::vector<LimitRow> rows;
  for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
    const FlowParams fp{r, s, t_grid[ti]};
    LimitRow row;
    row.t = t_grid[ti];
    row.estimate = flowed_ball_average_mc(
        L, ball, fp, samples, derived_seed(seed, kRowStreamBase + ti), threads,
        options);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace latlab
