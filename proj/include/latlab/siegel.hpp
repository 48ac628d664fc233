#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latlab/dynamics.hpp"
#include "latlab/estimates.hpp"
#include "latlab/lattice.hpp"

namespace latlab {

// Siegel transform of an indicator: #(Lambda \ {0} intersect target).
long long siegel_count(const LatticeBasis& L, const TargetSet& target,
                       const EnumerationOptions& options = {});

// Monte Carlo over Haar rotations k of #{k Lambda intersect region(spec)}.
// Counting happens in the unit-T frame: #{k Lambda ∩ R_(eps,T)} equals the
// number of points of g_(log T) k Lambda in R_(eps,1), which keeps the
// enumeration radius small at large T.
AverageEstimate spherical_average_mc(const LatticeBasis& L,
                                     const RegionSpec& spec, long long samples,
                                     std::uint64_t seed, int threads = 1,
                                     const EnumerationOptions& options = {});

// Monte Carlo over rotations of #{g_t k Lambda intersect ball}.
AverageEstimate flowed_ball_average_mc(const LatticeBasis& L,
                                       const BallSpec& ball,
                                       const FlowParams& fp, long long samples,
                                       std::uint64_t seed, int threads = 1,
                                       const EnumerationOptions& options = {});

// Second, independent route to the same spherical average: enumerate every
// lattice vector that can reach the region under some rotation and sum the
// per-vector hit fractions, errors combined in quadrature.
AverageEstimate spherical_average_shellsum(const LatticeBasis& L,
                                           const RegionSpec& spec,
                                           long long sphere_samples,
                                           std::uint64_t seed, int threads = 1,
                                           const EnumerationOptions& options = {});

// Rejection-sampled volumes over the circumscribing box.
AverageEstimate volume_mc(const RegionSpec& spec, long long samples,
                          std::uint64_t seed, int threads = 1);
AverageEstimate ball_volume_mc(const BallSpec& ball, long long samples,
                               std::uint64_t seed, int threads = 1);

// Volume of { v : ||v||_r <= 1 }; the box is enlarged by 1.5x so the
// uniform-weight case 2^m is a genuine rejection estimate.
AverageEstimate slice_volume_mc(const ProbabilityVector& r, long long samples,
                                std::uint64_t seed, int threads = 1);

// Volume of (cone through the cap) ∩ {prod|v_i| <= 1} ∩ {1 <= ||v|| <= tau};
// the part of the cone nearest the origin is cut off at radius 1, so
// tau <= 1 measures the empty set.
AverageEstimate truncated_cone_volume(const DirectionSet& cap, double tau,
                                      long long samples, std::uint64_t seed,
                                      int threads = 1);

struct RatioRow {
  double T = 0.0;
  AverageEstimate numerator;
  AverageEstimate denominator;
  bool degenerate = false;  // denominator mean - 4 SE <= 0; ratio absent
  double ratio = 0.0;
  double ratio_se = 0.0;
};

struct RatioCurve {
  std::vector<RatioRow> rows;
  AverageEstimate numerator_volume;    // vol of the T=1 numerator region
  AverageEstimate denominator_volume;  // vol of the T=1 denominator region
  double target_ratio = 0.0;
  double target_se = 0.0;
};

// Ratio of spherical averages over a T grid against the volume-ratio target.
// Numerator region carries direction set A; the denominator is the full
// region (weighted family) or the admissible complement with the given
// delta (multiplicative family, where A must keep a margin above delta).
// Numerator and denominator share the rotation samples of each row.
RatioCurve ratio_experiment(const LatticeBasis& L, const RegionSpec& base,
                            const DirectionSet& A,
                            const std::vector<double>& T_grid,
                            long long samples, long long volume_samples,
                            std::uint64_t seed, int threads = 1,
                            std::optional<double> denominator_delta = {},
                            const EnumerationOptions& options = {});

struct CuspRow {
  double T = 0.0;
  AverageEstimate estimate;
  double radius_cap = 0.0;  // unit-T-frame enumeration cap used for this row
};

struct CuspCurve {
  std::vector<CuspRow> rows;
  double kappa = 0.0;
  double gamma = 0.0;
  bool truncated = false;  // resource cap hit; rows hold the partial results
  std::string truncation_error;
};

// Averaged counts in the multiplicative region with direction cap A over a
// T grid.  When A meets a great sphere the region is unbounded, so counts
// are clipped to the unit-T-frame ball of radius kappa * T^gamma (gamma
// defaults to min_i r_i); clipped counts lower-bound the true averages and
// their growth across the grid is the divergence diagnostic.
CuspCurve cusp_divergence_experiment(const LatticeBasis& L,
                                     const DirectionSet& A, double epsilon,
                                     const std::vector<double>& T_grid,
                                     long long samples, std::uint64_t seed,
                                     const ProbabilityVector& r,
                                     const ProbabilityVector& s,
                                     int threads = 1, double kappa = 1.0,
                                     std::optional<double> gamma = {},
                                     const EnumerationOptions& options = {});

// Pass rules for the cusp rows: strict growth with last >= factor * first,
// or stabilization of the last two rows within 4 combined standard errors.
bool cusp_growth_pass(const std::vector<CuspRow>& rows, double growth_factor);
bool cusp_stabilize_pass(const std::vector<CuspRow>& rows);

struct LimitRow {
  double t = 0.0;
  AverageEstimate estimate;
};

// Averaged counts #{g_t k Lambda ∩ ball} along a time grid; they approach
// the ball volume for balls avoiding the coordinate subspaces.
std::vector<LimitRow> average_limit_experiment(
    const LatticeBasis& L, const BallSpec& ball, const ProbabilityVector& r,
    const ProbabilityVector& s, const std::vector<double>& t_grid,
    long long samples, std::uint64_t seed, int threads = 1,
    const EnumerationOptions& options = {});

}  // namespace latlab
