// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails.  Tolerances are fixed here, in code.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "latlab/config.hpp"
#include "latlab/diophantine.hpp"
#include "latlab/io.hpp"
#include "latlab/runner.hpp"
#include "latlab/siegel.hpp"
#include "oracles.hpp"

using namespace latlab;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

double combined_se(const AverageEstimate& a, const AverageEstimate& b) {
  return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

constexpr long long kRotationSamples = 20000;
constexpr long long kVolumeSamples = 4000000;
const double kInvSqrt2 = std::sqrt(0.5);

Eigen::MatrixXd acceptance_alpha() {
  RandomStream rng(4242);
  Eigen::MatrixXd alpha(2, 1);
  alpha << rng.next_unit(), rng.next_unit();
  return alpha;
}

// ---------------------------------------------------------------------------
// 1. equidistribution limit: averaged ball counts approach the ball volume

bool criterion_equidistribution(std::ostringstream& log) {
  const LatticeBasis z3 = LatticeBasis::identity(3);
  const ProbabilityVector r = ProbabilityVector::uniform(2);
  const ProbabilityVector s = ProbabilityVector::uniform(1);
  const double radius = std::cbrt(3.0 * 2.0 / (4.0 * M_PI));  // volume ~ 2
  const BallSpec ball{vec({1.0, 1.25, 1.5}), radius, true};

  const AverageEstimate volume = ball_volume_mc(ball, 2000000, 901);
  const auto rows = average_limit_experiment(z3, ball, r, s, {2.0, 4.0, 6.0},
                                             kRotationSamples, 902);

  const AverageEstimate& at2 = rows[0].estimate;
  const AverageEstimate& at6 = rows[2].estimate;
  const double dev2 = std::abs(at2.mean - volume.mean);
  const double dev6 = std::abs(at6.mean - volume.mean);
  const double tolerance =
      std::max(0.15 * volume.mean, 4.0 * combined_se(at6, volume));
  const double drift_tolerance =
      4.0 * std::sqrt(at2.std_error * at2.std_error +
                      at6.std_error * at6.std_error +
                      volume.std_error * volume.std_error);

  log << "vol=" << volume.mean << " avg(t=2)=" << at2.mean
      << " avg(t=4)=" << rows[1].estimate.mean << " avg(t=6)=" << at6.mean
      << " dev6=" << dev6 << " tol=" << tolerance;
  return dev6 <= tolerance && dev6 <= dev2 + drift_tolerance;
}

// ---------------------------------------------------------------------------
// 2/3. ratio experiments against the volume-ratio target

bool ratio_case(const RegionSpec& base, const LatticeBasis& lattice,
                std::optional<double> delta, std::uint64_t seed,
                const char* tag, std::ostringstream& log) {
  const DirectionSet cap = DirectionSet::cap(vec({kInvSqrt2, kInvSqrt2}), 0.5);
  const std::vector<double> grid = {std::exp(2.0), std::exp(4.0), std::exp(6.0)};
  const RatioCurve curve = ratio_experiment(lattice, base, cap, grid,
                                            kRotationSamples, kVolumeSamples,
                                            seed, 1, delta);
  const RatioRow& last = curve.rows.back();
  if (last.degenerate) {
    log << " [" << tag << ": degenerate denominator]";
    return false;
  }
  const double tolerance =
      std::max(0.10 * std::abs(curve.target_ratio),
               4.0 * std::sqrt(last.ratio_se * last.ratio_se +
                               curve.target_se * curve.target_se));
  log << " [" << tag << ": ratio=" << last.ratio
      << " target=" << curve.target_ratio << " tol=" << tolerance << "]";
  return std::abs(last.ratio - curve.target_ratio) <= tolerance;
}

bool criterion_weighted_ratio(std::ostringstream& log) {
  const RegionSpec base(RegionFamily::weighted, 2, 1,
                        ProbabilityVector({0.7, 0.3}),
                        ProbabilityVector::uniform(1), 0.5, 1.0, std::nullopt);
  const bool a = ratio_case(base, LatticeBasis::identity(3), std::nullopt, 910,
                            "Z3", log);
  const bool b = ratio_case(base, LatticeBasis::from_alpha(acceptance_alpha()),
                            std::nullopt, 911, "alpha", log);
  return a && b;
}

bool criterion_multiplicative_ratio(std::ostringstream& log) {
  const RegionSpec base(RegionFamily::multiplicative, 2, 1,
                        ProbabilityVector({0.7, 0.3}),
                        ProbabilityVector::uniform(1), 0.5, 1.0, std::nullopt);
  const bool a =
      ratio_case(base, LatticeBasis::identity(3), 0.2, 920, "Z3", log);
  const bool b = ratio_case(base, LatticeBasis::from_alpha(acceptance_alpha()),
                            0.2, 921, "alpha", log);
  return a && b;
}

// ---------------------------------------------------------------------------
// 4. cusp divergence with a stabilizing control cap

bool criterion_cusp(std::ostringstream& log) {
  const LatticeBasis z3 = LatticeBasis::identity(3);
  const ProbabilityVector r = ProbabilityVector::uniform(2);
  const ProbabilityVector s = ProbabilityVector::uniform(1);
  const std::vector<double> grid = {std::exp(2.0), std::exp(4.0), std::exp(6.0)};

  const CuspCurve main = cusp_divergence_experiment(
      z3, DirectionSet::cap(vec({0.0, 1.0}), 0.3), 0.5, grid, 4000, 930, r, s);
  const CuspCurve control = cusp_divergence_experiment(
      z3, DirectionSet::cap(vec({kInvSqrt2, kInvSqrt2}), 0.3), 0.5, grid, 4000,
      931, r, s);

  log << "main=(";
  for (const auto& row : main.rows) log << " " << row.estimate.mean;
  log << " ) control=(";
  for (const auto& row : control.rows) log << " " << row.estimate.mean;
  log << " )";
  return !main.truncated && !control.truncated &&
         cusp_growth_pass(main.rows, 3.0) && cusp_stabilize_pass(control.rows);
}

// ---------------------------------------------------------------------------
// 5. truncated cone volumes: divergent cusp cap, convergent control cap

bool criterion_cone_volume(std::ostringstream& log) {
  const DirectionSet cusp_cap = DirectionSet::cap(vec({0.0, 1.0}), 0.3);
  const DirectionSet safe_cap = DirectionSet::cap(vec({kInvSqrt2, kInvSqrt2}), 0.3);

  std::vector<AverageEstimate> grow, tame;
  for (double tau : {4.0, 8.0, 16.0}) {
    grow.push_back(truncated_cone_volume(cusp_cap, tau, kVolumeSamples, 940));
    tame.push_back(truncated_cone_volume(safe_cap, tau, kVolumeSamples, 941));
  }

  log << "cusp=(" << grow[0].mean << " " << grow[1].mean << " " << grow[2].mean
      << ") control=(" << tame[0].mean << " " << tame[1].mean << " "
      << tame[2].mean << ")";
  const bool growing = grow[0].mean < grow[1].mean &&
                       grow[1].mean < grow[2].mean &&
                       grow[2].mean >= 2.0 * grow[0].mean;
  const bool settled =
      std::abs(tame[2].mean - tame[1].mean) <= 4.0 * combined_se(tame[2], tame[1]);
  return growing && settled;
}

// ---------------------------------------------------------------------------
// 6. closed-form anchors: 2^m slices and the 4 ln 2 volume

bool criterion_anchors(std::ostringstream& log) {
  bool pass = true;
  for (int m = 1; m <= 3; ++m) {
    const AverageEstimate slice =
        slice_volume_mc(ProbabilityVector::uniform(m), 2000000, 950 + m);
    const double target = reference_slice_volume(m);
    log << " slice(m=" << m << ")=" << slice.mean;
    if (std::abs(slice.mean - target) > 4.0 * slice.std_error) pass = false;
  }

  const RegionSpec line(RegionFamily::weighted, 1, 1,
                        ProbabilityVector::uniform(1),
                        ProbabilityVector::uniform(1), 0.5, 1.0, std::nullopt);
  const AverageEstimate vol = volume_mc(line, 2000000, 954);
  const double target = 4.0 * std::log(2.0);
  log << " band=" << vol.mean << " (4ln2=" << target << ")";
  if (std::abs(vol.mean - target) > 4.0 * vol.std_error) pass = false;
  return pass;
}

// ---------------------------------------------------------------------------
// 7. oracle equivalences

bool criterion_oracles(std::ostringstream& log) {
  bool pass = true;

  // (a) sphere enumeration equals the brute-force coefficient scan
  RandomStream gen(960);
  int enum_ok = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const LatticeBasis L(testing::random_unimodular(3, gen));
    const double radius = gen.next_uniform(1.0, 4.0);
    if (testing::sorted_coeffs(enumerate_in_ball(L, radius)) ==
        testing::sorted_coeffs(
            testing::brute_force_ball(L, Eigen::VectorXd::Zero(3), radius)))
      ++enum_ok;
  }
  log << "enum=" << enum_ok << "/25";
  if (enum_ok != 25) pass = false;

  // (b) the two spherical-average estimators agree
  RandomStream cases(961);
  int agree = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const LatticeBasis L(testing::random_unimodular(3, cases));
    const ProbabilityVector r = testing::random_weights(2, cases);
    const ProbabilityVector s = ProbabilityVector::uniform(1);
    const double eps = cases.next_uniform(0.4, 0.7);
    const double T = cases.next_uniform(1.5, 5.0);
    std::optional<DirectionSet> dir;
    if (trial % 3 == 2) dir = DirectionSet::admissible_complement(2, 0.25);
    const RegionSpec spec(trial % 3 == 2 ? RegionFamily::multiplicative
                                         : RegionFamily::weighted,
                          2, 1, r, s, eps, T, dir);

    const AverageEstimate mc =
        spherical_average_mc(L, spec, 4000, 962 + 2 * trial);
    const AverageEstimate shell =
        spherical_average_shellsum(L, spec, 600, 963 + 2 * trial);
    if (std::abs(mc.mean - shell.mean) <= 4.0 * combined_se(mc, shell)) ++agree;
  }
  log << " estimators=" << agree << "/10";
  if (agree != 10) pass = false;

  // (c) integer count identity between the T frame and the unit frame
  const Eigen::MatrixXd alpha = acceptance_alpha();
  const LatticeBasis dirichlet = LatticeBasis::from_alpha(alpha);
  const RegionSpec weighted(RegionFamily::weighted, 2, 1,
                            ProbabilityVector({0.7, 0.3}),
                            ProbabilityVector::uniform(1), 0.5, std::exp(2.0),
                            DirectionSet::cap(vec({kInvSqrt2, kInvSqrt2}), 0.6));
  const RegionSpec multiplicative = RegionSpec::multiplicative(
      2, 1, 0.5, std::exp(2.0), DirectionSet::admissible_complement(2, 0.2));

  const LatticeBasis z3 = LatticeBasis::identity(3);
  int identity_ok = 0;
  RandomStream spins(964);
  for (int i = 0; i < 1000; ++i) {
    const bool use_weighted = i % 2 == 0;
    const RegionSpec& spec = use_weighted ? weighted : multiplicative;
    const LatticeBasis& L = use_weighted ? dirichlet : z3;
    const Rotation k = haar_rotation(3, spins);

    const long long direct = count_in_region(L, spec, k);
    const Eigen::VectorXd diag =
        flow_diagonal({spec.r(), spec.s(), std::log(spec.T())});
    const LatticeBasis flowed(diag.asDiagonal() * (k.matrix() * L.matrix()));
    const long long via_flow =
        count_in_region(flowed, spec.with_T(1.0), Rotation::identity(3));
    if (direct == via_flow) ++identity_ok;
  }
  log << " frame-identity=" << identity_ok << "/1000";
  if (identity_ok != 1000) pass = false;

  return pass;
}

// ---------------------------------------------------------------------------
// 8. executable approximation theorems

bool criterion_diophantine(std::ostringstream& log) {
  bool pass = true;
  constexpr double kSlack = 1e-12;

  RandomStream gen(970);
  int dirichlet_ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + static_cast<int>(gen.next_u64() % 2);
    const int n = 1 + static_cast<int>(gen.next_u64() % 2);
    Eigen::MatrixXd alpha(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) alpha(i, j) = gen.next_unit();
    const double Q = gen.next_uniform(1.5, 20.0);
    try {
      const ApproximatePair pair = dirichlet_solve(alpha, Q);
      const double err =
          (alpha * pair.q.cast<double>() - pair.p.cast<double>())
              .cwiseAbs()
              .maxCoeff();
      const double height = pair.q.cast<double>().cwiseAbs().maxCoeff();
      if (height >= 1.0 && height <= Q &&
          err <= std::pow(Q, -static_cast<double>(n) / m) + kSlack)
        ++dirichlet_ok;
    } catch (...) {
    }
  }
  log << "dirichlet=" << dirichlet_ok << "/100";
  if (dirichlet_ok != 100) pass = false;

  RandomStream mgen(971);
  int mult_ok = 0;
  const int mult_total = 30;
  for (int trial = 0; trial < mult_total; ++trial) {
    const int m = 1 + static_cast<int>(mgen.next_u64() % 2);
    const int n = trial < 24 ? 1 : 2;
    Eigen::MatrixXd alpha(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) alpha(i, j) = mgen.next_unit();
    const double Q = n == 1 ? mgen.next_uniform(1.5, 20.0)
                            : mgen.next_uniform(1.5, 5.0);
    const ApproximatePair pair = multiplicative_solve(alpha, Q);

    double height_prod = 1.0;
    for (int j = 0; j < n; ++j)
      height_prod *= std::max(1.0, std::abs(static_cast<double>(pair.q[j])));
    double err_prod = 1.0;
    for (int i = 0; i < m; ++i) err_prod *= std::abs(pair.errors[i]);
    if (std::pow(height_prod, 1.0 / n) <= Q + kSlack &&
        std::pow(err_prod, 1.0 / m) <=
            std::pow(Q, -static_cast<double>(n) / m) + kSlack &&
        err_prod <= 1.0 / height_prod + kSlack)
      ++mult_ok;
  }
  log << " multiplicative=" << mult_ok << "/" << mult_total;
  if (mult_ok != mult_total) pass = false;

  RandomStream wgen(972);
  int weighted_ok = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const int m = 1 + static_cast<int>(wgen.next_u64() % 2);
    const int n = 1 + static_cast<int>(wgen.next_u64() % 2);
    Eigen::MatrixXd alpha(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) alpha(i, j) = wgen.next_unit();
    const ProbabilityVector r = testing::random_weights(m, wgen);
    const ProbabilityVector s = testing::random_weights(n, wgen);
    const double bound = wgen.next_uniform(2.0, 5.0);

    std::set<std::vector<long long>> from_solver;
    for (const auto& pair : weighted_solutions(alpha, r, s, bound)) {
      std::vector<long long> key;
      for (int j = 0; j < n; ++j) key.push_back(pair.q[j]);
      for (int i = 0; i < m; ++i) key.push_back(pair.p[i]);
      from_solver.insert(std::move(key));
    }

    const LatticeBasis L = LatticeBasis::from_alpha(alpha);
    double reach_sq = static_cast<double>(m);
    for (int j = 0; j < n; ++j)
      reach_sq += std::pow(std::pow(bound, s[j]), 2.0);
    std::set<std::vector<long long>> from_lattice;
    for (const LatticePoint& point :
         enumerate_in_ball(L, std::sqrt(reach_sq) + 1e-6)) {
      Eigen::VectorXd q(n);
      for (int j = 0; j < n; ++j)
        q[j] = static_cast<double>(point.coeffs[m + j]);
      if (q.isZero()) continue;
      const double height = weighted_quasinorm(q, s);
      if (height > bound) continue;
      if (weighted_quasinorm(point.coords.head(m), r) > 1.0 / height) continue;
      std::vector<long long> key;
      for (int j = 0; j < n; ++j) key.push_back(point.coeffs[m + j]);
      for (int i = 0; i < m; ++i) key.push_back(-point.coeffs[i]);
      from_lattice.insert(std::move(key));
    }
    if (from_solver == from_lattice && !from_solver.empty()) ++weighted_ok;
  }
  log << " weighted-sets=" << weighted_ok << "/25";
  if (weighted_ok != 25) pass = false;

  return pass;
}

// ---------------------------------------------------------------------------
// 9. byte-identical CSVs across reruns and thread counts

std::string run_to_temp(ExperimentConfig cfg, const std::string& tag,
                        int threads) {
  const auto dir =
      std::filesystem::temp_directory_path() / ("latlab_acceptance_" + tag);
  std::filesystem::remove_all(dir);
  cfg.out_dir = dir.string();
  cfg.threads = threads;
  run(cfg);
  return read_text_file((dir / (cfg.experiment + ".csv")).string());
}

bool criterion_determinism(std::ostringstream& log) {
  const std::vector<std::string> configs = {
      R"(
experiment = avg-limit
seed = 13
m = 2
n = 1
r = 0.5 0.5
s = 1
t_grid = 2 3
ball_center = 1.0 1.25 1.5
ball_radius = 0.78
samples = 200
volume_samples = 20000
lattice = identity
)",
      R"(
experiment = ratio-weighted
seed = 14
m = 2
n = 1
r = 0.7 0.3
s = 1
epsilon = 0.5
T_grid = 2.718281828459045 7.38905609893065
direction = cap
cap_center = 0.7071067811865476 0.7071067811865476
cap_radius = 0.5
samples = 200
volume_samples = 20000
lattice = identity
)",
      R"(
experiment = ratio-multiplicative
seed = 15
m = 2
n = 1
epsilon = 0.5
T_grid = 2.718281828459045 7.38905609893065
direction = cap
cap_center = 0.7071067811865476 0.7071067811865476
cap_radius = 0.5
delta = 0.2
samples = 100
volume_samples = 20000
lattice = identity
)",
      R"(
experiment = cusp
seed = 16
m = 2
n = 1
epsilon = 0.5
T_grid = 7.38905609893065 54.598150033144236
cap_center = 0 1
cap_radius = 0.3
samples = 200
lattice = identity
expect = grow
)",
      R"(
experiment = cone-volume
seed = 17
m = 2
cap_center = 0 1
cap_radius = 0.3
tau_grid = 4 8
samples = 50000
expect = grow
)",
      R"(
experiment = approximates
seed = 18
mode = weighted
m = 2
n = 1
alpha = 0.41421356 0.73205080
r = 0.6 0.4
s = 1
height_bound = 5
)",
      R"(
experiment = enumerate
seed = 19
m = 2
n = 1
radius = 2.5
lattice = identity
)",
  };

  bool pass = true;
  for (const std::string& text : configs) {
    const ExperimentConfig cfg = parse_config(text);
    const std::string serial = run_to_temp(cfg, cfg.experiment + "_s", 1);
    const std::string threaded = run_to_temp(cfg, cfg.experiment + "_t", 4);
    const std::string replay = run_to_temp(cfg, cfg.experiment + "_r", 1);
    const bool same = serial == threaded && serial == replay;
    log << " " << cfg.experiment << (same ? "=ok" : "=MISMATCH");
    if (!same) pass = false;
  }
  return pass;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<bool(std::ostringstream&)> check;
  };
  const std::vector<Criterion> criteria = {
      {"1 equidistribution limit", criterion_equidistribution},
      {"2 weighted ratio", criterion_weighted_ratio},
      {"3 multiplicative ratio", criterion_multiplicative_ratio},
      {"4 cusp divergence", criterion_cusp},
      {"5 truncated cone volume", criterion_cone_volume},
      {"6 closed-form anchors", criterion_anchors},
      {"7 oracle equivalences", criterion_oracles},
      {"8 diophantine theorems", criterion_diophantine},
      {"9 replay determinism", criterion_determinism},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    std::ostringstream log;
    bool ok = false;
    try {
      ok = criterion.check(log);
    } catch (const std::exception& e) {
      log << " exception: " << e.what();
    }
    if (!ok) ++failures;
    std::printf("[%s] %s  (%s)\n", ok ? "PASS" : "FAIL", criterion.name,
                log.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
