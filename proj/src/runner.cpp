#include "latlab/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>

#include <json.hpp>

#include "latlab/diophantine.hpp"
#include "latlab/errors.hpp"
#include "latlab/io.hpp"
#include "latlab/rng.hpp"
#include "latlab/siegel.hpp"

namespace latlab {
namespace {

constexpr std::uint64_t kTargetVolumeStream = 0xC1;

ProbabilityVector weights_or_uniform(const std::vector<double>& given, int len) {
  if (given.empty()) return ProbabilityVector::uniform(len);
  return ProbabilityVector(given);
}

Eigen::VectorXd to_vector(const std::vector<double>& values) {
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

LatticeBasis build_lattice(const ExperimentConfig& cfg) {
  const int d = cfg.m + cfg.n;
  if (cfg.lattice == "identity" || cfg.lattice.empty())
    return LatticeBasis::identity(d);
  if (cfg.lattice == "alpha-file") {
    const Eigen::MatrixXd alpha = read_matrix(cfg.alpha_file);
    if (alpha.rows() != cfg.m || alpha.cols() != cfg.n)
      throw ParseError("alpha_file: expected an m x n matrix");
    return LatticeBasis::from_alpha(alpha);
  }
  const Eigen::MatrixXd basis = read_matrix(cfg.basis_file);
  if (basis.rows() != d || basis.cols() != d)
    throw ParseError("basis_file: expected a d x d matrix with d = m + n");
  return LatticeBasis(basis);
}

DirectionSet build_direction(const ExperimentConfig& cfg) {
  if (cfg.direction == "full-sphere") return DirectionSet::full_sphere(cfg.m);
  if (cfg.direction == "cap")
    return DirectionSet::cap(to_vector(cfg.cap_center), cfg.cap_radius);
  if (cfg.direction == "cap-in-admissible")
    return DirectionSet::cap_in_admissible(to_vector(cfg.cap_center),
                                           cfg.cap_radius, cfg.delta);
  return DirectionSet::admissible_complement(cfg.m, cfg.delta);
}

Eigen::MatrixXd alpha_from_config(const ExperimentConfig& cfg) {
  if (!cfg.alpha.empty()) {
    Eigen::MatrixXd alpha(cfg.m, cfg.n);
    for (int i = 0; i < cfg.m; ++i)
      for (int j = 0; j < cfg.n; ++j)
        alpha(i, j) = cfg.alpha[static_cast<std::size_t>(i * cfg.n + j)];
    return alpha;
  }
  const Eigen::MatrixXd alpha = read_matrix(cfg.alpha_file);
  if (alpha.rows() != cfg.m || alpha.cols() != cfg.n)
    throw ParseError("alpha_file: expected an m x n matrix");
  return alpha;
}

struct ExperimentOutput {
  CsvWriter csv{std::vector<std::string>{}};
  bool pass = true;
  bool resource_truncated = false;
};

ExperimentOutput run_ratio(const ExperimentConfig& cfg) {
  const ProbabilityVector r = weights_or_uniform(cfg.r, cfg.m);
  const ProbabilityVector s = weights_or_uniform(cfg.s, cfg.n);
  const bool weighted = cfg.experiment == "ratio-weighted";
  const RegionSpec base(weighted ? RegionFamily::weighted : RegionFamily::multiplicative,
                        cfg.m, cfg.n, r, s, cfg.epsilon, 1.0, std::nullopt);
  const LatticeBasis lattice = build_lattice(cfg);
  const DirectionSet a = build_direction(cfg);
  std::optional<double> delta;
  if (!weighted) delta = cfg.delta;

  const RatioCurve curve =
      ratio_experiment(lattice, base, a, cfg.T_grid, cfg.samples,
                       cfg.volume_samples, cfg.seed, cfg.threads, delta);

  ExperimentOutput out;
  out.csv = CsvWriter({"T", "numerator_mean", "numerator_se",
                       "denominator_mean", "denominator_se", "ratio",
                       "target_ratio", "samples", "seed"});
  for (const RatioRow& row : curve.rows) {
    out.csv.add_row({format_double(row.T), format_double(row.numerator.mean),
                     format_double(row.numerator.std_error),
                     format_double(row.denominator.mean),
                     format_double(row.denominator.std_error),
                     row.degenerate ? "" : format_double(row.ratio),
                     format_double(curve.target_ratio),
                     std::to_string(cfg.samples), std::to_string(cfg.seed)});
  }

  const RatioRow& last = curve.rows.back();
  if (last.degenerate || !std::isfinite(curve.target_ratio)) {
    out.pass = false;
  } else {
    const double tolerance = std::max(
        0.10 * std::abs(curve.target_ratio),
        4.0 * std::sqrt(last.ratio_se * last.ratio_se +
                        curve.target_se * curve.target_se));
    out.pass = std::abs(last.ratio - curve.target_ratio) <= tolerance;
  }
  return out;
}

ExperimentOutput run_avg_limit(const ExperimentConfig& cfg) {
  const ProbabilityVector r = weights_or_uniform(cfg.r, cfg.m);
  const ProbabilityVector s = weights_or_uniform(cfg.s, cfg.n);
  const LatticeBasis lattice = build_lattice(cfg);
  const BallSpec ball{to_vector(cfg.ball_center), cfg.ball_radius, true};

  const AverageEstimate volume = ball_volume_mc(
      ball, cfg.volume_samples,
      RandomStream::substream(cfg.seed, kTargetVolumeStream).next_u64(),
      cfg.threads);
  const std::vector<LimitRow> rows = average_limit_experiment(
      lattice, ball, r, s, cfg.t_grid, cfg.samples, cfg.seed, cfg.threads);

  ExperimentOutput out;
  out.csv = CsvWriter({"t", "mean", "se", "target_volume", "target_se",
                       "samples", "seed"});
  for (const LimitRow& row : rows) {
    out.csv.add_row({format_double(row.t), format_double(row.estimate.mean),
                     format_double(row.estimate.std_error),
                     format_double(volume.mean), format_double(volume.std_error),
                     std::to_string(cfg.samples), std::to_string(cfg.seed)});
  }

  const AverageEstimate& first = rows.front().estimate;
  const AverageEstimate& final = rows.back().estimate;
  const double dev_final = std::abs(final.mean - volume.mean);
  const double dev_first = std::abs(first.mean - volume.mean);
  const double se_final = std::sqrt(final.std_error * final.std_error +
                                    volume.std_error * volume.std_error);
  const double se_pair = std::sqrt(first.std_error * first.std_error +
                                   final.std_error * final.std_error +
                                   volume.std_error * volume.std_error);
  out.pass = dev_final <= std::max(0.15 * volume.mean, 4.0 * se_final) &&
             dev_final <= dev_first + 4.0 * se_pair;
  return out;
}

ExperimentOutput run_cusp(const ExperimentConfig& cfg) {
  const ProbabilityVector r = weights_or_uniform(cfg.r, cfg.m);
  const ProbabilityVector s = weights_or_uniform(cfg.s, cfg.n);
  const LatticeBasis lattice = build_lattice(cfg);
  const DirectionSet cap =
      DirectionSet::cap(to_vector(cfg.cap_center), cfg.cap_radius);
  std::optional<double> gamma;
  if (cfg.cap_gamma > 0.0) gamma = cfg.cap_gamma;

  const CuspCurve curve = cusp_divergence_experiment(
      lattice, cap, cfg.epsilon, cfg.T_grid, cfg.samples, cfg.seed, r, s,
      cfg.threads, cfg.cap_kappa, gamma);

  ExperimentOutput out;
  out.csv = CsvWriter({"T", "mean", "se", "radius_cap", "samples", "seed"});
  for (const CuspRow& row : curve.rows) {
    out.csv.add_row({format_double(row.T), format_double(row.estimate.mean),
                     format_double(row.estimate.std_error),
                     format_double(row.radius_cap), std::to_string(cfg.samples),
                     std::to_string(cfg.seed)});
  }

  out.resource_truncated = curve.truncated;
  const double factor = cfg.growth_factor > 0.0 ? cfg.growth_factor : 3.0;
  if (curve.truncated) {
    out.pass = false;
  } else if (cfg.expect == "grow") {
    out.pass = cusp_growth_pass(curve.rows, factor);
  } else if (cfg.expect == "stabilize") {
    out.pass = cusp_stabilize_pass(curve.rows);
  }
  return out;
}

ExperimentOutput run_cone_volume(const ExperimentConfig& cfg) {
  const DirectionSet cap =
      DirectionSet::cap(to_vector(cfg.cap_center), cfg.cap_radius);

  ExperimentOutput out;
  out.csv = CsvWriter({"tau", "mean", "se", "samples", "seed"});
  std::vector<AverageEstimate> estimates;
  for (std::size_t i = 0; i < cfg.tau_grid.size(); ++i) {
    const AverageEstimate e = truncated_cone_volume(
        cap, cfg.tau_grid[i], cfg.samples,
        RandomStream::substream(cfg.seed, i).next_u64(), cfg.threads);
    out.csv.add_row({format_double(cfg.tau_grid[i]), format_double(e.mean),
                     format_double(e.std_error), std::to_string(cfg.samples),
                     std::to_string(cfg.seed)});
    estimates.push_back(e);
  }

  const double factor = cfg.growth_factor > 0.0 ? cfg.growth_factor : 2.0;
  if (cfg.expect == "grow") {
    out.pass = estimates.size() >= 2;
    for (std::size_t i = 1; i < estimates.size(); ++i)
      if (!(estimates[i].mean > estimates[i - 1].mean)) out.pass = false;
    if (out.pass)
      out.pass = estimates.back().mean >= factor * estimates.front().mean;
  } else if (cfg.expect == "stabilize") {
    if (estimates.size() < 2) {
      out.pass = false;
    } else {
      const AverageEstimate& last = estimates[estimates.size() - 1];
      const AverageEstimate& prev = estimates[estimates.size() - 2];
      const double combined = std::sqrt(last.std_error * last.std_error +
                                        prev.std_error * prev.std_error);
      out.pass = std::abs(last.mean - prev.mean) <= 4.0 * combined;
    }
  }
  return out;
}

ExperimentOutput run_approximates(const ExperimentConfig& cfg) {
  const Eigen::MatrixXd alpha = alpha_from_config(cfg);

  std::vector<std::string> header;
  for (int j = 0; j < cfg.n; ++j) header.push_back("q_" + std::to_string(j + 1));
  for (int i = 0; i < cfg.m; ++i) header.push_back("p_" + std::to_string(i + 1));
  for (int i = 0; i < cfg.m; ++i) header.push_back("err_" + std::to_string(i + 1));
  header.push_back("height");

  ExperimentOutput out;
  out.csv = CsvWriter(header);
  auto add_pair = [&](const ApproximatePair& pair) {
    std::vector<std::string> cells;
    for (int j = 0; j < cfg.n; ++j) cells.push_back(std::to_string(pair.q[j]));
    for (int i = 0; i < cfg.m; ++i) cells.push_back(std::to_string(pair.p[i]));
    for (int i = 0; i < cfg.m; ++i) cells.push_back(format_double(pair.errors[i]));
    cells.push_back(format_double(pair.height));
    out.csv.add_row(std::move(cells));
  };

  constexpr double kSlack = 1e-12;
  if (cfg.mode == "dirichlet") {
    const ApproximatePair pair = dirichlet_solve(alpha, cfg.Q);
    add_pair(pair);
    const double bound = std::pow(cfg.Q, -static_cast<double>(cfg.n) / cfg.m);
    out.pass = pair.height >= 1.0 && pair.height <= cfg.Q &&
               pair.errors.cwiseAbs().maxCoeff() <= bound + kSlack;
  } else if (cfg.mode == "multiplicative") {
    const ApproximatePair pair = multiplicative_solve(alpha, cfg.Q);
    add_pair(pair);
    double err_prod = 1.0, height_prod = 1.0;
    for (int i = 0; i < cfg.m; ++i) err_prod *= std::abs(pair.errors[i]);
    for (int j = 0; j < cfg.n; ++j)
      height_prod *= std::max(1.0, std::abs(static_cast<double>(pair.q[j])));
    out.pass = pair.height <= cfg.Q + kSlack &&
               err_prod <= std::pow(cfg.Q, -cfg.n) + kSlack &&
               err_prod <= 1.0 / height_prod + kSlack;
  } else {
    const ProbabilityVector r(cfg.r);
    const ProbabilityVector s(cfg.s);
    const auto pairs = weighted_solutions(alpha, r, s, cfg.height_bound);
    for (const ApproximatePair& pair : pairs) {
      add_pair(pair);
      if (!(weighted_quasinorm(pair.errors, r) <=
            1.0 / weighted_quasinorm(pair.q.cast<double>(), s) + kSlack))
        out.pass = false;
    }
  }
  return out;
}

ExperimentOutput run_enumerate(const ExperimentConfig& cfg) {
  const LatticeBasis lattice = build_lattice(cfg);
  const int d = lattice.dim();

  std::vector<std::string> header;
  for (int i = 0; i < d; ++i) header.push_back("coeff_" + std::to_string(i + 1));
  for (int i = 0; i < d; ++i) header.push_back("coord_" + std::to_string(i + 1));

  ExperimentOutput out;
  out.csv = CsvWriter(header);
  for (const LatticePoint& p : enumerate_in_ball(lattice, cfg.radius)) {
    std::vector<std::string> cells;
    for (int i = 0; i < d; ++i) cells.push_back(std::to_string(p.coeffs[i]));
    for (int i = 0; i < d; ++i) cells.push_back(format_double(p.coords[i]));
    out.csv.add_row(std::move(cells));
  }
  return out;
}

}  // namespace

RunResult run(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(cfg.out_dir);

  ExperimentOutput output;
  if (cfg.experiment == "ratio-weighted" ||
      cfg.experiment == "ratio-multiplicative")
    output = run_ratio(cfg);
  else if (cfg.experiment == "avg-limit")
    output = run_avg_limit(cfg);
  else if (cfg.experiment == "cusp")
    output = run_cusp(cfg);
  else if (cfg.experiment == "cone-volume")
    output = run_cone_volume(cfg);
  else if (cfg.experiment == "approximates")
    output = run_approximates(cfg);
  else if (cfg.experiment == "enumerate")
    output = run_enumerate(cfg);
  else
    throw ParseError("unknown experiment '" + cfg.experiment + "'");

  const std::string csv_path =
      (std::filesystem::path(cfg.out_dir) / (cfg.experiment + ".csv")).string();
  output.csv.write(csv_path);

  const double wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  nlohmann::json summary = {
      {"experiment", cfg.experiment}, {"pass", output.pass},
      {"rows", output.csv.rows()},    {"seed", cfg.seed},
      {"wall_seconds", wall_seconds},
  };
  const std::string summary_path =
      (std::filesystem::path(cfg.out_dir) / "summary.json").string();
  write_text_file(summary_path, summary.dump(2) + "\n");

  nlohmann::json manifest = {
      {"experiment", cfg.experiment},
      {"version", kVersion},
      {"config", serialize_config(cfg)},
      {"outputs", {csv_path, summary_path}},
      {"wall_seconds", wall_seconds},
  };
  if (output.resource_truncated)
    manifest["note"] = "resource cap hit; CSV holds partial results";
  const std::string manifest_path =
      (std::filesystem::path(cfg.out_dir) / "manifest.json").string();
  write_text_file(manifest_path, manifest.dump(2) + "\n");

  RunResult result;
  result.rows = output.csv.rows();
  result.outputs = {csv_path, summary_path, manifest_path};
  result.pass = output.pass;
  result.exit_code = output.resource_truncated ? 1 : (output.pass ? 0 : 2);
  return result;
}

}  // namespace latlab
