#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace latlab {

// Flat experiment description parsed from key = value text (or the JSON
// equivalent).  Unknown keys, duplicate keys, missing required keys and
// out-of-range values are all parse errors; every run must name its seed.
struct ExperimentConfig {
  std::string experiment;  // avg-limit | ratio-weighted | ratio-multiplicative
                           // | cusp | cone-volume | approximates | enumerate
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  int threads = 1;

  int m = 0;
  int n = 0;
  std::vector<double> r;  // empty means uniform where a default is allowed
  std::vector<double> s;
  double epsilon = 0.0;

  std::vector<double> T_grid;
  std::vector<double> t_grid;
  std::vector<double> tau_grid;

  std::string direction;  // full-sphere | cap | cap-in-admissible | admissible-complement
  std::vector<double> cap_center;
  double cap_radius = 0.0;
  double delta = 0.0;

  std::vector<double> ball_center;
  double ball_radius = 0.0;

  std::string lattice;  // identity | alpha-file | basis-file
  std::string alpha_file;
  std::string basis_file;

  long long samples = 0;
  long long volume_samples = 0;

  std::string expect;  // grow | stabilize | none
  double growth_factor = 0.0;
  double cap_kappa = 1.0;
  double cap_gamma = -1.0;  // negative means "use min_i r_i"

  std::string mode;  // approximates: dirichlet | multiplicative | weighted
  std::vector<double> alpha;  // inline alpha, row-major, shaped by m x n
  double Q = 0.0;
  double height_bound = 0.0;

  double radius = 0.0;  // enumerate

  bool operator==(const ExperimentConfig&) const = default;
};

// Parses flat key = value text; text whose first non-space byte is '{' is
// treated as the JSON form.  Throws ParseError listing every violation.
ExperimentConfig parse_config(const std::string& text);

// Canonical flat rendering; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace latlab
