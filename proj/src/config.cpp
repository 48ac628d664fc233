#include "latlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "latlab/errors.hpp"
#include "latlab/io.hpp"

namespace latlab {
namespace {

enum class ValueKind { string, integer, unsigned64, real, real_list };

struct KeySpec {
  ValueKind kind;
};

const std::map<std::string, KeySpec>& key_registry() {
  static const std::map<std::string, KeySpec> registry = {
      {"experiment", {ValueKind::string}},
      {"seed", {ValueKind::unsigned64}},
      {"out_dir", {ValueKind::string}},
      {"threads", {ValueKind::integer}},
      {"m", {ValueKind::integer}},
      {"n", {ValueKind::integer}},
      {"r", {ValueKind::real_list}},
      {"s", {ValueKind::real_list}},
      {"epsilon", {ValueKind::real}},
      {"T_grid", {ValueKind::real_list}},
      {"t_grid", {ValueKind::real_list}},
      {"tau_grid", {ValueKind::real_list}},
      {"direction", {ValueKind::string}},
      {"cap_center", {ValueKind::real_list}},
      {"cap_radius", {ValueKind::real}},
      {"delta", {ValueKind::real}},
      {"ball_center", {ValueKind::real_list}},
      {"ball_radius", {ValueKind::real}},
      {"lattice", {ValueKind::string}},
      {"alpha_file", {ValueKind::string}},
      {"basis_file", {ValueKind::string}},
      {"samples", {ValueKind::integer}},
      {"volume_samples", {ValueKind::integer}},
      {"expect", {ValueKind::string}},
      {"growth_factor", {ValueKind::real}},
      {"cap_kappa", {ValueKind::real}},
      {"cap_gamma", {ValueKind::real}},
      {"mode", {ValueKind::string}},
      {"alpha", {ValueKind::real_list}},
      {"Q", {ValueKind::real}},
      {"height_bound", {ValueKind::real}},
      {"radius", {ValueKind::real}},
  };
  return registry;
}

struct ExperimentKeys {
  std::set<std::string> required;
  std::set<std::string> optional;
};

const std::map<std::string, ExperimentKeys>& experiment_registry() {
  // `experiment` and `seed` are required everywhere; out_dir/threads are
  // always optional.
  static const std::map<std::string, ExperimentKeys> registry = {
      {"avg-limit",
       {{"m", "n", "r", "s", "t_grid", "ball_center", "ball_radius", "samples",
         "volume_samples", "lattice"},
        {"alpha_file", "basis_file"}}},
      {"ratio-weighted",
       {{"m", "n", "r", "s", "epsilon", "T_grid", "direction", "samples",
         "volume_samples", "lattice"},
        {"cap_center", "cap_radius", "delta", "alpha_file", "basis_file"}}},
      {"ratio-multiplicative",
       {{"m", "n", "epsilon", "T_grid", "direction", "delta", "samples",
         "volume_samples", "lattice"},
        {"r", "s", "cap_center", "cap_radius", "alpha_file", "basis_file"}}},
      {"cusp",
       {{"m", "n", "epsilon", "T_grid", "cap_center", "cap_radius", "samples",
         "lattice", "expect"},
        {"r", "s", "cap_kappa", "cap_gamma", "growth_factor", "alpha_file",
         "basis_file"}}},
      {"cone-volume",
       {{"m", "cap_center", "cap_radius", "tau_grid", "samples", "expect"},
        {"growth_factor"}}},
      {"approximates",
       {{"mode", "m", "n"},
        {"alpha", "alpha_file", "Q", "height_bound", "r", "s"}}},
      {"enumerate", {{"m", "n", "radius", "lattice"}, {"alpha_file", "basis_file"}}},
  };
  return registry;
}

class Violations {
 public:
  void add(const std::string& message) { messages_.push_back(message); }
  bool empty() const { return messages_.empty(); }
  [[noreturn]] void raise() const {
    std::string all = "config error";
    for (const auto& msg : messages_) all += "\n  - " + msg;
    throw ParseError(all);
  }

 private:
  std::vector<std::string> messages_;
};

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

bool parse_ll(const std::string& text, long long& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

bool parse_u64(const std::string& text, std::uint64_t& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> parts;
  std::string tok;
  while (in >> tok) parts.push_back(tok);
  return parts;
}

// Raw key/value pairs, whatever the input syntax was.
using RawConfig = std::vector<std::pair<std::string, std::string>>;

RawConfig parse_flat(const std::string& text, Violations& violations) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      violations.add("line " + std::to_string(line_no) +
                     ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      violations.add("line " + std::to_string(line_no) + ": empty key");
      continue;
    }
    raw.emplace_back(key, value);
  }
  return raw;
}

RawConfig parse_json_form(const std::string& text, Violations& violations) {
  RawConfig raw;
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    violations.add(std::string("invalid JSON: ") + e.what());
    return raw;
  }
  if (!parsed.is_object()) {
    violations.add("JSON config must be an object");
    return raw;
  }
  for (const auto& [key, value] : parsed.items()) {
    std::string flat;
    if (value.is_string()) {
      flat = value.get<std::string>();
    } else if (value.is_number_unsigned()) {
      flat = std::to_string(value.get<std::uint64_t>());
    } else if (value.is_number_integer()) {
      flat = std::to_string(value.get<long long>());
    } else if (value.is_number_float()) {
      flat = format_double(value.get<double>());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!item.is_number()) {
          violations.add("key '" + key + "': arrays must hold numbers");
          break;
        }
        if (!joined.empty()) joined += ' ';
        joined += format_double(item.get<double>());
      }
      flat = joined;
    } else {
      violations.add("key '" + key + "': unsupported JSON value");
      continue;
    }
    raw.emplace_back(key, flat);
  }
  return raw;
}

void assign(ExperimentConfig& cfg, const std::string& key,
            const std::string& value, Violations& violations) {
  const auto it = key_registry().find(key);
  const ValueKind kind = it->second.kind;

  auto bad = [&](const std::string& why) {
    violations.add("key '" + key + "': " + why + " (got '" + value + "')");
  };

  double real = 0.0;
  long long integer = 0;
  std::uint64_t u64 = 0;
  std::vector<double> list;
  switch (kind) {
    case ValueKind::string:
      if (value.empty()) return bad("expected a value");
      break;
    case ValueKind::integer:
      if (!parse_ll(value, integer)) return bad("expected an integer");
      break;
    case ValueKind::unsigned64:
      if (!parse_u64(value, u64)) return bad("expected an unsigned integer");
      break;
    case ValueKind::real:
      if (!parse_double(value, real)) return bad("expected a number");
      break;
    case ValueKind::real_list: {
      const auto parts = split_ws(value);
      if (parts.empty()) return bad("expected a list of numbers");
      for (const auto& part : parts) {
        double v;
        if (!parse_double(part, v)) return bad("expected a list of numbers");
        list.push_back(v);
      }
      break;
    }
  }

  if (key == "experiment") cfg.experiment = value;
  else if (key == "seed") cfg.seed = u64;
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "threads") cfg.threads = static_cast<int>(integer);
  else if (key == "m") cfg.m = static_cast<int>(integer);
  else if (key == "n") cfg.n = static_cast<int>(integer);
  else if (key == "r") cfg.r = std::move(list);
  else if (key == "s") cfg.s = std::move(list);
  else if (key == "epsilon") cfg.epsilon = real;
  else if (key == "T_grid") cfg.T_grid = std::move(list);
  else if (key == "t_grid") cfg.t_grid = std::move(list);
  else if (key == "tau_grid") cfg.tau_grid = std::move(list);
  else if (key == "direction") cfg.direction = value;
  else if (key == "cap_center") cfg.cap_center = std::move(list);
  else if (key == "cap_radius") cfg.cap_radius = real;
  else if (key == "delta") cfg.delta = real;
  else if (key == "ball_center") cfg.ball_center = std::move(list);
  else if (key == "ball_radius") cfg.ball_radius = real;
  else if (key == "lattice") cfg.lattice = value;
  else if (key == "alpha_file") cfg.alpha_file = value;
  else if (key == "basis_file") cfg.basis_file = value;
  else if (key == "samples") cfg.samples = integer;
  else if (key == "volume_samples") cfg.volume_samples = integer;
  else if (key == "expect") cfg.expect = value;
  else if (key == "growth_factor") cfg.growth_factor = real;
  else if (key == "cap_kappa") cfg.cap_kappa = real;
  else if (key == "cap_gamma") cfg.cap_gamma = real;
  else if (key == "mode") cfg.mode = value;
  else if (key == "alpha") cfg.alpha = std::move(list);
  else if (key == "Q") cfg.Q = real;
  else if (key == "height_bound") cfg.height_bound = real;
  else if (key == "radius") cfg.radius = real;
}

void check_grid_increasing(const std::vector<double>& grid,
                           const std::string& key, Violations& violations) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) {
      violations.add("key '" + key + "': grid must be strictly increasing");
      return;
    }
}

void validate(const ExperimentConfig& cfg, const std::set<std::string>& present,
              Violations& violations) {
  const auto& experiments = experiment_registry();
  const auto exp_it = experiments.find(cfg.experiment);
  if (cfg.experiment.empty()) {
    violations.add("missing required key 'experiment'");
    return;
  }
  if (exp_it == experiments.end()) {
    violations.add("unknown experiment '" + cfg.experiment + "'");
    return;
  }
  const ExperimentKeys& keys = exp_it->second;

  if (!present.count("seed")) violations.add("missing required key 'seed'");
  for (const auto& key : keys.required)
    if (!present.count(key))
      violations.add("missing required key '" + key + "'");
  for (const auto& key : present) {
    if (key == "experiment" || key == "seed" || key == "out_dir" ||
        key == "threads")
      continue;
    if (!keys.required.count(key) && !keys.optional.count(key))
      violations.add("key '" + key + "' does not apply to experiment '" +
                     cfg.experiment + "'");
  }

  if (present.count("threads") && cfg.threads < 1)
    violations.add("key 'threads': must be >= 1");
  if (present.count("m") && cfg.m < 1) violations.add("key 'm': must be >= 1");
  if (present.count("n") && cfg.n < 1) violations.add("key 'n': must be >= 1");
  if (present.count("epsilon") && !(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0))
    violations.add("key 'epsilon': epsilon ∈ (0,1]");
  if (present.count("samples") && cfg.samples < 2)
    violations.add("key 'samples': must be >= 2");
  if (present.count("volume_samples") && cfg.volume_samples < 2)
    violations.add("key 'volume_samples': must be >= 2");
  if (present.count("cap_radius") && !(cfg.cap_radius > 0.0))
    violations.add("key 'cap_radius': must be > 0");
  if (present.count("ball_radius") && !(cfg.ball_radius > 0.0))
    violations.add("key 'ball_radius': must be > 0");
  if (present.count("delta") && !(cfg.delta > 0.0 && cfg.delta < 1.0))
    violations.add("key 'delta': delta ∈ (0,1)");
  if (present.count("radius") && !(cfg.radius > 0.0))
    violations.add("key 'radius': must be > 0");
  if (present.count("Q") && !(cfg.Q > 1.0))
    violations.add("key 'Q': must be > 1");
  if (present.count("height_bound") && !(cfg.height_bound >= 1.0))
    violations.add("key 'height_bound': must be >= 1");
  if (present.count("cap_kappa") && !(cfg.cap_kappa > 0.0))
    violations.add("key 'cap_kappa': must be > 0");
  if (present.count("cap_gamma") && !(cfg.cap_gamma > 0.0))
    violations.add("key 'cap_gamma': must be > 0");
  if (present.count("growth_factor") && !(cfg.growth_factor > 1.0))
    violations.add("key 'growth_factor': must be > 1");

  check_grid_increasing(cfg.T_grid, "T_grid", violations);
  check_grid_increasing(cfg.t_grid, "t_grid", violations);
  check_grid_increasing(cfg.tau_grid, "tau_grid", violations);
  if (present.count("T_grid") && cfg.T_grid.empty())
    violations.add("key 'T_grid': grid must be nonempty");
  if (present.count("t_grid") && cfg.t_grid.empty())
    violations.add("key 't_grid': grid must be nonempty");
  if (present.count("tau_grid") && cfg.tau_grid.empty())
    violations.add("key 'tau_grid': grid must be nonempty");

  if (present.count("r") && present.count("m") &&
      static_cast<int>(cfg.r.size()) != cfg.m)
    violations.add("key 'r': needs exactly m entries");
  if (present.count("s") && present.count("n") &&
      static_cast<int>(cfg.s.size()) != cfg.n)
    violations.add("key 's': needs exactly n entries");
  if (present.count("cap_center") && present.count("m") &&
      static_cast<int>(cfg.cap_center.size()) != cfg.m)
    violations.add("key 'cap_center': needs exactly m entries");
  if (present.count("ball_center") && present.count("m") &&
      present.count("n") &&
      static_cast<int>(cfg.ball_center.size()) != cfg.m + cfg.n)
    violations.add("key 'ball_center': needs exactly m+n entries");

  if (present.count("direction")) {
    static const std::set<std::string> kinds = {
        "full-sphere", "cap", "cap-in-admissible", "admissible-complement"};
    if (!kinds.count(cfg.direction)) {
      violations.add(
          "key 'direction': one of full-sphere | cap | cap-in-admissible | "
          "admissible-complement");
    } else {
      const bool needs_cap =
          cfg.direction == "cap" || cfg.direction == "cap-in-admissible";
      const bool needs_delta = cfg.direction == "cap-in-admissible" ||
                               cfg.direction == "admissible-complement";
      if (needs_cap && (!present.count("cap_center") || !present.count("cap_radius")))
        violations.add("key 'direction': '" + cfg.direction +
                       "' needs cap_center and cap_radius");
      if (needs_delta && !present.count("delta"))
        violations.add("key 'direction': '" + cfg.direction + "' needs delta");
    }
  }

  if (present.count("lattice")) {
    if (cfg.lattice != "identity" && cfg.lattice != "alpha-file" &&
        cfg.lattice != "basis-file")
      violations.add("key 'lattice': one of identity | alpha-file | basis-file");
    if (cfg.lattice == "alpha-file" && !present.count("alpha_file"))
      violations.add("key 'lattice': alpha-file needs alpha_file");
    if (cfg.lattice == "basis-file" && !present.count("basis_file"))
      violations.add("key 'lattice': basis-file needs basis_file");
  }

  if (present.count("expect") && cfg.expect != "grow" &&
      cfg.expect != "stabilize" && cfg.expect != "none")
    violations.add("key 'expect': one of grow | stabilize | none");

  if (cfg.experiment == "approximates") {
    if (cfg.mode != "dirichlet" && cfg.mode != "multiplicative" &&
        cfg.mode != "weighted") {
      violations.add("key 'mode': one of dirichlet | multiplicative | weighted");
    } else {
      if (!present.count("alpha") && !present.count("alpha_file"))
        violations.add("approximates needs 'alpha' or 'alpha_file'");
      if (present.count("alpha") && present.count("m") && present.count("n") &&
          static_cast<int>(cfg.alpha.size()) != cfg.m * cfg.n)
        violations.add("key 'alpha': needs exactly m*n entries (row-major)");
      if (cfg.mode == "weighted") {
        if (!present.count("height_bound"))
          violations.add("mode 'weighted' needs height_bound");
        if (!present.count("r") || !present.count("s"))
          violations.add("mode 'weighted' needs r and s");
      } else if (!present.count("Q")) {
        violations.add("mode '" + cfg.mode + "' needs Q");
      }
    }
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  Violations violations;
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool json_form = first != std::string::npos && text[first] == '{';
  const RawConfig raw = json_form ? parse_json_form(text, violations)
                                  : parse_flat(text, violations);
  if (!violations.empty()) violations.raise();

  ExperimentConfig cfg;
  std::set<std::string> present;
  for (const auto& [key, value] : raw) {
    if (!key_registry().count(key)) {
      violations.add("unknown key '" + key + "'");
      continue;
    }
    if (!present.insert(key).second) {
      violations.add("duplicate key '" + key + "'");
      continue;
    }
    assign(cfg, key, value, violations);
  }
  if (violations.empty()) validate(cfg, present, violations);
  if (!violations.empty()) violations.raise();
  return cfg;
}

namespace {

void emit(std::ostringstream& out, const std::string& key,
          const std::string& value) {
  out << key << " = " << value << '\n';
}

void emit_list(std::ostringstream& out, const std::string& key,
               const std::vector<double>& values) {
  if (values.empty()) return;
  std::string joined;
  for (double v : values) {
    if (!joined.empty()) joined += ' ';
    joined += format_double(v);
  }
  emit(out, key, joined);
}

}  // namespace

std::string serialize_config(const ExperimentConfig& c) {
  // Only keys that apply to the experiment are emitted, so the echoed text
  // parses back to an identical config.
  const ExperimentKeys& keys = experiment_registry().at(c.experiment);
  auto applies = [&](const std::string& key) {
    return keys.required.count(key) || keys.optional.count(key);
  };
  auto is_set = [&](const std::string& key) -> bool {
    if (key == "m") return c.m != 0;
    if (key == "n") return c.n != 0;
    if (key == "r") return !c.r.empty();
    if (key == "s") return !c.s.empty();
    if (key == "epsilon") return c.epsilon != 0.0;
    if (key == "T_grid") return !c.T_grid.empty();
    if (key == "t_grid") return !c.t_grid.empty();
    if (key == "tau_grid") return !c.tau_grid.empty();
    if (key == "direction") return !c.direction.empty();
    if (key == "cap_center") return !c.cap_center.empty();
    if (key == "cap_radius") return c.cap_radius != 0.0;
    if (key == "delta") return c.delta != 0.0;
    if (key == "ball_center") return !c.ball_center.empty();
    if (key == "ball_radius") return c.ball_radius != 0.0;
    if (key == "lattice") return !c.lattice.empty();
    if (key == "alpha_file") return !c.alpha_file.empty();
    if (key == "basis_file") return !c.basis_file.empty();
    if (key == "samples") return c.samples != 0;
    if (key == "volume_samples") return c.volume_samples != 0;
    if (key == "expect") return !c.expect.empty();
    if (key == "growth_factor") return c.growth_factor != 0.0;
    if (key == "cap_kappa") return c.cap_kappa != 1.0;
    if (key == "cap_gamma") return c.cap_gamma >= 0.0;
    if (key == "mode") return !c.mode.empty();
    if (key == "alpha") return !c.alpha.empty();
    if (key == "Q") return c.Q != 0.0;
    if (key == "height_bound") return c.height_bound != 0.0;
    if (key == "radius") return c.radius != 0.0;
    return false;
  };

  std::ostringstream out;
  emit(out, "experiment", c.experiment);
  emit(out, "seed", std::to_string(c.seed));
  emit(out, "out_dir", c.out_dir);
  emit(out, "threads", std::to_string(c.threads));

  static const std::vector<std::string> order = {
      "m", "n", "r", "s", "epsilon", "T_grid", "t_grid", "tau_grid",
      "direction", "cap_center", "cap_radius", "delta", "ball_center",
      "ball_radius", "lattice", "alpha_file", "basis_file", "samples",
      "volume_samples", "expect", "growth_factor", "cap_kappa", "cap_gamma",
      "mode", "alpha", "Q", "height_bound", "radius"};
  for (const auto& key : order) {
    if (!applies(key) || !is_set(key)) continue;
    if (key == "m") emit(out, key, std::to_string(c.m));
    else if (key == "n") emit(out, key, std::to_string(c.n));
    else if (key == "r") emit_list(out, key, c.r);
    else if (key == "s") emit_list(out, key, c.s);
    else if (key == "epsilon") emit(out, key, format_double(c.epsilon));
    else if (key == "T_grid") emit_list(out, key, c.T_grid);
    else if (key == "t_grid") emit_list(out, key, c.t_grid);
    else if (key == "tau_grid") emit_list(out, key, c.tau_grid);
    else if (key == "direction") emit(out, key, c.direction);
    else if (key == "cap_center") emit_list(out, key, c.cap_center);
    else if (key == "cap_radius") emit(out, key, format_double(c.cap_radius));
    else if (key == "delta") emit(out, key, format_double(c.delta));
    else if (key == "ball_center") emit_list(out, key, c.ball_center);
    else if (key == "ball_radius") emit(out, key, format_double(c.ball_radius));
    else if (key == "lattice") emit(out, key, c.lattice);
    else if (key == "alpha_file") emit(out, key, c.alpha_file);
    else if (key == "basis_file") emit(out, key, c.basis_file);
    else if (key == "samples") emit(out, key, std::to_string(c.samples));
    else if (key == "volume_samples") emit(out, key, std::to_string(c.volume_samples));
    else if (key == "expect") emit(out, key, c.expect);
    else if (key == "growth_factor") emit(out, key, format_double(c.growth_factor));
    else if (key == "cap_kappa") emit(out, key, format_double(c.cap_kappa));
    else if (key == "cap_gamma") emit(out, key, format_double(c.cap_gamma));
    else if (key == "mode") emit(out, key, c.mode);
    else if (key == "alpha") emit_list(out, key, c.alpha);
    else if (key == "Q") emit(out, key, format_double(c.Q));
    else if (key == "height_bound") emit(out, key, format_double(c.height_bound));
    else if (key == "radius") emit(out, key, format_double(c.radius));
  }
  return out.str();
}

}  // namespace latlab
