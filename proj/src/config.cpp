#include "hmlab/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hmlab/error.hpp"

namespace hmlab {

namespace {

using Json = nlohmann::json;
using Setter = std::function<void(RunConfig&, const std::string&, const Json&)>;

double number(const std::string& key, const Json& j) {
  if (!j.is_number()) throw ConfigError(key, "expected a number, got " + j.dump());
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
  return x;
}

long long integer(const std::string& key, const Json& j) {
  const double x = number(key, j);
  if (x != std::floor(x) || std::abs(x) > 9.0e15) throw ConfigError(key, "expected an integer, got " + j.dump());
  return static_cast<long long>(x);
}

std::size_t count(const std::string& key, const Json& j) {
  const long long v = integer(key, j);
  if (v < 0) throw ConfigError(key, "must be >= 0");
  return static_cast<std::size_t>(v);
}

std::string text(const std::string& key, const Json& j) {
  if (!j.is_string()) throw ConfigError(key, "expected a string, got " + j.dump());
  return j.get<std::string>();
}

std::vector<double> numbers(const std::string& key, const Json& j) {
  if (!j.is_array()) throw ConfigError(key, "expected an array of numbers");
  std::vector<double> out;
  for (const Json& e : j) out.push_back(number(key, e));
  return out;
}

template <class F>
auto parse_enum(const std::string& key, const Json& j, F parse) {
  const std::string s = text(key, j);
  try {
    return parse(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

#define NUM_FIELD(key, member) \
  {key, [](RunConfig& c, const std::string& k, const Json& j) { c.member = number(k, j); }}

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"command",
       [](RunConfig& c, const std::string& k, const Json& j) { c.command = parse_enum(k, j, parse_command); }},
      {"output_dir", [](RunConfig& c, const std::string& k, const Json& j) { c.output_dir = text(k, j); }},
      {"pair.n",
       [](RunConfig& c, const std::string& k, const Json& j) {
         const long long n = integer(k, j);
         if (n < 2 || n > 1000) throw ConfigError(k, "must satisfy 2 <= n (the theorem is stated for n >= 2)");
         c.n = static_cast<int>(n);
       }},
      {"pair.target.family",
       [](RunConfig& c, const std::string& k, const Json& j) { c.target.family = parse_enum(k, j, parse_family); }},
      {"pair.target.params",
       [](RunConfig& c, const std::string& k, const Json& j) { c.target.params = numbers(k, j); }},
      {"pair.target.coefficients",
       [](RunConfig& c, const std::string& k, const Json& j) { c.target.coefficients = numbers(k, j); }},
      NUM_FIELD("integration.rel_tol", integration.rel_tol),
      NUM_FIELD("integration.abs_tol", integration.abs_tol),
      {"integration.max_steps",
       [](RunConfig& c, const std::string& k, const Json& j) { c.integration.max_steps = count(k, j); }},
      NUM_FIELD("integration.r_start", integration.r_start),
      NUM_FIELD("integration.r_end", integration.r_end),
      NUM_FIELD("integration.y_cap", integration.y_cap),
      NUM_FIELD("integration.yp_zero_tol", integration.yp_zero_tol),
      NUM_FIELD("integration.z_cap", integration.z_cap),
      NUM_FIELD("integration.z_zero_tol", integration.z_zero_tol),
      NUM_FIELD("integration.tail_decades", integration.tail_decades),
      NUM_FIELD("integration.kappa_max", integration.kappa_max),
      {"integrate.seed",
       [](RunConfig& c, const std::string& k, const Json& j) {
         const std::string s = text(k, j);
         if (s == "series") {
           c.seed = SeedKind::series;
         } else if (s == "explicit") {
           c.seed = SeedKind::explicit_;
         } else {
           throw ConfigError(k, "expected 'series' or 'explicit', got '" + s + "'");
         }
       }},
      NUM_FIELD("integrate.c", c),
      NUM_FIELD("integrate.y0", y0),
      NUM_FIELD("integrate.yp0", yp0),
      {"integrate.direction",
       [](RunConfig& c, const std::string& k, const Json& j) {
         const std::string s = text(k, j);
         if (s == "forward") {
           c.direction = Direction::forward;
         } else if (s == "backward") {
           c.direction = Direction::backward;
         } else {
           throw ConfigError(k, "expected 'forward' or 'backward', got '" + s + "'");
         }
       }},
      {"shoot.regime",
       [](RunConfig& c, const std::string& k, const Json& j) { c.shoot_regime = parse_enum(k, j, parse_regime); }},
      NUM_FIELD("shoot.c", shoot_c),
      {"sweep.regime",
       [](RunConfig& c, const std::string& k, const Json& j) { c.sweep_regime = parse_enum(k, j, parse_regime); }},
      {"sweep.c_count", [](RunConfig& c, const std::string& k, const Json& j) { c.c_count = count(k, j); }},
      {"sweep.c_min", [](RunConfig& c, const std::string& k, const Json& j) { c.c_min = number(k, j); }},
      {"sweep.c_max", [](RunConfig& c, const std::string& k, const Json& j) { c.c_max = number(k, j); }},
      {"sweep.threads",
       [](RunConfig& c, const std::string& k, const Json& j) { c.threads = static_cast<unsigned>(count(k, j)); }},
      NUM_FIELD("conditions.r_min", conditions.r_min),
      NUM_FIELD("conditions.r_max", conditions.r_max),
      {"conditions.count",
       [](RunConfig& c, const std::string& k, const Json& j) { c.conditions.count = count(k, j); }},
      {"conditions.mode",
       [](RunConfig& c, const std::string& k, const Json& j) { c.check_mode = parse_enum(k, j, parse_check_mode); }},
      NUM_FIELD("adjudicate.points_per_decade", points_per_decade),
      NUM_FIELD("monitors.w_y_max", w_y_max),
  };
  return table;
}

#undef NUM_FIELD

const std::set<std::string>& string_keys() {
  static const std::set<std::string> keys = {"command",      "output_dir",          "pair.target.family",
                                             "integrate.seed", "integrate.direction", "shoot.regime",
                                             "sweep.regime", "conditions.mode"};
  return keys;
}

void flatten(const Json& j, const std::string& prefix, std::map<std::string, Json>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten(*it, key, out);
    } else {
      out[key] = *it;
    }
  }
}

Json override_value(const std::string& key, const std::string& raw) {
  if (string_keys().count(key)) return raw;
  try {
    return Json::parse(raw);
  } catch (const Json::parse_error&) {
    return raw;
  }
}

// Maps a validation message of the form "integration.<field> ..." to a
// ConfigError on that key.
[[noreturn]] void rethrow_as_config(const std::invalid_argument& e, const std::string& fallback_key) {
  const std::string msg = e.what();
  const auto space = msg.find(' ');
  const std::string head = msg.substr(0, space);
  for (const auto& [key, setter] : setters()) {
    if (key == head) throw ConfigError(key, msg.substr(space == std::string::npos ? msg.size() : space + 1));
  }
  throw ConfigError(fallback_key, msg);
}

void validate(const RunConfig& c) {
  try {
    c.integration.validate();
  } catch (const std::invalid_argument& e) {
    rethrow_as_config(e, "integration");
  }
  try {
    c.conditions.validate();
  } catch (const std::invalid_argument& e) {
    rethrow_as_config(e, "conditions");
  }
  try {
    (void)c.pair();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(c.target.family == Family::polynomial ? "pair.target.coefficients" : "pair.target.params",
                      e.what());
  }
  if (c.command == Command::sweep) {
    const CGrid g = c.sweep_grid();
    if (!(g.min > 0.0)) throw ConfigError("sweep.c_min", "must be positive");
    if (!(g.max > g.min)) throw ConfigError("sweep.c_max", "must exceed sweep.c_min");
    if (g.count < 2) throw ConfigError("sweep.c_count", "must be >= 2");
  }
  if (!(c.c > 0.0)) throw ConfigError("integrate.c", "must be positive");
  if (!(c.shoot_c > 0.0)) throw ConfigError("shoot.c", "must be positive");
  if (c.seed == SeedKind::explicit_ && !(c.y0 > 0.0)) throw ConfigError("integrate.y0", "must be positive");
  if (!(c.points_per_decade > 0.0)) throw ConfigError("adjudicate.points_per_decade", "must be positive");
  if (!(c.w_y_max > 0.0)) throw ConfigError("monitors.w_y_max", "must be positive");
  if (c.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::check_conditions: return "check-conditions";
    case Command::integrate: return "integrate";
    case Command::shoot: return "shoot";
    case Command::sweep: return "sweep";
    case Command::adjudicate_sign: return "adjudicate-sign";
    case Command::monitors: return "monitors";
  }
  return "unknown";
}

Command parse_command(std::string_view s) {
  for (Command c : {Command::check_conditions, Command::integrate, Command::shoot, Command::sweep,
                    Command::adjudicate_sign, Command::monitors}) {
    if (to_string(c) == s) return c;
  }
  throw std::invalid_argument("unknown command '" + std::string(s) + "'");
}

CGrid RunConfig::sweep_grid() const {
  CGrid g = sweep_regime == Regime::origin_regular ? CGrid{61, 1e-3, 1e3} : CGrid{41, 1e-4, 1.0};
  if (c_count) g.count = *c_count;
  if (c_min) g.min = *c_min;
  if (c_max) g.max = *c_max;
  return g;
}

ModelPair RunConfig::pair() const {
  if (n < 2) throw ConfigError("pair.n", "must be >= 2");
  return make_model_pair(n, make_builtin(target));
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [key, setter] : setters()) k.push_back(key);
    return k;
  }();
  return keys;
}

RunConfig parse_config(const std::string& json_text, const std::vector<Override>& overrides) {
  std::map<std::string, Json> flat;
  if (!json_text.empty()) {
    Json root;
    try {
      root = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
      throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("<file>", "top level must be a JSON object");
    flatten(root, "", flat);
  }
  for (const auto& [key, raw] : overrides) flat[key] = override_value(key, raw);

  std::map<std::string, const Setter*> by_key;
  for (const auto& [key, setter] : setters()) by_key[key] = &setter;
  for (const auto& [key, value] : flat) {
    if (!by_key.count(key)) throw ConfigError(key, "unknown key");
  }
  RunConfig cfg;
  // table order, so e.g. the command is known before anything depends on it
  for (const auto& [key, setter] : setters()) {
    const auto it = flat.find(key);
    if (it != flat.end()) setter(cfg, key, it->second);
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::optional<std::filesystem::path>& file, const std::vector<Override>& overrides) {
  std::string text;
  if (file) {
    std::ifstream in(*file, std::ios::binary);
    if (!in) throw ConfigError("<file>", "cannot read " + file->string());
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_config(text, overrides);
}

}  // namespace hmlab
