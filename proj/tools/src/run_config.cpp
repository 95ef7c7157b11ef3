#include "run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace l0recov::cli {

namespace {

std::string trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  return std::string(text);
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <typename T>
T parse_number(const std::string& raw) {
  const std::string text = trim(raw);
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    throw ConfigError("invalid number '" + text + "'");
  }
  return value;
}

double parse_real(const std::string& text) { return parse_number<double>(text); }
std::size_t parse_count(const std::string& text) { return parse_number<std::size_t>(text); }

bool parse_bool(const std::string& raw) {
  std::string text = trim(raw);
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ConfigError("invalid boolean '" + text + "'");
}

InitMode parse_init(const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "zero") return InitMode::Zero;
  if (text == "adjoint") return InitMode::AdjointMeasurement;
  throw ConfigError("invalid init mode '" + text + "' (expected zero or adjoint)");
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"problem.n", [](RunConfig& c, const std::string& v) { c.problem.n = parse_count(v); }},
      {"problem.sr", [](RunConfig& c, const std::string& v) { c.problem.sr = parse_real(v); }},
      {"problem.sl", [](RunConfig& c, const std::string& v) { c.problem.sl = parse_real(v); }},
      {"problem.sigma", [](RunConfig& c, const std::string& v) { c.problem.sigmas = parse_double_list(v); }},
      {"problem.mu", [](RunConfig& c, const std::string& v) { c.problem.mus = parse_double_list(v); }},
      {"problem.scaling",
       [](RunConfig& c, const std::string& v) { c.problem.scaling = parse_matrix_scaling(trim(v)); }},
      {"problem.amplitude",
       [](RunConfig& c, const std::string& v) { c.problem.amplitude = parse_amplitude_kind(trim(v)); }},

      {"run.seeds", [](RunConfig& c, const std::string& v) { c.run.seeds = parse_seed_list(v); }},
      {"run.out", [](RunConfig& c, const std::string& v) { c.run.out = trim(v); }},
      {"run.parallel", [](RunConfig& c, const std::string& v) { c.run.parallel = parse_count(v); }},
      {"run.timing", [](RunConfig& c, const std::string& v) { c.run.timing = parse_bool(v); }},
      {"run.verbosity", [](RunConfig& c, const std::string& v) { c.run.verbosity = parse_number<int>(v); }},

      {"solver.solvers", [](RunConfig& c, const std::string& v) { c.solver.solvers = parse_method_list(v); }},
      {"solver.tol", [](RunConfig& c, const std::string& v) { c.solver.tol = parse_real(v); }},
      {"solver.max_iters", [](RunConfig& c, const std::string& v) { c.solver.max_iters = parse_count(v); }},
      {"solver.init", [](RunConfig& c, const std::string& v) { c.solver.init = parse_init(v); }},

      {"iiht.step", [](RunConfig& c, const std::string& v) { c.iiht.step = trim(v); }},
      {"iiht.tau", [](RunConfig& c, const std::string& v) { c.iiht.tau = parse_real(v); }},
      {"iiht.delta_fraction", [](RunConfig& c, const std::string& v) { c.iiht.delta_fraction = parse_real(v); }},
      {"iiht.tau_min", [](RunConfig& c, const std::string& v) { c.iiht.tau_min = parse_real(v); }},
      {"iht.tau", [](RunConfig& c, const std::string& v) { c.iht_tau = parse_real(v); }},
      {"ist.tau", [](RunConfig& c, const std::string& v) { c.ist_tau = parse_real(v); }},

      {"phantom.side", [](RunConfig& c, const std::string& v) { c.phantom.side = parse_count(v); }},
      {"phantom.nnz", [](RunConfig& c, const std::string& v) { c.phantom.nnz = parse_count(v); }},
      {"phantom.sr", [](RunConfig& c, const std::string& v) { c.phantom.sr = parse_real(v); }},
      {"phantom.sigma", [](RunConfig& c, const std::string& v) { c.phantom.sigma = parse_real(v); }},
      {"phantom.mu", [](RunConfig& c, const std::string& v) { c.phantom.mu = parse_real(v); }},
      {"phantom.max_iters", [](RunConfig& c, const std::string& v) { c.phantom.max_iters = parse_count(v); }},
      {"phantom.seed", [](RunConfig& c, const std::string& v) { c.phantom.seed = parse_number<std::uint64_t>(v); }},

      {"verify.sizes",
       [](RunConfig& c, const std::string& v) {
         c.verify.sizes.clear();
         for (const std::string& item : split(v)) c.verify.sizes.push_back(parse_count(item));
       }},
      {"verify.instances", [](RunConfig& c, const std::string& v) { c.verify.instances = parse_count(v); }},
      {"verify.sigma", [](RunConfig& c, const std::string& v) { c.verify.sigmas = parse_double_list(v); }},
      {"verify.sr", [](RunConfig& c, const std::string& v) { c.verify.sr = parse_real(v); }},
      {"verify.sl", [](RunConfig& c, const std::string& v) { c.verify.sl = parse_real(v); }},
      {"verify.mu", [](RunConfig& c, const std::string& v) { c.verify.mu = parse_real(v); }},
      {"verify.delta_fraction",
       [](RunConfig& c, const std::string& v) { c.verify.delta_fraction = parse_real(v); }},
      {"verify.tau_scale", [](RunConfig& c, const std::string& v) { c.verify.tau_scale = parse_real(v); }},
      {"verify.max_iters", [](RunConfig& c, const std::string& v) { c.verify.max_iters = parse_count(v); }},
      {"verify.include_special",
       [](RunConfig& c, const std::string& v) { c.verify.include_special = parse_bool(v); }},

      {"solve.a", [](RunConfig& c, const std::string& v) { c.solve.a = trim(v); }},
      {"solve.y", [](RunConfig& c, const std::string& v) { c.solve.y = trim(v); }},
      {"solve.x_true", [](RunConfig& c, const std::string& v) { c.solve.x_true = trim(v); }},
      {"solve.x_out", [](RunConfig& c, const std::string& v) { c.solve.x_out = trim(v); }},
      {"solve.solver", [](RunConfig& c, const std::string& v) { c.solve.solver = parse_method(trim(v)); }},
      {"solve.mu", [](RunConfig& c, const std::string& v) { c.solve.mu = parse_real(v); }},
      {"solve.k", [](RunConfig& c, const std::string& v) { c.solve.k = parse_count(v); }},
      {"solve.l1_oracle", [](RunConfig& c, const std::string& v) { c.solve.l1_oracle = parse_real(v); }},

      {"gen.format", [](RunConfig& c, const std::string& v) { c.gen_format = trim(v); }},
  };
  return table;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  for (const std::string& item : split(text)) values.push_back(parse_real(item));
  if (values.empty()) throw ConfigError("empty list");
  return values;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& item : split(text)) {
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      seeds.push_back(parse_number<std::uint64_t>(item));
      continue;
    }
    const auto lo = parse_number<std::uint64_t>(item.substr(0, dash));
    const auto hi = parse_number<std::uint64_t>(item.substr(dash + 1));
    if (hi < lo || hi - lo > 100000) throw ConfigError("invalid seed range '" + item + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw ConfigError("empty seed list");
  return seeds;
}

void set_config_value(RunConfig& config, const std::string& dotted_key, const std::string& value) {
  const auto it = setters().find(dotted_key);
  if (it == setters().end()) throw ConfigError("unknown config key '" + dotted_key + "'");
  try {
    it->second(config, value);
  } catch (const ConfigError& e) {
    throw ConfigError(dotted_key + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(dotted_key + ": " + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  RunConfig config;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(path.string() + ": key '" + section + "' is outside a [section]");
    }
    for (const auto& [key, node] : body) {
      try {
        set_config_value(config, section + "." + key, node.data());
      } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
      }
    }
  }
  return config;
}

std::string default_config_text() {
  return R"([problem]
n = 4096
sr = 0.35
sl = 0.05
sigma = 0.1, 0.2
mu = 350, 170
scaling = inv_sqrt_m
amplitude = gaussian

[run]
seeds = 1-10
out = l0recov_out
parallel = 1
timing = false
verbosity = 1

[solver]
solvers = measurement, ist, cosamp, iht, iiht
tol = 1e-5
max_iters = 100
init = adjoint

[iiht]
step = adaptive
tau = 0.5
delta_fraction = 0.01
tau_min = 1e-12

[iht]
tau = 0.5

[ist]
tau = 0.3

[phantom]
side = 128
nnz = 1282
sr = 0.35
sigma = 0.08
mu = 256
max_iters = 800
seed = 1

[verify]
sizes = 256, 1024
instances = 5
sigma = 0, 0.1
sr = 0.35
sl = 0.05
mu = 350
delta_fraction = 0.01
tau_scale = 1
max_iters = 10000
include_special = true
)";
}

MethodSettings method_settings(const RunConfig& config, Method method, double mu) {
  MethodSettings s = default_settings(method, mu, config.solver.tol, config.solver.max_iters);
  s.config.init_mode = config.solver.init;
  switch (method) {
    case Method::Iht: s.config.step_rule = FixedStep{config.iht_tau}; break;
    case Method::Ist: s.config.step_rule = FixedStep{config.ist_tau}; break;
    case Method::Iiht:
      if (config.iiht.step == "adaptive") {
        s.config.step_rule = PaperAdaptiveStep{config.iiht.tau_min};
      } else if (config.iiht.step == "fixed") {
        s.config.step_rule = FixedStep{config.iiht.tau};
      } else if (config.iiht.step == "safe") {
        s.config.step_rule = SafeBoundStep{.delta = 0.0, .delta_fraction = config.iiht.delta_fraction};
      } else {
        throw ConfigError("iiht.step: expected adaptive, fixed or safe, got '" + config.iiht.step + "'");
      }
      break;
    default: break;
  }
  return s;
}

}  // namespace l0recov::cli
