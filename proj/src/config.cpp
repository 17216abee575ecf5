#include "eddy/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "eddy/error.hpp"

namespace eddy {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::string spaced = value;
  for (char& c : spaced)
    if (c == ',') c = ' ';
  std::istringstream is(spaced);
  std::vector<std::string> out;
  for (std::string item; is >> item;) out.push_back(item);
  return out;
}

class Reader {
 public:
  Reader(std::string key, std::string value, int line)
      : key_(std::move(key)), value_(std::move(value)), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("line " + std::to_string(line_) + ": " + key_ + ": " + what);
  }

  const std::string& text() const { return value_; }

  double number(const std::string& token) const {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != token.size() || !std::isfinite(v))
      fail("expected a number, got '" + token + "'");
    return v;
  }

  double number() const { return number(value_); }

  std::vector<double> numbers() const {
    const auto items = split_list(value_);
    if (items.empty()) fail("expected at least one number");
    std::vector<double> out;
    for (const auto& item : items) out.push_back(number(item));
    return out;
  }

  std::uint64_t unsigned_integer() const {
    if (value_.empty() || value_.find_first_not_of("0123456789") != std::string::npos)
      fail("expected a non-negative integer, got '" + value_ + "'");
    try {
      return std::stoull(value_);
    } catch (const std::exception&) {
      fail("integer out of range: '" + value_ + "'");
    }
  }

 private:
  std::string key_;
  std::string value_;
  int line_;
};

using Handler = std::function<void(ExperimentConfig&, const Reader&)>;

const std::map<std::string, std::map<std::string, Handler>>& handlers() {
  static const std::map<std::string, std::map<std::string, Handler>> table = {
      {"flow",
       {
           {"flow", [](ExperimentConfig& c, const Reader& r) { c.flow.kind = parse_flow_kind(r.text()); }},
           {"omega", [](ExperimentConfig& c, const Reader& r) { c.flow.omega = r.number(); }},
           {"ou_alpha", [](ExperimentConfig& c, const Reader& r) { c.flow.alpha = r.number(); }},
           {"ou_sigma", [](ExperimentConfig& c, const Reader& r) { c.flow.sigma = r.number(); }},
           {"cs_lambda", [](ExperimentConfig& c, const Reader& r) { c.flow.lambda = r.number(); }},
       }},
      {"simulation",
       {
           {"kappa", [](ExperimentConfig& c, const Reader& r) { c.sim.kappa = r.number(); }},
           {"dt", [](ExperimentConfig& c, const Reader& r) { c.sim.dt = r.number(); }},
           {"t_final", [](ExperimentConfig& c, const Reader& r) { c.sim.t_final = r.number(); }},
           {"epsilon", [](ExperimentConfig& c, const Reader& r) { c.sim.epsilon = r.number(); }},
           {"seed", [](ExperimentConfig& c, const Reader& r) { c.sim.seed = r.unsigned_integer(); }},
           {"store_stride",
            [](ExperimentConfig& c, const Reader& r) {
              c.sim.store_stride = static_cast<std::size_t>(r.unsigned_integer());
            }},
           {"x0", [](ExperimentConfig& c, const Reader& r) { c.sim.x0(0) = r.number(); }},
           {"y0", [](ExperimentConfig& c, const Reader& r) { c.sim.x0(1) = r.number(); }},
           {"eta0",
            [](ExperimentConfig& c, const Reader& r) {
              if (r.text() == "stationary")
                c.sim.eta0.reset();
              else
                c.sim.eta0 = r.number();
            }},
           {"integrator",
            [](ExperimentConfig& c, const Reader& r) { c.sim.integrator = parse_integrator(r.text()); }},
           {"burn_in", [](ExperimentConfig& c, const Reader& r) { c.sim.burn_in = r.number(); }},
       }},
      {"estimation",
       {
           {"estimator",
            [](ExperimentConfig& c, const Reader& r) {
              c.estimators.clear();
              for (const auto& item : split_list(r.text())) c.estimators.push_back(parse_estimator(item));
              if (c.estimators.empty()) r.fail("expected at least one estimator");
            }},
           {"delta", [](ExperimentConfig& c, const Reader& r) { c.deltas = r.numbers(); }},
           {"theta", [](ExperimentConfig& c, const Reader& r) { c.theta = r.number(); }},
           {"direction", [](ExperimentConfig& c, const Reader& r) { c.direction = parse_direction(r.text()); }},
       }},
      {"sweep",
       {
           {"realizations",
            [](ExperimentConfig& c, const Reader& r) {
              c.realizations = static_cast<std::size_t>(r.unsigned_integer());
            }},
           {"workers",
            [](ExperimentConfig& c, const Reader& r) {
              const auto w = r.unsigned_integer();
              if (w > std::numeric_limits<unsigned>::max()) r.fail("too many workers");
              c.workers = static_cast<unsigned>(w);
            }},
           {"epsilons", [](ExperimentConfig& c, const Reader& r) { c.epsilons = r.numbers(); }},
           {"alpha_exponent", [](ExperimentConfig& c, const Reader& r) { c.alpha_exponent = r.number(); }},
       }},
  };
  return table;
}

}  // namespace

std::vector<EstimatorSpec> ExperimentConfig::estimator_specs() const {
  std::vector<EstimatorSpec> specs;
  for (auto kind : estimators) specs.push_back({kind, direction});
  return specs;
}

std::vector<double> ExperimentConfig::resolved_deltas() const {
  return deltas.empty() ? default_delta_grid(sim.dt_stored(), sim.t_final) : deltas;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string section;
  std::set<std::string> seen;
  std::string raw;
  int line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto comment = raw.find_first_of("#;");
    const std::string line = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (handlers().count(section) == 0)
        throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' outside any section");

    const auto& keys = handlers().at(section);
    const auto it = keys.find(key);
    if (it == keys.end())
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert(section + "." + key).second)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    if (value.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty value for '" + key + "'");

    it->second(config, Reader(key, value, line_no));
  }

  validate(config.flow);
  validate(config.sim);
  if (!(config.theta >= 0.0)) throw ParameterError("theta must be non-negative");
  if (config.realizations < 2) throw ParameterError("realizations must be at least 2");
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace eddy
