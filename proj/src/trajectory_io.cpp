#include "eddy/trajectory_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "eddy/error.hpp"

namespace eddy {

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& s, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw ConfigError("trajectory line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

std::uint64_t to_uint(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("trajectory header: bad integer '" + s + "'");
  return std::stoull(s);
}

}  // namespace

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  const SimConfig& c = traj.config;
  const FlowSpec& f = traj.flow;
  out << "# flow = " << flow_name(f.kind) << '\n';
  out << "# omega = " << g17(f.omega) << '\n';
  out << "# ou_alpha = " << g17(f.alpha) << '\n';
  out << "# ou_sigma = " << g17(f.sigma) << '\n';
  out << "# cs_lambda = " << g17(f.lambda) << '\n';
  out << "# kappa = " << g17(c.kappa) << '\n';
  out << "# dt = " << g17(c.dt) << '\n';
  out << "# t_final = " << g17(c.t_final) << '\n';
  out << "# epsilon = " << g17(c.epsilon) << '\n';
  out << "# seed = " << c.seed << '\n';
  out << "# realization = " << c.realization << '\n';
  out << "# store_stride = " << c.store_stride << '\n';
  out << "# integrator = " << integrator_name(c.integrator) << '\n';
  out << "# dt_stored = " << g17(traj.dt_stored) << '\n';
  out << "t,x,y\n";
  for (Eigen::Index i = 0; i < traj.size(); ++i) {
    out << g17(traj.dt_stored * static_cast<double>(i)) << ',' << g17(traj.positions(0, i)) << ','
        << g17(traj.positions(1, i)) << '\n';
  }
}

void write_trajectory(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write trajectory file '" + path + "'");
  write_trajectory(out, traj);
  if (!out) throw ConfigError("error while writing '" + path + "'");
}

Trajectory read_trajectory(std::istream& in) {
  std::map<std::string, std::string> header;
  std::vector<double> t, x, y;
  std::string raw;
  int line_no = 0;
  bool columns_seen = false;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string body = line.substr(1);
      const auto eq = body.find('=');
      if (eq != std::string::npos) header[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
      continue;
    }
    if (!columns_seen && line == "t,x,y") {
      columns_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string a, b, c, extra;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c, ',') ||
        std::getline(row, extra, ','))
      throw ConfigError("trajectory line " + std::to_string(line_no) + ": expected t,x,y");
    t.push_back(to_double(trim(a), line_no));
    x.push_back(to_double(trim(b), line_no));
    y.push_back(to_double(trim(c), line_no));
  }
  if (t.size() < 2) throw ConfigError("trajectory file needs at least 2 samples");

  Trajectory traj;
  auto get = [&](const char* key) -> const std::string* {
    const auto it = header.find(key);
    return it == header.end() ? nullptr : &it->second;
  };
  auto number = [&](const char* key, double& target) {
    if (const auto* v = get(key)) target = to_double(*v, 0);
  };

  if (const auto* v = get("flow")) traj.flow.kind = parse_flow_kind(*v);
  number("omega", traj.flow.omega);
  number("ou_alpha", traj.flow.alpha);
  number("ou_sigma", traj.flow.sigma);
  number("cs_lambda", traj.flow.lambda);
  number("kappa", traj.config.kappa);
  number("dt", traj.config.dt);
  number("t_final", traj.config.t_final);
  number("epsilon", traj.config.epsilon);
  if (const auto* v = get("seed")) traj.config.seed = to_uint(*v);
  if (const auto* v = get("realization")) traj.config.realization = to_uint(*v);
  if (const auto* v = get("store_stride")) traj.config.store_stride = to_uint(*v);
  if (const auto* v = get("integrator")) traj.config.integrator = parse_integrator(*v);

  traj.dt_stored = t[1] - t[0];
  number("dt_stored", traj.dt_stored);
  if (!(traj.dt_stored > 0.0)) throw ConfigError("trajectory sample spacing must be positive");

  const auto n = static_cast<Eigen::Index>(t.size());
  traj.positions.resize(2, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    traj.positions(0, i) = x[static_cast<std::size_t>(i)];
    traj.positions(1, i) = y[static_cast<std::size_t>(i)];
  }
  return traj;
}

Trajectory read_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trajectory file '" + path + "'");
  return read_trajectory(in);
}

}  // namespace eddy
