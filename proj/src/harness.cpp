#include "eddy/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <sstream>
#include <thread>

#include "eddy/error.hpp"
#include "eddy/theory.hpp"

namespace eddy {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& text, std::string_view what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v))
    throw ConfigError("invalid " + std::string(what) + ": '" + text + "'");
  return v;
}

// Runs task(r) for r in [0, m) on a small pool. Each task writes only its own
// slot, so results do not depend on scheduling. The failure with the lowest
// realization index is rethrown; numerical failures carry that index.
template <typename Task>
void for_each_realization(std::size_t m, unsigned workers, const Task& task) {
  std::vector<std::exception_ptr> failures(m);
  std::atomic<std::size_t> next{0};
  auto drain = [&]() {
    for (std::size_t r = next++; r < m; r = next++) {
      try {
        task(r);
      } catch (...) {
        failures[r] = std::current_exception();
      }
    }
  };

  unsigned n = workers != 0 ? workers : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, m));
  if (n <= 1) {
    drain();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(drain);
    for (auto& t : pool) t.join();
  }

  for (std::size_t r = 0; r < m; ++r) {
    if (!failures[r]) continue;
    try {
      std::rethrow_exception(failures[r]);
    } catch (const NumericalError& e) {
      throw RealizationError(r, e.what());
    }
  }
}

struct Moments {
  double mean = 0.0;
  double std_dev = 0.0;
};

// values[offset + r], r in index order.
Moments moments(const std::vector<double>& values, std::size_t offset, std::size_t m) {
  double sum = 0.0;
  for (std::size_t r = 0; r < m; ++r) sum += values[offset + r];
  const double mean = sum / static_cast<double>(m);
  double ss = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    const double d = values[offset + r] - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / static_cast<double>(m - 1))};
}

// Checks that every (estimator, δ) pair has enough stored samples.
void check_sampling(const SimConfig& config, const std::vector<EstimatorSpec>& specs,
                    const std::vector<double>& deltas) {
  const std::size_t stored = config.stored_count();
  for (double delta : deltas) {
    const std::size_t steps = commensurate_steps(delta, config.dt_stored());
    for (const auto& spec : specs) {
      const bool enough = spec.kind == EstimatorKind::Qv ? (stored - 1) / steps >= 1
                                                         : stored / steps >= 2;
      if (!enough)
        throw InsufficientDataError("delta = " + format_double(delta) + " leaves too few " +
                                    estimator_name(spec.kind) + " increments before t_final");
    }
  }
}

}  // namespace

std::string estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Qv:
      return "qv";
    case EstimatorKind::Box:
      return "box";
    case EstimatorKind::Shift:
      return "shift";
  }
  return "unknown";
}

EstimatorKind parse_estimator(std::string_view name) {
  if (name == "qv") return EstimatorKind::Qv;
  if (name == "box") return EstimatorKind::Box;
  if (name == "shift") return EstimatorKind::Shift;
  throw ConfigError("unknown estimator '" + std::string(name) + "' (expected qv, box or shift)");
}

double Direction::read(const Mat2& k) const {
  switch (kind) {
    case Kind::X:
      return k(0, 0);
    case Kind::Y:
      return k(1, 1);
    case Kind::Xi:
      return project(k, xi);
  }
  return k(1, 1);
}

Direction parse_direction(std::string_view text) {
  const std::string t = trim(text);
  if (t == "x") return Direction::x();
  if (t == "y") return Direction::y();
  if (t.rfind("xi:", 0) == 0) {
    const std::string body = t.substr(3);
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw ConfigError("direction 'xi:<a>,<b>' needs two components");
    const double a = parse_number(trim(body.substr(0, comma)), "direction component");
    const double b = parse_number(trim(body.substr(comma + 1)), "direction component");
    if (a == 0.0 && b == 0.0) throw ConfigError("direction vector must be non-zero");
    return Direction::along(Vec2(a, b));
  }
  throw ConfigError("unknown direction '" + t + "' (expected x, y or xi:<a>,<b>)");
}

std::string direction_name(const Direction& d) {
  switch (d.kind) {
    case Direction::Kind::X:
      return "x";
    case Direction::Kind::Y:
      return "y";
    case Direction::Kind::Xi:
      return "xi:" + format_double(d.xi(0)) + ";" + format_double(d.xi(1));
  }
  return "y";
}

DiffusivityTensor estimate(const Trajectory& traj, EstimatorKind kind, double delta, double theta) {
  const std::uint64_t seed = traj.config.seed;
  const std::uint64_t realization = traj.config.realization;
  if (kind == EstimatorKind::Qv) {
    ObservationSeries series = subsample(traj, delta);
    if (theta > 0.0) series = add_observation_noise(series, theta, seed, realization);
    DiffusivityTensor k = qv_estimate(series);
    k.meta.flow = flow_name(traj.flow.kind);
    k.meta.kappa = traj.config.kappa;
    return k;
  }
  ObservationSeries fine = as_series(traj);
  if (theta > 0.0) fine = add_observation_noise(fine, theta, seed, realization);
  DiffusivityTensor k =
      kind == EstimatorKind::Box ? box_estimate(fine, delta) : shift_estimate(fine, delta);
  k.meta.flow = flow_name(traj.flow.kind);
  k.meta.kappa = traj.config.kappa;
  return k;
}

SweepReport delta_sweep(const FlowSpec& flow, const SimConfig& config,
                        const std::vector<EstimatorSpec>& specs, const std::vector<double>& deltas,
                        double theta, std::size_t m, const RunOptions& options) {
  if (m < 2) throw ParameterError("ensembles need at least 2 realizations");
  if (deltas.empty()) throw ParameterError("delta list is empty");
  if (specs.empty()) throw ParameterError("estimator list is empty");
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw ParameterError("theta must be non-negative");
  validate(flow);
  validate(config);
  check_sampling(config, specs, deltas);

  const std::size_t cells = specs.size() * deltas.size();
  std::vector<double> values(cells * m);

  for_each_realization(m, options.workers, [&](std::size_t r) {
    SimConfig local = config;
    local.realization = static_cast<std::uint64_t>(r);
    const Trajectory traj = simulate(flow, local);
    for (std::size_t s = 0; s < specs.size(); ++s) {
      for (std::size_t d = 0; d < deltas.size(); ++d) {
        const DiffusivityTensor k = estimate(traj, specs[s].kind, deltas[d], theta);
        const double v = specs[s].direction.read(k.entries);
        if (!std::isfinite(v)) throw NumericalError("non-finite estimate");
        values[(s * deltas.size() + d) * m + r] = v;
      }
    }
  });

  SweepReport report;
  report.rows.reserve(cells);
  for (std::size_t s = 0; s < specs.size(); ++s) {
    for (std::size_t d = 0; d < deltas.size(); ++d) {
      const Moments mo = moments(values, (s * deltas.size() + d) * m, m);
      SweepRow row;
      row.flow = flow_name(flow.kind);
      row.kappa = config.kappa;
      row.epsilon = config.epsilon;
      row.theta = theta;
      row.delta = deltas[d];
      row.estimator = estimator_name(specs[s].kind);
      row.direction = direction_name(specs[s].direction);
      row.mean = mo.mean;
      row.std_dev = mo.std_dev;
      row.std_error = mo.std_dev / std::sqrt(static_cast<double>(m));
      row.realizations = m;
      row.t_final = config.t_final;
      row.dt = config.dt;
      row.seed = config.seed;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

SweepReport delta_sweep(const FlowSpec& flow, const SimConfig& config, const EstimatorSpec& spec,
                        const std::vector<double>& deltas, double theta, std::size_t m,
                        const RunOptions& options) {
  return delta_sweep(flow, config, std::vector<EstimatorSpec>{spec}, deltas, theta, m, options);
}

SweepRow run_ensemble(const FlowSpec& flow, const SimConfig& config, const EstimatorSpec& spec,
                      double delta, double theta, std::size_t m, const RunOptions& options) {
  return delta_sweep(flow, config, spec, {delta}, theta, m, options).rows.front();
}

SweepReport rescaled_study(const FlowSpec& flow, const SimConfig& config, const EstimatorSpec& spec,
                           const std::vector<double>& epsilons, double alpha_exponent,
                           std::size_t m, const RunOptions& options) {
  if (epsilons.empty()) throw ParameterError("epsilon list is empty");
  if (!(alpha_exponent > 0.0 && alpha_exponent < 2.0))
    throw ParameterError("alpha exponent must lie in (0, 2)");

  std::vector<SimConfig> configs;
  std::vector<double> deltas;
  for (double eps : epsilons) {
    if (!(eps > 0.0 && eps <= 1.0)) throw ParameterError("epsilon must lie in (0, 1]");
    SimConfig c = config;
    c.epsilon = eps;
    validate(c);
    const double delta = std::pow(eps, alpha_exponent);
    check_sampling(c, {spec}, {delta});
    configs.push_back(c);
    deltas.push_back(delta);
  }

  SweepReport report;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    SweepReport one = delta_sweep(flow, configs[i], spec, {deltas[i]}, 0.0, m, options);
    report.rows.push_back(std::move(one.rows.front()));
  }
  return report;
}

std::vector<double> default_delta_grid(double dt_stored, double t_final) {
  static const double grid[] = {0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0};
  std::vector<double> out;
  for (double delta : grid) {
    if (2.0 * delta > t_final * (1.0 + 1e-12)) continue;
    try {
      commensurate_steps(delta, dt_stored);
    } catch (const CommensurabilityError&) {
      continue;
    }
    out.push_back(delta);
  }
  return out;
}

std::string csv_header() {
  return "flow,kappa,epsilon,theta,delta,estimator,direction,mean,std,stderr,M,T,dt,seed";
}

std::string csv_row(const SweepRow& row) {
  std::string s;
  s += row.flow + ',';
  s += format_double(row.kappa) + ',';
  s += format_double(row.epsilon) + ',';
  s += format_double(row.theta) + ',';
  s += format_double(row.delta) + ',';
  s += row.estimator + ',';
  s += row.direction + ',';
  s += format_double(row.mean) + ',';
  s += format_double(row.std_dev) + ',';
  s += format_double(row.std_error) + ',';
  s += std::to_string(row.realizations) + ',';
  s += format_double(row.t_final) + ',';
  s += format_double(row.dt) + ',';
  s += std::to_string(row.seed);
  return s;
}

void write_csv(std::ostream& out, const SweepReport& report, bool header) {
  if (header) out << csv_header() << '\n';
  for (const auto& row : report.rows) out << csv_row(row) << '\n';
}

PeriodicShearVerdict adjudicate_periodic_shear(const SweepReport& report, double kappa,
                                               double omega, double min_kappa_delta,
                                               double tolerance) {
  PeriodicShearVerdict v;
  v.printed = theory::k_periodic_shear(kappa, omega, theory::PeriodicShearFormula::Printed);
  v.figure_consistent =
      theory::k_periodic_shear(kappa, omega, theory::PeriodicShearFormula::FigureConsistent);

  double weight_sum = 0.0;
  double weighted = 0.0;
  for (const auto& row : report.rows) {
    if (row.estimator != "qv" || row.direction != "y") continue;
    if (kappa * row.delta < min_kappa_delta * (1.0 - 1e-12)) continue;
    if (!(row.std_error > 0.0))
      throw InsufficientDataError("plateau row at delta = " + format_double(row.delta) +
                                  " has zero standard error");
    const double w = 1.0 / (row.std_error * row.std_error);
    weight_sum += w;
    weighted += w * row.mean;
    v.plateau_deltas.push_back(row.delta);
  }
  if (v.plateau_deltas.empty())
    throw InsufficientDataError("no qv rows along y with kappa*delta >= " +
                                format_double(min_kappa_delta));

  v.plateau = weighted / weight_sum;
  v.plateau_stderr = 1.0 / std::sqrt(weight_sum);
  v.printed_rel_error = std::abs(v.plateau - v.printed) / v.printed;
  v.figure_rel_error = std::abs(v.plateau - v.figure_consistent) / v.figure_consistent;
  v.printed_within = v.printed_rel_error <= tolerance;
  v.figure_within = v.figure_rel_error <= tolerance;
  if (v.printed_within && v.figure_within)
    v.verdict = "both";
  else if (v.figure_within)
    v.verdict = "figure_consistent";
  else if (v.printed_within)
    v.verdict = "printed";
  else
    v.verdict = "neither";

  std::ostringstream os;
  os << "periodic shear, kappa = " << format_double(kappa) << ", omega = " << format_double(omega)
     << "\n";
  os << "plateau (inverse-variance mean of qv along y, kappa*delta >= "
     << format_double(min_kappa_delta) << ", deltas";
  for (double d : v.plateau_deltas) os << ' ' << format_double(d);
  os << "): " << format_double(v.plateau) << " +/- " << format_double(v.plateau_stderr) << "\n";
  os << "candidate kappa + 1/(4(omega + kappa^2))       = " << format_double(v.printed)
     << "  relative distance " << format_double(v.printed_rel_error) << "\n";
  os << "candidate kappa + kappa/(4(omega^2 + kappa^2)) = " << format_double(v.figure_consistent)
     << "  relative distance " << format_double(v.figure_rel_error) << "\n";
  os << "tolerance " << format_double(tolerance) << ", verdict: " << v.verdict << "\n";
  v.report = os.str();
  return v;
}

}  // namespace eddy
