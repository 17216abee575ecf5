#include "eddy/dynamics.hpp"

#include <cmath>

#include "eddy/error.hpp"

namespace eddy {

namespace {

// Ratio tolerance when deciding whether T is an integer number of stored steps.
constexpr double kCountSlack = 1e-9;

double initial_eta(const FlowSpec& flow, const SimConfig& config) {
  if (flow.kind != FlowKind::OUShear) return 1.0;
  if (config.eta0) return *config.eta0;
  GaussianStream stream(config.seed, config.realization, StreamTag::InitialEta);
  return stationary_eta_draw(flow.alpha, flow.sigma, stream);
}

void check_finite(const Vec2& x, double eta, std::size_t step) {
  if (!std::isfinite(x.x()) || !std::isfinite(x.y()) || !std::isfinite(eta))
    throw BlowupError(step, "non-finite state");
}

Trajectory make_trajectory(const FlowSpec& flow, const SimConfig& config) {
  Trajectory traj;
  traj.positions.resize(2, static_cast<Eigen::Index>(config.stored_count()));
  traj.dt_stored = config.dt_stored();
  traj.flow = flow;
  traj.config = config;
  return traj;
}

}  // namespace

std::string integrator_name(Integrator integrator) {
  return integrator == Integrator::EulerMaruyama ? "em" : "shear_exact";
}

Integrator parse_integrator(std::string_view name) {
  if (name == "em") return Integrator::EulerMaruyama;
  if (name == "shear_exact") return Integrator::ShearExact;
  throw ConfigError("unknown integrator '" + std::string(name) + "'");
}

std::size_t SimConfig::stored_count() const {
  const double ratio = t_final / dt_stored();
  return static_cast<std::size_t>(std::floor(ratio + kCountSlack)) + 1;
}

void validate(const SimConfig& config) {
  if (!(config.kappa > 0.0) || !std::isfinite(config.kappa))
    throw ParameterError("kappa must be positive");
  if (!(config.dt > 0.0) || !std::isfinite(config.dt)) throw ParameterError("dt must be positive");
  if (!(config.t_final >= config.dt) || !std::isfinite(config.t_final))
    throw ParameterError("t_final must be at least dt");
  if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon))
    throw ParameterError("epsilon must be positive");
  if (config.store_stride < 1) throw ParameterError("store_stride must be >= 1");
  if (!(config.burn_in >= 0.0)) throw ParameterError("burn_in must be non-negative");
  if (!config.x0.allFinite()) throw ParameterError("initial position must be finite");
  if (config.eta0 && !std::isfinite(*config.eta0))
    throw ParameterError("eta0 must be finite");
  if (config.epsilon < 1.0) {
    const double limit = config.epsilon * config.epsilon / 50.0;
    if (config.dt > limit * (1.0 + 1e-12))
      throw ParameterError("rescaled run needs dt <= epsilon^2/50 = " + std::to_string(limit));
  }
  if (config.stored_count() < 2)
    throw ParameterError("t_final shorter than one stored step");
}

double ou_step(double eta, double alpha, double sigma, double dt, double gaussian) {
  if (!(alpha > 0.0)) throw ParameterError("OU step requires alpha > 0");
  if (!(sigma >= 0.0)) throw ParameterError("OU step requires sigma >= 0");
  if (!(dt > 0.0)) throw ParameterError("OU step requires dt > 0");
  const double decay = std::exp(-alpha * dt);
  const double spread = std::sqrt((sigma / alpha) * -std::expm1(-2.0 * alpha * dt));
  return decay * eta + spread * gaussian;
}

double stationary_eta_draw(double alpha, double sigma, GaussianStream& stream) {
  if (!(alpha > 0.0)) throw ParameterError("stationary OU draw requires alpha > 0");
  if (!(sigma >= 0.0)) throw ParameterError("stationary OU draw requires sigma >= 0");
  return std::sqrt(sigma / alpha) * stream();
}

Trajectory simulate(const FlowSpec& flow, const SimConfig& config) {
  return config.integrator == Integrator::ShearExact ? simulate_shear_exact(flow, config)
                                                     : simulate_em(flow, config);
}

Trajectory simulate_em(const FlowSpec& flow, const SimConfig& config) {
  validate(flow);
  validate(config);

  Trajectory traj = make_trajectory(flow, config);
  GaussianStream brownian(config.seed, config.realization, StreamTag::Brownian);
  GaussianStream ou_driver(config.seed, config.realization, StreamTag::OUDriver);

  const double eps = config.epsilon;
  const double inv_eps = 1.0 / eps;
  const double fast_clock = 1.0 / (eps * eps);  // t ↦ t/ε²
  const double fast_dt = config.dt * fast_clock;
  const double noise = std::sqrt(2.0 * config.kappa * config.dt);
  const double drift_dt = config.dt * inv_eps;
  const bool ou = flow.kind == FlowKind::OUShear;

  const auto burn_steps = static_cast<std::size_t>(std::llround(config.burn_in / config.dt));
  const std::size_t stride = config.store_stride;
  const std::size_t steps = config.step_count();

  Vec2 x = config.x0;
  double eta = initial_eta(flow, config);

  auto advance = [&](std::size_t step) {
    const double t = static_cast<double>(step) * config.dt;
    const ModulationState state{eta};
    if (ou) eta = ou_step(eta, flow.alpha, flow.sigma, fast_dt, ou_driver());
    const Vec2 v = velocity<double>(flow, x * inv_eps, t * fast_clock, state);
    const double w1 = brownian();
    const double w2 = brownian();
    x += drift_dt * v + noise * Vec2(w1, w2);
    check_finite(x, eta, step);
  };

  for (std::size_t s = 0; s < burn_steps; ++s) advance(s);

  traj.positions.col(0) = x;
  for (std::size_t s = 0; s < steps; ++s) {
    advance(burn_steps + s);
    if ((s + 1) % stride == 0) traj.positions.col(static_cast<Eigen::Index>((s + 1) / stride)) = x;
  }
  return traj;
}

Trajectory simulate_shear_exact(const FlowSpec& flow, const SimConfig& config) {
  if (!is_shear_family(flow))
    throw UnsupportedFlowError("exact sampler supports only shear-family flows, got " +
                               flow_name(flow.kind));
  validate(flow);
  validate(config);
  if (config.epsilon != 1.0)
    throw ParameterError("exact shear sampler requires epsilon = 1");

  Trajectory traj = make_trajectory(flow, config);
  GaussianStream brownian(config.seed, config.realization, StreamTag::ShearExact);
  GaussianStream ou_driver(config.seed, config.realization, StreamTag::OUDriver);

  const double dt = config.dt;
  const double noise = std::sqrt(2.0 * config.kappa * dt);
  const auto burn_steps = static_cast<std::size_t>(std::llround(config.burn_in / dt));
  const std::size_t stride = config.store_stride;
  const std::size_t steps = config.step_count();

  double x = config.x0.x();
  double y = config.x0.y();
  double eta = initial_eta(flow, config);

  auto advance = [&](std::size_t step) {
    double amplitude = 1.0;
    if (flow.kind == FlowKind::PeriodicShear) {
      amplitude = std::sin(flow.omega * static_cast<double>(step) * dt);
    } else if (flow.kind == FlowKind::OUShear) {
      amplitude = eta;
      eta = ou_step(eta, flow.alpha, flow.sigma, dt, ou_driver());
    }
    const double dw1 = noise * brownian();
    const double dw2 = noise * brownian();
    y += amplitude * std::sin(x) * dt + dw2;
    x += dw1;
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(eta))
      throw BlowupError(step, "non-finite state");
  };

  for (std::size_t s = 0; s < burn_steps; ++s) advance(s);

  traj.positions.col(0) = Vec2(x, y);
  for (std::size_t s = 0; s < steps; ++s) {
    advance(burn_steps + s);
    if ((s + 1) % stride == 0)
      traj.positions.col(static_cast<Eigen::Index>((s + 1) / stride)) = Vec2(x, y);
  }
  return traj;
}

}  // namespace eddy
