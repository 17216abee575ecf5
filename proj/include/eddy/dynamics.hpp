#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "eddy/fields.hpp"
#include "eddy/random.hpp"
#include "eddy/types.hpp"

namespace eddy {

enum class Integrator { EulerMaruyama, ShearExact };

std::string integrator_name(Integrator integrator);
Integrator parse_integrator(std::string_view name);

/// Knobs of one trajectory integration of
///   dx = (1/ε) v(x/ε, t/ε²) dt + √(2κ) dW.
/// ε = 1 is the unrescaled Lagrangian SDE.
struct SimConfig {
  double kappa = 0.1;
  double dt = 1e-3;
  double t_final = 1000.0;
  double epsilon = 1.0;
  Vec2 x0 = Vec2::Zero();
  std::optional<double> eta0;  // empty: draw from the stationary OU law
  std::uint64_t seed = 0;
  std::uint64_t realization = 0;
  std::size_t store_stride = 1;
  double burn_in = 0.0;  // time integrated before the first stored sample
  Integrator integrator = Integrator::EulerMaruyama;

  /// Number of stored samples, floor(T / (k·dt)) + 1.
  std::size_t stored_count() const;
  std::size_t step_count() const { return (stored_count() - 1) * store_stride; }
  double dt_stored() const { return dt * static_cast<double>(store_stride); }
};

/// Throws ParameterError on any violated invariant, including dt > ε²/50 for ε < 1.
void validate(const SimConfig& config);

/// Uniformly sampled planar path; column i is the position at time i·dt_stored.
struct Trajectory {
  Path positions;
  double dt_stored = 0.0;
  FlowSpec flow;
  SimConfig config;

  Eigen::Index size() const { return positions.cols(); }
  double duration() const { return dt_stored * static_cast<double>(size() - 1); }
};

/// Dispatches on `config.integrator`.
Trajectory simulate(const FlowSpec& flow, const SimConfig& config);

/// Euler–Maruyama integration. For OU-modulated flows η takes its exact
/// transition over the step first; the position step uses the start-of-step η.
Trajectory simulate_em(const FlowSpec& flow, const SimConfig& config);

/// Shear-family sampler with exact Gaussian x-increments and left-endpoint
/// quadrature of ∫ η(s) sin(x(s)) ds for the y-drift. Requires ε = 1.
Trajectory simulate_shear_exact(const FlowSpec& flow, const SimConfig& config);

/// Exact transition of dη = −αη dt + √(2σ) dβ over `dt` given a standard normal draw.
double ou_step(double eta, double alpha, double sigma, double dt, double gaussian);

/// N(0, σ/α) draw.
double stationary_eta_draw(double alpha, double sigma, GaussianStream& stream);

}  // namespace eddy
