#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "eddy/dynamics.hpp"
#include "eddy/fields.hpp"
#include "eddy/harness.hpp"

namespace eddy {

/// Everything a `sweep` or `rescaled` run needs, as read from a config file.
///
///   [flow]        flow, omega, ou_alpha, ou_sigma, cs_lambda
///   [simulation]  kappa, dt, t_final, epsilon, seed, store_stride, x0, y0,
///                 eta0 = stationary | <number>, integrator = em | shear_exact, burn_in
///   [estimation]  estimator (one or a list), delta (one or a list), theta, direction
///   [sweep]       realizations, workers, epsilons, alpha_exponent
///
/// Lists are separated by commas or whitespace. '#' and ';' start comments.
struct ExperimentConfig {
  FlowSpec flow = FlowSpec::steady_shear();
  SimConfig sim;
  std::vector<EstimatorKind> estimators{EstimatorKind::Qv};
  Direction direction;
  std::vector<double> deltas;  // empty: default grid
  double theta = 0.0;
  std::size_t realizations = 1000;
  unsigned workers = 0;
  std::vector<double> epsilons{0.1};
  double alpha_exponent = 1.0;

  std::vector<EstimatorSpec> estimator_specs() const;
  /// `deltas`, or the default grid when none were given.
  std::vector<double> resolved_deltas() const;
};

/// Throws ConfigError on unknown sections or keys, malformed values, or
/// duplicate keys; ParameterError when the assembled flow or simulation is invalid.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

}  // namespace eddy
