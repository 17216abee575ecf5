#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "eddy/dynamics.hpp"
#include "eddy/error.hpp"
#include "eddy/random.hpp"
#include "eddy/types.hpp"

namespace eddy {

/// Observed positions at a uniform sampling interval, possibly noise-corrupted.
struct ObservationSeries {
  Path positions;
  double delta = 0.0;
  double theta = 0.0;

  Eigen::Index n_obs() const { return positions.cols(); }
};

enum class Provenance { Qv, Box, Shift, Analytic, Spectral, Oracle };

std::string provenance_name(Provenance p);

struct TensorMeta {
  std::string flow;
  double kappa = 0.0;
  double delta = 0.0;
  double theta = 0.0;
  std::size_t n = 0;  // number of increments entering the estimate
};

/// Symmetric 2×2 eddy-diffusivity estimate or reference value.
struct DiffusivityTensor {
  Mat2 entries = Mat2::Zero();
  Provenance provenance = Provenance::Qv;
  TensorMeta meta;
};

/// ξ·Kξ.
inline double project(const Mat2& k, const Vec2& xi) { return xi.dot(k * xi); }
inline double project(const DiffusivityTensor& k, const Vec2& xi) { return project(k.entries, xi); }

/// Integer m with delta = m·dt_stored; throws CommensurabilityError otherwise.
std::size_t commensurate_steps(double delta, double dt_stored);

/// (1/(2Nδ)) Σ (x_{n+1} − x_n)(x_{n+1} − x_n)ᵀ over the N+1 columns of `points`.
/// Accepts any 2×n Eigen expression, including strided maps.
template <typename Derived>
Mat2 quadratic_variation(const Eigen::MatrixBase<Derived>& points, double delta) {
  const Eigen::Index n = points.cols() - 1;
  if (n < 1) throw InsufficientDataError("quadratic variation needs at least 2 points");
  double s11 = 0.0, s12 = 0.0, s22 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d1 = points(0, i + 1) - points(0, i);
    const double d2 = points(1, i + 1) - points(1, i);
    s11 += d1 * d1;
    s12 += d1 * d2;
    s22 += d2 * d2;
  }
  const double scale = 2.0 * static_cast<double>(n) * delta;
  Mat2 k;
  k << s11 / scale, s12 / scale, s12 / scale, s22 / scale;
  return k;
}

/// Keeps samples 0, m, 2m, … with δ = m·dt_stored; the trailing remainder is dropped.
ObservationSeries subsample(const Trajectory& traj, double delta);

/// Adds independent N(0, θ²) errors to every coordinate of every observation.
ObservationSeries add_observation_noise(const ObservationSeries& series, double theta,
                                        GaussianStream& stream);
ObservationSeries add_observation_noise(const ObservationSeries& series, double theta,
                                        std::uint64_t noise_seed, std::uint64_t realization = 0);

DiffusivityTensor qv_estimate(const ObservationSeries& series);

/// Box-averaged estimator: bins of J = δ/Δt consecutive observations are replaced
/// by their means before forming the quadratic variation, normalized by 2 N_B δ
/// where N_B is the number of consecutive full-bin pairs.
DiffusivityTensor box_estimate(const ObservationSeries& fine, double delta);
DiffusivityTensor box_estimate(const Trajectory& traj, double delta);

/// Shift-averaged estimator: mean over the J offset δ-grids of the quadratic variation.
DiffusivityTensor shift_estimate(const ObservationSeries& fine, double delta);
DiffusivityTensor shift_estimate(const Trajectory& traj, double delta);

/// Full-resolution view of a trajectory as an observation series (δ = dt_stored).
ObservationSeries as_series(const Trajectory& traj);

}  // namespace eddy
