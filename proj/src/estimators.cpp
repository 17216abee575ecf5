#include "eddy/estimators.hpp"

#include <cmath>

namespace eddy {

namespace {

using StridedPoints = Eigen::Map<const Path, 0, Eigen::OuterStride<>>;

TensorMeta meta_of(const Trajectory& traj, double delta, double theta, std::size_t n) {
  return {flow_name(traj.flow.kind), traj.config.kappa, delta, theta, n};
}

// Number of full bins of J samples; at least two are needed for one increment.
Eigen::Index full_bins(const ObservationSeries& fine, std::size_t J) {
  const Eigen::Index bins = fine.n_obs() / static_cast<Eigen::Index>(J);
  if (bins < 2)
    throw InsufficientDataError("averaged estimators need at least 2 full bins of " +
                                std::to_string(J) + " samples");
  return bins;
}

}  // namespace

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Qv:
      return "qv";
    case Provenance::Box:
      return "box";
    case Provenance::Shift:
      return "shift";
    case Provenance::Analytic:
      return "analytic";
    case Provenance::Spectral:
      return "spectral";
    case Provenance::Oracle:
      return "oracle";
  }
  return "unknown";
}

std::size_t commensurate_steps(double delta, double dt_stored) {
  if (!(delta > 0.0) || !(dt_stored > 0.0))
    throw CommensurabilityError("sampling interval and stored step must be positive");
  const double ratio = delta / dt_stored;
  const double m = std::round(ratio);
  if (m < 1.0 || std::abs(ratio - m) > 1e-9 * m)
    throw CommensurabilityError("delta = " + std::to_string(delta) +
                                " is not an integer multiple of dt_stored = " +
                                std::to_string(dt_stored));
  return static_cast<std::size_t>(m);
}

ObservationSeries as_series(const Trajectory& traj) {
  return {traj.positions, traj.dt_stored, 0.0};
}

ObservationSeries subsample(const Trajectory& traj, double delta) {
  const std::size_t m = commensurate_steps(delta, traj.dt_stored);
  const Eigen::Index stride = static_cast<Eigen::Index>(m);
  if (traj.size() < stride + 1)
    throw InsufficientDataError("trajectory shorter than one sampling interval");
  const Eigen::Index count = (traj.size() - 1) / stride + 1;
  ObservationSeries series;
  series.delta = delta;
  series.positions =
      StridedPoints(traj.positions.data(), 2, count, Eigen::OuterStride<>(2 * stride));
  return series;
}

ObservationSeries add_observation_noise(const ObservationSeries& series, double theta,
                                        GaussianStream& stream) {
  if (!(theta >= 0.0)) throw ParameterError("observation noise theta must be >= 0");
  ObservationSeries noisy = series;
  noisy.theta = theta;
  if (theta == 0.0) return noisy;
  for (Eigen::Index i = 0; i < noisy.positions.cols(); ++i) {
    noisy.positions(0, i) += theta * stream();
    noisy.positions(1, i) += theta * stream();
  }
  return noisy;
}

ObservationSeries add_observation_noise(const ObservationSeries& series, double theta,
                                        std::uint64_t noise_seed, std::uint64_t realization) {
  GaussianStream stream(noise_seed, realization, StreamTag::ObservationNoise);
  return add_observation_noise(series, theta, stream);
}

DiffusivityTensor qv_estimate(const ObservationSeries& series) {
  if (series.n_obs() < 2) throw InsufficientDataError("qv estimate needs at least 2 observations");
  DiffusivityTensor k;
  k.entries = quadratic_variation(series.positions, series.delta);
  k.provenance = Provenance::Qv;
  k.meta.delta = series.delta;
  k.meta.theta = series.theta;
  k.meta.n = static_cast<std::size_t>(series.n_obs() - 1);
  return k;
}

DiffusivityTensor box_estimate(const ObservationSeries& fine, double delta) {
  const std::size_t J = commensurate_steps(delta, fine.delta);
  const Eigen::Index bins = full_bins(fine, J);
  const auto width = static_cast<Eigen::Index>(J);

  Path means(2, bins);
  for (Eigen::Index b = 0; b < bins; ++b) {
    double m1 = fine.positions(0, b * width);
    double m2 = fine.positions(1, b * width);
    for (Eigen::Index j = 1; j < width; ++j) {
      m1 += fine.positions(0, b * width + j);
      m2 += fine.positions(1, b * width + j);
    }
    means(0, b) = m1 / static_cast<double>(J);
    means(1, b) = m2 / static_cast<double>(J);
  }

  DiffusivityTensor k;
  k.entries = quadratic_variation(means, delta);
  k.provenance = Provenance::Box;
  k.meta.delta = delta;
  k.meta.theta = fine.theta;
  k.meta.n = static_cast<std::size_t>(bins - 1);
  return k;
}

DiffusivityTensor shift_estimate(const ObservationSeries& fine, double delta) {
  const std::size_t J = commensurate_steps(delta, fine.delta);
  const Eigen::Index bins = full_bins(fine, J);
  const auto width = static_cast<Eigen::Index>(J);

  auto offset_grid = [&](Eigen::Index j) {
    return StridedPoints(fine.positions.data() + 2 * j, 2, bins, Eigen::OuterStride<>(2 * width));
  };
  Mat2 sum = quadratic_variation(offset_grid(0), delta);
  for (Eigen::Index j = 1; j < width; ++j) sum += quadratic_variation(offset_grid(j), delta);

  DiffusivityTensor k;
  k.entries = sum / static_cast<double>(J);
  k.provenance = Provenance::Shift;
  k.meta.delta = delta;
  k.meta.theta = fine.theta;
  k.meta.n = static_cast<std::size_t>(bins - 1);
  return k;
}

DiffusivityTensor box_estimate(const Trajectory& traj, double delta) {
  DiffusivityTensor k = box_estimate(as_series(traj), delta);
  k.meta = meta_of(traj, delta, 0.0, k.meta.n);
  return k;
}

DiffusivityTensor shift_estimate(const Trajectory& traj, double delta) {
  DiffusivityTensor k = shift_estimate(as_series(traj), delta);
  k.meta = meta_of(traj, delta, 0.0, k.meta.n);
  return k;
}

}  // namespace eddy
