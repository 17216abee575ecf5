#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "eddy/dynamics.hpp"
#include "eddy/error.hpp"
#include "eddy/estimators.hpp"
#include "eddy/fields.hpp"
#include "eddy/types.hpp"

namespace eddy {

enum class EstimatorKind { Qv, Box, Shift };

std::string estimator_name(EstimatorKind kind);
EstimatorKind parse_estimator(std::string_view name);

/// Which scalar is read off an estimated tensor: K₁₁, K₂₂ or ξ·Kξ.
/// ξ is used as given, without normalization.
struct Direction {
  enum class Kind { X, Y, Xi };
  Kind kind = Kind::Y;
  Vec2 xi = Vec2(0.0, 1.0);

  static Direction x() { return {Kind::X, Vec2(1.0, 0.0)}; }
  static Direction y() { return {Kind::Y, Vec2(0.0, 1.0)}; }
  static Direction along(const Vec2& xi) { return {Kind::Xi, xi}; }

  double read(const Mat2& k) const;
};

/// "x", "y" or "xi:<a>,<b>".
Direction parse_direction(std::string_view text);
std::string direction_name(const Direction& d);

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::Qv;
  Direction direction;  // shear direction by default
};

/// One CSV row: ensemble statistics of a single estimator at a single δ.
struct SweepRow {
  std::string flow;
  double kappa = 0.0;
  double epsilon = 1.0;
  double theta = 0.0;
  double delta = 0.0;
  std::string estimator;
  std::string direction;
  double mean = 0.0;
  double std_dev = 0.0;
  double std_error = 0.0;  // std_dev / √M
  std::size_t realizations = 0;
  double t_final = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
};

struct RunOptions {
  unsigned workers = 0;  // 0: hardware concurrency
};

/// Estimator pipeline on one trajectory: subsample, then optional noise, then the
/// estimator. Noise for box and shift is added at full resolution, since those
/// estimators consume every stored sample.
DiffusivityTensor estimate(const Trajectory& traj, EstimatorKind kind, double delta, double theta);

/// M independent realizations of `config` (realization index 0..M−1 under the
/// master seed `config.seed`), one estimate each, reduced in index order.
SweepRow run_ensemble(const FlowSpec& flow, const SimConfig& config, const EstimatorSpec& spec,
                      double delta, double theta, std::size_t m, const RunOptions& options = {});

/// Every realization is simulated once and analysed at every δ and with every
/// estimator, so rows share trajectories. Rows are ordered estimator-major.
SweepReport delta_sweep(const FlowSpec& flow, const SimConfig& config,
                        const std::vector<EstimatorSpec>& specs, const std::vector<double>& deltas,
                        double theta, std::size_t m, const RunOptions& options = {});
SweepReport delta_sweep(const FlowSpec& flow, const SimConfig& config, const EstimatorSpec& spec,
                        const std::vector<double>& deltas, double theta, std::size_t m,
                        const RunOptions& options = {});

/// For each ε, simulates the rescaled dynamics up to `config.t_final` and
/// estimates at δ = ε^α. All dt constraints are checked before anything runs.
SweepReport rescaled_study(const FlowSpec& flow, const SimConfig& config, const EstimatorSpec& spec,
                           const std::vector<double>& epsilons, double alpha_exponent,
                           std::size_t m, const RunOptions& options = {});

/// {0.01, 0.03, 0.1, …, 100} restricted to values commensurate with dt_stored
/// that leave at least 2 increments before t_final.
std::vector<double> default_delta_grid(double dt_stored, double t_final);

/// Failure inside one realization, with the index attached.
class RealizationError : public NumericalError {
 public:
  RealizationError(std::size_t realization, const std::string& what)
      : NumericalError("realization " + std::to_string(realization) + ": " + what),
        realization_(realization) {}
  std::size_t realization() const noexcept { return realization_; }

 private:
  std::size_t realization_;
};

std::string csv_header();
std::string csv_row(const SweepRow& row);
void write_csv(std::ostream& out, const SweepReport& report, bool header = true);

/// Plateau of a periodic-shear sweep compared with the two closed-form candidates.
struct PeriodicShearVerdict {
  double plateau = 0.0;
  double plateau_stderr = 0.0;
  std::vector<double> plateau_deltas;
  double printed = 0.0;             // κ + 1/(4(ω + κ²))
  double figure_consistent = 0.0;   // κ + κ/(4(ω² + κ²))
  double printed_rel_error = 0.0;
  double figure_rel_error = 0.0;
  bool printed_within = false;
  bool figure_within = false;
  std::string verdict;  // "figure_consistent", "printed", "both" or "neither"
  std::string report;   // human-readable discrepancy report
};

/// The plateau is the inverse-variance weighted mean of the qv rows along y with
/// κδ ≥ `min_kappa_delta`. A candidate is accepted when the plateau lies within
/// `tolerance` (relative) of it.
PeriodicShearVerdict adjudicate_periodic_shear(const SweepReport& report, double kappa,
                                               double omega, double min_kappa_delta = 3.0,
                                               double tolerance = 0.25);

}  // namespace eddy
