#include "eddy/theory.hpp"

#include <cmath>

#include "eddy/error.hpp"

namespace eddy::theory {

namespace {

void require_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ParameterError("kappa must be positive");
}

// g(x) = (2/3)e^{−x} − (1/6)e^{−4x} − 1/2, which vanishes like −x² at 0.
double shear_correction_factor(double x) {
  if (x < 1e-2) {
    // Σ_{n≥2} (−x)^n/n! · (2/3 − 4^n/6)
    double term = 1.0;  // (−x)^n / n!
    double pow4 = 1.0;
    double sum = 0.0;
    for (int n = 1; n <= 12; ++n) {
      term *= -x / n;
      pow4 *= 4.0;
      if (n >= 2) sum += term * (2.0 / 3.0 - pow4 / 6.0);
    }
    return sum;
  }
  return (2.0 / 3.0) * std::expm1(-x) - (1.0 / 6.0) * std::expm1(-4.0 * x);
}

}  // namespace

double k_shear(double kappa) {
  require_kappa(kappa);
  return kappa + 1.0 / (2.0 * kappa);
}

double k_periodic_shear(double kappa, double omega, PeriodicShearFormula formula) {
  require_kappa(kappa);
  if (!(omega > 0.0)) throw ParameterError("omega must be positive");
  if (formula == PeriodicShearFormula::Printed) return kappa + 1.0 / (4.0 * (omega + kappa * kappa));
  return kappa + kappa / (4.0 * (omega * omega + kappa * kappa));
}

double k_ou_shear(double kappa, double alpha, double sigma) {
  require_kappa(kappa);
  if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
  if (!(sigma >= 0.0)) throw ParameterError("sigma must be non-negative");
  return kappa + sigma / (2.0 * (kappa + alpha) * alpha);
}

double k_shear_family(const FlowSpec& flow, double kappa, PeriodicShearFormula formula) {
  switch (flow.kind) {
    case FlowKind::SteadyShear:
      return k_shear(kappa);
    case FlowKind::PeriodicShear:
      return k_periodic_shear(kappa, flow.omega, formula);
    case FlowKind::OUShear:
      return k_ou_shear(kappa, flow.alpha, flow.sigma);
    default:
      throw UnsupportedFlowError("no closed-form diffusivity for " + flow_name(flow.kind));
  }
}

double qv_expectation_shear(double kappa, std::size_t n, double delta) {
  require_kappa(kappa);
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError("delta must be positive");
  if (n < 1) throw ParameterError("N must be at least 1");

  const double big_t = static_cast<double>(n) * delta;
  const double kd = kappa * delta;
  const double k2 = kappa * kappa;

  const double second = std::expm1(-kd) / (2.0 * k2 * delta);
  // (1 − e^{−4κT}) / (1 − e^{−4κδ}); both expm1 calls keep full relative accuracy.
  const double ratio = std::expm1(-4.0 * kappa * big_t) / std::expm1(-4.0 * kd);
  const double third = shear_correction_factor(kd) * ratio / (4.0 * k2 * big_t);
  return k_shear(kappa) + second + third;
}

double subsample_bias_limit_shear(std::size_t n) {
  if (n < 1) throw ParameterError("N must be at least 1");
  return -0.5 - 1.0 / (8.0 * static_cast<double>(n));
}

double bm_box_expectation(double kappa, double delta, std::size_t J) {
  require_kappa(kappa);
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  if (J < 1) throw ParameterError("J must be at least 1");

  // D = (1/J) Σ_j Δ_j with Δ_j = x(t_j + δ) − x(t_j) and
  // Cov(Δ_j, Δ_k) = 2κ(δ − |j−k|Δt), Δt = δ/J. Each covariance divided by 2δ
  // is κ(1 − |j−k|/J), so δ drops out and J = 1 returns κ exactly.
  const double jj = static_cast<double>(J);
  double weight = 0.0;
  for (std::size_t lag = 0; lag < J; ++lag) {
    const double pairs = lag == 0 ? jj : 2.0 * static_cast<double>(J - lag);
    weight += pairs * (1.0 - static_cast<double>(lag) / jj);
  }
  return kappa * (weight / (jj * jj));
}

}  // namespace eddy::theory
