#include "eddy/fields.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace eddy {

std::string flow_name(FlowKind kind) {
  switch (kind) {
    case FlowKind::SteadyShear:
      return "shear";
    case FlowKind::PeriodicShear:
      return "periodic_shear";
    case FlowKind::OUShear:
      return "ou_shear";
    case FlowKind::TaylorGreen:
      return "taylor_green";
    case FlowKind::ChildressSoward:
      return "childress_soward";
  }
  return "unknown";
}

FlowKind parse_flow_kind(std::string_view name) {
  if (name == "shear") return FlowKind::SteadyShear;
  if (name == "periodic_shear") return FlowKind::PeriodicShear;
  if (name == "ou_shear") return FlowKind::OUShear;
  if (name == "taylor_green") return FlowKind::TaylorGreen;
  if (name == "childress_soward") return FlowKind::ChildressSoward;
  throw ConfigError("unknown flow '" + std::string(name) + "'");
}

void validate(const FlowSpec& flow) {
  switch (flow.kind) {
    case FlowKind::PeriodicShear:
      if (!(flow.omega > 0.0) || !std::isfinite(flow.omega))
        throw ParameterError("periodic shear requires omega > 0");
      break;
    case FlowKind::OUShear:
      if (!(flow.alpha > 0.0) || !std::isfinite(flow.alpha))
        throw ParameterError("OU shear requires alpha > 0");
      if (!(flow.sigma >= 0.0) || !std::isfinite(flow.sigma))
        throw ParameterError("OU shear requires sigma >= 0");
      break;
    case FlowKind::ChildressSoward:
      if (!(flow.lambda >= 0.0 && flow.lambda <= 1.0))
        throw ParameterError("Childress-Soward requires lambda in [0,1]");
      break;
    default:
      break;
  }
}

double divergence(const FlowSpec& flow, const Vec2& position, double time,
                  const ModulationState& state) {
  validate(flow);
  return velocity_gradient<double>(flow, position, time, state).trace();
}

std::vector<VelocityMode> velocity_modes(const FlowSpec& flow) {
  validate(flow);
  // Stream-function coefficients ψ̂(k); v̂ = (−i k₂ ψ̂, i k₁ ψ̂).
  std::map<std::pair<int, int>, double> psi;
  if (is_shear_family(flow)) {
    // ψ = −cos x
    psi[{1, 0}] = -0.5;
    psi[{-1, 0}] = -0.5;
  } else {
    const double lam = flow.kind == FlowKind::TaylorGreen ? 0.0 : flow.lambda;
    for (int a : {1, -1}) {
      for (int b : {1, -1}) {
        // sin x sin y = −¼ Σ ab e^{i(ax+by)},  cos x cos y = ¼ Σ e^{i(ax+by)}
        psi[{a, b}] = (-a * b + lam) / 4.0;
      }
    }
  }
  const std::complex<double> I(0.0, 1.0);
  std::vector<VelocityMode> modes;
  for (const auto& [k, c] : psi) {
    if (c == 0.0) continue;
    modes.push_back({k.first, k.second, -I * double(k.second) * c, I * double(k.first) * c});
  }
  return modes;
}

Vec2 spatial_mean(const FlowSpec& flow) {
  Vec2 mean = Vec2::Zero();
  for (const auto& m : velocity_modes(flow)) {
    if (m.k1 == 0 && m.k2 == 0) mean += Vec2(m.v1.real(), m.v2.real());
  }
  return mean;
}

}  // namespace eddy
