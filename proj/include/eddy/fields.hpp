#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "eddy/error.hpp"
#include "eddy/types.hpp"

namespace eddy {

// Catalog of 2π-periodic, divergence-free, mean-zero planar velocity fields.
// All fields are written as v = ∇⊥ψ = (−∂ψ/∂y, ∂ψ/∂x) times an optional
// scalar modulation η(t).

enum class FlowKind { SteadyShear, PeriodicShear, OUShear, TaylorGreen, ChildressSoward };

struct FlowSpec {
  FlowKind kind = FlowKind::SteadyShear;
  double omega = 1.0;   // PeriodicShear: modulation sin(ω t)
  double alpha = 1.0;   // OUShear: reversion rate
  double sigma = 0.1;   // OUShear: noise intensity, stationary variance σ/α
  double lambda = 0.0;  // ChildressSoward: cos x cos y weight

  static FlowSpec steady_shear() { return {FlowKind::SteadyShear}; }
  static FlowSpec periodic_shear(double omega) {
    FlowSpec f{FlowKind::PeriodicShear};
    f.omega = omega;
    return f;
  }
  static FlowSpec ou_shear(double alpha, double sigma) {
    FlowSpec f{FlowKind::OUShear};
    f.alpha = alpha;
    f.sigma = sigma;
    return f;
  }
  static FlowSpec taylor_green() { return {FlowKind::TaylorGreen}; }
  static FlowSpec childress_soward(double lambda) {
    FlowSpec f{FlowKind::ChildressSoward};
    f.lambda = lambda;
    return f;
  }
};

/// Amplitude η(t) of modulated flows; 1 for time-independent ones.
struct ModulationState {
  double eta = 1.0;
};

/// Config/CLI spelling: shear | periodic_shear | ou_shear | taylor_green | childress_soward.
std::string flow_name(FlowKind kind);
FlowKind parse_flow_kind(std::string_view name);

/// Throws ParameterError when the parameters relevant to `flow.kind` are out of range.
void validate(const FlowSpec& flow);

inline bool is_shear_family(const FlowSpec& flow) {
  return flow.kind == FlowKind::SteadyShear || flow.kind == FlowKind::PeriodicShear ||
         flow.kind == FlowKind::OUShear;
}

inline bool is_time_dependent(const FlowSpec& flow) {
  return flow.kind == FlowKind::PeriodicShear || flow.kind == FlowKind::OUShear;
}

namespace detail {

// Scalar amplitude multiplying the spatial factor at time t.
inline double modulation(const FlowSpec& flow, double time, const ModulationState& state) {
  switch (flow.kind) {
    case FlowKind::PeriodicShear:
      return std::sin(flow.omega * time);
    case FlowKind::OUShear:
      return state.eta;
    default:
      return 1.0;
  }
}

}  // namespace detail

/// Velocity at `position` and `time`. Templated on the scalar so oracles can
/// evaluate in extended precision; the modulation is always double.
template <typename Scalar>
Vector2<Scalar> velocity(const FlowSpec& flow, const Vector2<Scalar>& position, double time,
                         const ModulationState& state) {
  using std::cos;
  using std::sin;
  const Scalar x = position.x();
  const Scalar y = position.y();
  switch (flow.kind) {
    case FlowKind::SteadyShear:
    case FlowKind::PeriodicShear:
    case FlowKind::OUShear: {
      const Scalar eta = static_cast<Scalar>(detail::modulation(flow, time, state));
      return {Scalar(0), eta * sin(x)};
    }
    case FlowKind::TaylorGreen:
    case FlowKind::ChildressSoward: {
      const Scalar lam = flow.kind == FlowKind::TaylorGreen ? Scalar(0) : Scalar(flow.lambda);
      const Scalar sx = sin(x), cx = cos(x), sy = sin(y), cy = cos(y);
      // ψ = sin x sin y + λ cos x cos y
      return {-(sx * cy) + lam * (cx * sy), cx * sy - lam * (sx * cy)};
    }
  }
  throw UnsupportedFlowError("unknown flow kind");
}

/// Jacobian ∂v_i/∂x_j of the velocity.
template <typename Scalar>
Matrix2<Scalar> velocity_gradient(const FlowSpec& flow, const Vector2<Scalar>& position,
                                  double time, const ModulationState& state) {
  using std::cos;
  using std::sin;
  const Scalar x = position.x();
  const Scalar y = position.y();
  Matrix2<Scalar> grad = Matrix2<Scalar>::Zero();
  switch (flow.kind) {
    case FlowKind::SteadyShear:
    case FlowKind::PeriodicShear:
    case FlowKind::OUShear: {
      const Scalar eta = static_cast<Scalar>(detail::modulation(flow, time, state));
      grad(1, 0) = eta * cos(x);
      return grad;
    }
    case FlowKind::TaylorGreen:
    case FlowKind::ChildressSoward: {
      const Scalar lam = flow.kind == FlowKind::TaylorGreen ? Scalar(0) : Scalar(flow.lambda);
      const Scalar sx = sin(x), cx = cos(x), sy = sin(y), cy = cos(y);
      const Scalar cc = cx * cy;
      const Scalar ss = sx * sy;
      grad(0, 0) = -cc - lam * ss;
      grad(0, 1) = ss + lam * cc;
      grad(1, 0) = -ss - lam * cc;
      grad(1, 1) = cc + lam * ss;
      return grad;
    }
  }
  throw UnsupportedFlowError("unknown flow kind");
}

/// Analytic divergence ∂₁v₁ + ∂₂v₂; identically zero for the catalog.
double divergence(const FlowSpec& flow, const Vec2& position, double time,
                  const ModulationState& state);

/// One Fourier mode of the spatial factor: v(x) ∋ amplitude · exp(i k·x).
struct VelocityMode {
  int k1 = 0;
  int k2 = 0;
  std::complex<double> v1;
  std::complex<double> v2;
};

/// Exact Fourier expansion of the time-independent spatial factor of `flow`,
/// derived from its stream function. Shear-family flows return the sin(x) profile.
std::vector<VelocityMode> velocity_modes(const FlowSpec& flow);

/// Cell average over [0,2π]² of the spatial factor, read off the k = 0 mode.
Vec2 spatial_mean(const FlowSpec& flow);

}  // namespace eddy
