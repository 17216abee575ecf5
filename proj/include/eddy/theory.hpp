#pragma once

#include <cstddef>

#include "eddy/fields.hpp"

namespace eddy::theory {

// Closed-form diffusivities along the shear direction and expectation oracles.

/// K = κ + 1/(2κ) for v = (0, sin x).
double k_shear(double kappa);

/// Two candidate values for v = (0, sin x sin ωt):
///   Printed:          κ + 1/(4(ω + κ²))
///   FigureConsistent: κ + κ/(4(ω² + κ²))
/// Neither is preferred; `adjudicate_periodic_shear` in the harness decides from data.
enum class PeriodicShearFormula { Printed, FigureConsistent };
double k_periodic_shear(double kappa, double omega,
                        PeriodicShearFormula formula = PeriodicShearFormula::Printed);

/// K = κ + σ/(2(κ+α)α) for the OU-modulated shear.
double k_ou_shear(double kappa, double alpha, double sigma);

/// Closed-form reference along the shear direction for any shear-family flow.
/// Periodic shear needs an explicit formula choice.
double k_shear_family(const FlowSpec& flow, double kappa, PeriodicShearFormula formula);

/// Expected 22-entry of the quadratic-variation estimator for v = (0, sin x),
/// x(0) = 0, with N increments of length δ (T = Nδ). Stable across κδ ∈ [1e-12, 1e6].
double qv_expectation_shear(double kappa, std::size_t n, double delta);

/// Limit of κ^{-ε}(E K_{N,δ} − K) when δ = κ^{−2−ε}: −1/2 − 1/(8N).
double subsample_bias_limit_shear(std::size_t n);

/// Exact expectation of one diagonal entry of the box-averaged estimator applied
/// to Brownian motion with Var x(t) = 2κt, bins of J samples spaced δ/J.
double bm_box_expectation(double kappa, double delta, std::size_t J);

}  // namespace eddy::theory
