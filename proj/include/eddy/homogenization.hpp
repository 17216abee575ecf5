#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "eddy/estimators.hpp"
#include "eddy/fields.hpp"
#include "eddy/krylov.hpp"

namespace eddy {

/// Galerkin solution of the cell problem −(v·∇ + κΔ)χ = v on the 2π-torus,
/// truncated to Fourier modes |k₁|, |k₂| ≤ M.
struct CellSolution {
  /// coefficients[c](k₁ + M, k₂ + M) is χ̂ᶜ(k) for component c ∈ {0, 1}.
  std::array<Eigen::MatrixXcd, 2> coefficients;
  FlowSpec flow;
  double kappa = 0.0;
  int modes = 0;
  double residual = 0.0;  // max relative residual of the two solves
  std::size_t iterations = 0;

  std::complex<double> coefficient(int component, int k1, int k2) const {
    return coefficients[static_cast<std::size_t>(component)](k1 + modes, k2 + modes);
  }
};

struct CellSolverOptions {
  krylov::GmresOptions gmres;
};

/// Throws UnsupportedFlowError for time-dependent flows, ConvergenceError when
/// GMRES stalls above the tolerance. `warm_start`, when given, seeds the
/// iteration with a coarser solution of the same problem.
CellSolution solve_cell_problem(const FlowSpec& flow, double kappa, int modes,
                                const CellSolverOptions& options = {},
                                const CellSolution* warm_start = nullptr);

/// K = κI + κ⟨∇χᵢ·∇χⱼ⟩ evaluated by Parseval on the retained modes.
DiffusivityTensor eddy_diffusivity_from_cell(const CellSolution& solution);

struct RefinementOptions {
  int initial_modes = 16;
  int max_modes = 512;
  double relative_change = 1e-6;
  CellSolverOptions solver;
};

struct RefinedDiffusivity {
  CellSolution solution;
  DiffusivityTensor tensor;
  double relative_change = 0.0;  // between the last two truncations
  bool converged = false;        // false when the mode cap stopped refinement
};

/// Doubles M from `initial_modes` until K changes by less than `relative_change`
/// (max-entry norm) or M reaches `max_modes`.
RefinedDiffusivity refine_eddy_diffusivity(const FlowSpec& flow, double kappa,
                                           const RefinementOptions& options = {});

struct ScalingFit {
  double exponent = 0.0;
  double prefactor = 0.0;
};

/// Least-squares fit of log K = log c + p log κ over (κ, K) pairs.
ScalingFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& samples);

}  // namespace eddy
