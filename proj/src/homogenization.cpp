#include "eddy/homogenization.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include <Eigen/QR>

#include "eddy/error.hpp"

namespace eddy {

namespace {

using ComplexVector = Eigen::VectorXcd;
using ConstRef = Eigen::Ref<const ComplexVector>;

// Mode-space discretization of −(v·∇ + κΔ) restricted to the modes reachable
// from the right-hand side. Any mode outside that set couples only to other
// such modes and carries zero forcing, so its coefficient vanishes. The zero
// mode is pinned to 0 and never enters the unknowns.
class CellOperator {
 public:
  CellOperator(const std::vector<VelocityMode>& flow_modes, double kappa, int modes)
      : modes_(modes), side_(2 * modes + 1) {
    index_.setConstant(side_, side_, -1);

    std::deque<std::pair<int, int>> frontier;
    auto visit = [&](int k1, int k2) {
      if (std::abs(k1) > modes_ || std::abs(k2) > modes_ || (k1 == 0 && k2 == 0)) return;
      int& slot = index_(k1 + modes_, k2 + modes_);
      if (slot >= 0) return;
      slot = static_cast<int>(wavenumbers_.size());
      wavenumbers_.emplace_back(k1, k2);
      frontier.emplace_back(k1, k2);
    };
    for (const auto& p : flow_modes) visit(p.k1, p.k2);
    while (!frontier.empty()) {
      const auto [k1, k2] = frontier.front();
      frontier.pop_front();
      for (const auto& p : flow_modes) visit(k1 + p.k1, k2 + p.k2);
    }

    const Eigen::Index n = size();
    const auto stencil = static_cast<Eigen::Index>(flow_modes.size());
    diagonal_.resize(n);
    neighbors_.setConstant(stencil, n, -1);
    couplings_.setZero(stencil, n);
    rhs_[0].setZero(n);
    rhs_[1].setZero(n);

    const std::complex<double> I(0.0, 1.0);
    for (Eigen::Index row = 0; row < n; ++row) {
      const auto [k1, k2] = wavenumbers_[static_cast<std::size_t>(row)];
      diagonal_(row) = kappa * double(k1 * k1 + k2 * k2);
      for (Eigen::Index s = 0; s < stencil; ++s) {
        const auto& p = flow_modes[static_cast<std::size_t>(s)];
        // −(v·∇χ)^(k) = −Σ_p v̂(p)·i(k−p) χ̂(k−p)
        const int q1 = k1 - p.k1;
        const int q2 = k2 - p.k2;
        const int col = lookup(q1, q2);
        if (col >= 0) {
          neighbors_(s, row) = col;
          couplings_(s, row) = -(p.v1 * I * double(q1) + p.v2 * I * double(q2));
        }
        if (p.k1 == k1 && p.k2 == k2) {
          rhs_[0](row) = p.v1;
          rhs_[1](row) = p.v2;
        }
      }
    }
  }

  Eigen::Index size() const { return static_cast<Eigen::Index>(wavenumbers_.size()); }
  const ComplexVector& rhs(int component) const { return rhs_[static_cast<std::size_t>(component)]; }
  const std::vector<std::pair<int, int>>& wavenumbers() const { return wavenumbers_; }

  int lookup(int k1, int k2) const {
    if (std::abs(k1) > modes_ || std::abs(k2) > modes_) return -1;
    return index_(k1 + modes_, k2 + modes_);
  }

  void apply(const ConstRef& in, ComplexVector& out) const {
    out.resize(in.size());
    for (Eigen::Index row = 0; row < in.size(); ++row) {
      std::complex<double> acc = diagonal_(row) * in(row);
      for (Eigen::Index s = 0; s < neighbors_.rows(); ++s) {
        const int col = neighbors_(s, row);
        if (col >= 0) acc += couplings_(s, row) * in(col);
      }
      out(row) = acc;
    }
  }

  // Inverse of the diffusive part κ|k|².
  void precondition(const ConstRef& in, ComplexVector& out) const {
    out = in.cwiseQuotient(diagonal_.cast<std::complex<double>>());
  }

 private:
  int modes_;
  int side_;
  Eigen::MatrixXi index_;
  std::vector<std::pair<int, int>> wavenumbers_;
  Eigen::VectorXd diagonal_;
  Eigen::MatrixXi neighbors_;  // stencil × unknowns
  Eigen::MatrixXcd couplings_;
  std::array<ComplexVector, 2> rhs_;
};

double max_entry_change(const Mat2& a, const Mat2& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

}  // namespace

CellSolution solve_cell_problem(const FlowSpec& flow, double kappa, int modes,
                                const CellSolverOptions& options, const CellSolution* warm_start) {
  if (is_time_dependent(flow))
    throw UnsupportedFlowError("spectral cell problem needs a time-independent flow, got " +
                               flow_name(flow.kind));
  validate(flow);
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ParameterError("kappa must be positive");
  if (modes < 4) throw ParameterError("cell problem needs at least 4 modes per direction");

  const CellOperator op(velocity_modes(flow), kappa, modes);

  CellSolution solution;
  solution.flow = flow;
  solution.kappa = kappa;
  solution.modes = modes;
  const Eigen::Index side = 2 * modes + 1;

  for (int c = 0; c < 2; ++c) {
    ComplexVector x = ComplexVector::Zero(op.size());
    if (warm_start != nullptr && warm_start->modes <= modes) {
      const auto& wn = op.wavenumbers();
      for (std::size_t i = 0; i < wn.size(); ++i) {
        const auto [k1, k2] = wn[i];
        if (std::abs(k1) <= warm_start->modes && std::abs(k2) <= warm_start->modes)
          x(static_cast<Eigen::Index>(i)) = warm_start->coefficient(c, k1, k2);
      }
    }
    const auto result = krylov::gmres<std::complex<double>>(
        [&](const ConstRef& in, ComplexVector& out) { op.apply(in, out); },
        [&](const ConstRef& in, ComplexVector& out) { op.precondition(in, out); }, op.rhs(c), x,
        options.gmres);
    if (!result.converged)
      throw ConvergenceError(result.relative_residual,
                             "cell problem GMRES did not converge within " +
                                 std::to_string(result.iterations) + " iterations");
    solution.residual = std::max(solution.residual, result.relative_residual);
    solution.iterations += result.iterations;

    auto& grid = solution.coefficients[static_cast<std::size_t>(c)];
    grid.setZero(side, side);
    const auto& wn = op.wavenumbers();
    for (std::size_t i = 0; i < wn.size(); ++i)
      grid(wn[i].first + modes, wn[i].second + modes) = x(static_cast<Eigen::Index>(i));
  }
  return solution;
}

DiffusivityTensor eddy_diffusivity_from_cell(const CellSolution& solution) {
  const int m = solution.modes;
  double g11 = 0.0, g12 = 0.0, g22 = 0.0;
  for (int k1 = -m; k1 <= m; ++k1) {
    for (int k2 = -m; k2 <= m; ++k2) {
      const double k_sq = double(k1 * k1 + k2 * k2);
      if (k_sq == 0.0) continue;
      const std::complex<double> a = solution.coefficient(0, k1, k2);
      const std::complex<double> b = solution.coefficient(1, k1, k2);
      g11 += k_sq * std::norm(a);
      g22 += k_sq * std::norm(b);
      g12 += k_sq * (a.real() * b.real() + a.imag() * b.imag());
    }
  }
  const double kappa = solution.kappa;
  DiffusivityTensor k;
  k.entries << kappa + kappa * g11, kappa * g12, kappa * g12, kappa + kappa * g22;
  k.provenance = Provenance::Spectral;
  k.meta.flow = flow_name(solution.flow.kind);
  k.meta.kappa = kappa;
  return k;
}

RefinedDiffusivity refine_eddy_diffusivity(const FlowSpec& flow, double kappa,
                                           const RefinementOptions& options) {
  int modes = std::max(4, options.initial_modes);
  RefinedDiffusivity out;
  out.solution = solve_cell_problem(flow, kappa, modes, options.solver);
  out.tensor = eddy_diffusivity_from_cell(out.solution);
  out.relative_change = std::numeric_limits<double>::infinity();

  while (modes < options.max_modes) {
    modes = std::min(2 * modes, options.max_modes);
    CellSolution finer = solve_cell_problem(flow, kappa, modes, options.solver, &out.solution);
    DiffusivityTensor tensor = eddy_diffusivity_from_cell(finer);
    out.relative_change = max_entry_change(tensor.entries, out.tensor.entries);
    out.solution = std::move(finer);
    out.tensor = tensor;
    if (out.relative_change < options.relative_change) {
      out.converged = true;
      break;
    }
  }
  return out;
}

ScalingFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) throw ParameterError("scaling fit needs at least 3 samples");
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [kappa, k] = samples[static_cast<std::size_t>(i)];
    if (!(kappa > 0.0) || !(k > 0.0))
      throw ParameterError("scaling fit needs positive kappa and K");
    design(i, 0) = 1.0;
    design(i, 1) = std::log(kappa);
    target(i) = std::log(k);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(target);
  return {coef(1), std::exp(coef(0))};
}

}  // namespace eddy
