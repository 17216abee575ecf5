// eddy: command-line front end for simulation, estimation, sweeps and
// reference diffusivities.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eddy/config.hpp"
#include "eddy/dynamics.hpp"
#include "eddy/error.hpp"
#include "eddy/estimators.hpp"
#include "eddy/harness.hpp"
#include "eddy/homogenization.hpp"
#include "eddy/theory.hpp"
#include "eddy/trajectory_io.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct FlowOptions {
  std::string flow = "shear";
  double omega = 1.0;
  double ou_alpha = 1.0;
  double ou_sigma = 0.1;
  double cs_lambda = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--flow", flow, "shear | periodic_shear | ou_shear | taylor_green | childress_soward")
        ->capture_default_str();
    app->add_option("--omega", omega, "periodic shear frequency")->capture_default_str();
    app->add_option("--ou-alpha", ou_alpha, "OU reversion rate")->capture_default_str();
    app->add_option("--ou-sigma", ou_sigma, "OU noise intensity")->capture_default_str();
    app->add_option("--cs-lambda", cs_lambda, "Childress-Soward parameter")->capture_default_str();
  }

  eddy::FlowSpec spec() const {
    eddy::FlowSpec f;
    f.kind = eddy::parse_flow_kind(flow);
    f.omega = omega;
    f.alpha = ou_alpha;
    f.sigma = ou_sigma;
    f.lambda = cs_lambda;
    eddy::validate(f);
    return f;
  }
};

// Writes to the named file, or stdout for "" and "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw eddy::ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void print_tensor_csv(std::ostream& out, const eddy::DiffusivityTensor& k, int modes, double residual) {
  out << "flow,kappa,provenance,K11,K12,K22,modes,residual\n";
  out << k.meta.flow << ',' << g17(k.meta.kappa) << ',' << eddy::provenance_name(k.provenance) << ','
      << g17(k.entries(0, 0)) << ',' << g17(k.entries(0, 1)) << ',' << g17(k.entries(1, 1)) << ','
      << modes << ',' << g17(residual) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eddy: tracer dispersion in periodic flows and diffusivity estimation"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "integrate one trajectory and write it to a file");
  FlowOptions sim_flow;
  sim_flow.attach(sim);
  eddy::SimConfig sim_cfg;
  std::string sim_eta0 = "stationary";
  std::string sim_integrator = "em";
  std::string sim_out;
  sim->add_option("--kappa", sim_cfg.kappa)->capture_default_str();
  sim->add_option("--dt", sim_cfg.dt)->capture_default_str();
  sim->add_option("--t-final", sim_cfg.t_final)->capture_default_str();
  sim->add_option("--epsilon", sim_cfg.epsilon)->capture_default_str();
  sim->add_option("--seed", sim_cfg.seed)->capture_default_str();
  sim->add_option("--realization", sim_cfg.realization)->capture_default_str();
  sim->add_option("--store-stride", sim_cfg.store_stride)->capture_default_str();
  sim->add_option("--x0", sim_cfg.x0(0))->capture_default_str();
  sim->add_option("--y0", sim_cfg.x0(1))->capture_default_str();
  sim->add_option("--eta0", sim_eta0, "stationary or a number")->capture_default_str();
  sim->add_option("--burn-in", sim_cfg.burn_in)->capture_default_str();
  sim->add_option("--integrator", sim_integrator, "em | shear_exact")->capture_default_str();
  sim->add_option("-o,--output", sim_out, "trajectory file (default stdout)");

  // estimate
  auto* est = app.add_subcommand("estimate", "estimate the diffusivity tensor from a trajectory file");
  std::string est_in;
  std::string est_kind = "qv";
  double est_delta = 0.0;
  double est_theta = 0.0;
  std::uint64_t est_noise_seed = 0;
  est->add_option("input", est_in, "trajectory file")->required();
  est->add_option("--estimator", est_kind, "qv | box | shift")->capture_default_str();
  est->add_option("--delta", est_delta, "sampling interval (default: stored step)");
  est->add_option("--theta", est_theta, "observation noise to add")->capture_default_str();
  est->add_option("--noise-seed", est_noise_seed)->capture_default_str();

  // sweep / rescaled
  auto* sweep = app.add_subcommand("sweep", "delta sweep from a config file, CSV output");
  std::string sweep_cfg, sweep_out;
  std::optional<unsigned> sweep_workers;
  bool sweep_adjudicate = false;
  sweep->add_option("config", sweep_cfg, "config file")->required();
  sweep->add_option("-o,--output", sweep_out, "CSV file (default stdout)");
  sweep->add_option("--workers", sweep_workers, "override [sweep] workers");
  sweep->add_flag("--adjudicate", sweep_adjudicate,
                  "periodic shear: compare the plateau with both closed forms (report on stderr)");

  auto* resc = app.add_subcommand("rescaled", "rescaled-problem study from a config file, CSV output");
  std::string resc_cfg, resc_out;
  std::optional<unsigned> resc_workers;
  resc->add_option("config", resc_cfg, "config file")->required();
  resc->add_option("-o,--output", resc_out, "CSV file (default stdout)");
  resc->add_option("--workers", resc_workers, "override [sweep] workers");

  // diffusivity
  auto* diff = app.add_subcommand("diffusivity", "reference eddy diffusivity (spectral or closed form)");
  FlowOptions diff_flow;
  diff_flow.attach(diff);
  double diff_kappa = 0.1;
  std::optional<int> diff_modes;
  bool diff_analytic = false;
  std::string diff_formula = "printed";
  diff->add_option("--kappa", diff_kappa)->capture_default_str();
  diff->add_option("--modes", diff_modes, "fixed truncation M (default: refine until stable)");
  diff->add_flag("--analytic", diff_analytic, "closed form for the shear family");
  diff->add_option("--formula", diff_formula, "periodic shear: printed | figure")->capture_default_str();

  // oracle
  auto* oracle = app.add_subcommand("oracle", "closed-form expectations");
  oracle->require_subcommand(1);
  auto* o_qv = oracle->add_subcommand("shear-qv", "expected qv estimate along the shear");
  double o_kappa = 0.1, o_delta = 1.0;
  std::size_t o_n = 100, o_j = 1;
  o_qv->add_option("--kappa", o_kappa)->required();
  o_qv->add_option("--n", o_n)->required();
  o_qv->add_option("--delta", o_delta)->required();
  auto* o_box = oracle->add_subcommand("box-bm", "expected box estimate on Brownian motion");
  o_box->add_option("--kappa", o_kappa)->required();
  o_box->add_option("--delta", o_delta)->capture_default_str();
  o_box->add_option("--j", o_j, "samples per bin")->required();
  auto* o_bias = oracle->add_subcommand("bias-limit", "subsampling bias limit for the shear flow");
  o_bias->add_option("--n", o_n)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*sim) {
      sim_cfg.integrator = eddy::parse_integrator(sim_integrator);
      if (sim_eta0 == "stationary")
        sim_cfg.eta0.reset();
      else
        sim_cfg.eta0 = std::stod(sim_eta0);
      const auto traj = eddy::simulate(sim_flow.spec(), sim_cfg);
      Output out(sim_out);
      eddy::write_trajectory(out.stream(), traj);
    } else if (*est) {
      const auto traj = eddy::read_trajectory(est_in);
      const double delta = est->count("--delta") != 0 ? est_delta : traj.dt_stored;
      eddy::Trajectory noisy_source = traj;
      noisy_source.config.seed = est_noise_seed;
      noisy_source.config.realization = 0;
      const auto k = eddy::estimate(noisy_source, eddy::parse_estimator(est_kind), delta, est_theta);
      std::cout << "estimator,delta,theta,n,K11,K12,K22\n";
      std::cout << est_kind << ',' << g17(delta) << ',' << g17(est_theta) << ',' << k.meta.n << ','
                << g17(k.entries(0, 0)) << ',' << g17(k.entries(0, 1)) << ','
                << g17(k.entries(1, 1)) << '\n';
    } else if (*sweep) {
      auto cfg = eddy::load_config(sweep_cfg);
      if (sweep_workers) cfg.workers = *sweep_workers;
      const auto report = eddy::delta_sweep(cfg.flow, cfg.sim, cfg.estimator_specs(),
                                            cfg.resolved_deltas(), cfg.theta, cfg.realizations,
                                            {cfg.workers});
      Output out(sweep_out);
      eddy::write_csv(out.stream(), report);
      if (sweep_adjudicate) {
        if (cfg.flow.kind != eddy::FlowKind::PeriodicShear)
          throw eddy::ConfigError("--adjudicate needs flow = periodic_shear");
        const auto verdict = eddy::adjudicate_periodic_shear(report, cfg.sim.kappa, cfg.flow.omega);
        std::cerr << verdict.report;
      }
    } else if (*resc) {
      auto cfg = eddy::load_config(resc_cfg);
      if (resc_workers) cfg.workers = *resc_workers;
      const eddy::EstimatorSpec spec{cfg.estimators.front(), cfg.direction};
      const auto report = eddy::rescaled_study(cfg.flow, cfg.sim, spec, cfg.epsilons,
                                               cfg.alpha_exponent, cfg.realizations, {cfg.workers});
      Output out(resc_out);
      eddy::write_csv(out.stream(), report);
    } else if (*diff) {
      const auto flow = diff_flow.spec();
      if (diff_analytic) {
        eddy::theory::PeriodicShearFormula formula;
        if (diff_formula == "printed")
          formula = eddy::theory::PeriodicShearFormula::Printed;
        else if (diff_formula == "figure")
          formula = eddy::theory::PeriodicShearFormula::FigureConsistent;
        else
          throw eddy::ConfigError("--formula must be printed or figure");
        eddy::DiffusivityTensor k;
        k.entries << diff_kappa, 0.0, 0.0, eddy::theory::k_shear_family(flow, diff_kappa, formula);
        k.provenance = eddy::Provenance::Analytic;
        k.meta.flow = eddy::flow_name(flow.kind);
        k.meta.kappa = diff_kappa;
        print_tensor_csv(std::cout, k, 0, 0.0);
      } else {
        eddy::CellSolution solution;
        eddy::DiffusivityTensor k;
        if (diff_modes) {
          solution = eddy::solve_cell_problem(flow, diff_kappa, *diff_modes);
          k = eddy::eddy_diffusivity_from_cell(solution);
        } else {
          auto refined = eddy::refine_eddy_diffusivity(flow, diff_kappa);
          if (!refined.converged)
            std::cerr << "warning: refinement stopped at M = " << refined.solution.modes
                      << " with relative change " << g17(refined.relative_change) << "\n";
          solution = std::move(refined.solution);
          k = refined.tensor;
        }
        std::cerr << "K = [" << g17(k.entries(0, 0)) << ", " << g17(k.entries(0, 1)) << "; "
                  << g17(k.entries(1, 0)) << ", " << g17(k.entries(1, 1)) << "]  M = "
                  << solution.modes << "  residual = " << g17(solution.residual) << "\n";
        print_tensor_csv(std::cout, k, solution.modes, solution.residual);
      }
    } else if (*oracle) {
      std::cout << "oracle,kappa,n,delta,J,value,provenance\n";
      if (*o_qv) {
        std::cout << "shear-qv," << g17(o_kappa) << ',' << o_n << ',' << g17(o_delta) << ",,"
                  << g17(eddy::theory::qv_expectation_shear(o_kappa, o_n, o_delta)) << ",oracle\n";
      } else if (*o_box) {
        std::cout << "box-bm," << g17(o_kappa) << ",," << g17(o_delta) << ',' << o_j << ','
                  << g17(eddy::theory::bm_box_expectation(o_kappa, o_delta, o_j)) << ",oracle\n";
      } else if (*o_bias) {
        std::cout << "bias-limit,," << o_n << ",,,"
                  << g17(eddy::theory::subsample_bias_limit_shear(o_n)) << ",oracle\n";
      }
    }
  } catch (const eddy::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const eddy::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid value: " << e.what() << "\n";
    return kConfigError;
  }
  return 0;
}
