#include <doctest.h>

#include <sstream>

#include "eddy/config.hpp"
#include "eddy/trajectory_io.hpp"

using namespace eddy;

TEST_CASE("trajectory files round trip exactly") {
  SimConfig c;
  c.kappa = 0.3;
  c.t_final = 2.0;
  c.store_stride = 7;
  c.seed = 12345678901234ULL;
  c.realization = 3;
  const Trajectory traj = simulate(FlowSpec::childress_soward(0.25), c);

  std::stringstream buf;
  write_trajectory(buf, traj);
  const Trajectory back = read_trajectory(buf);
  CHECK(back.positions == traj.positions);
  CHECK(back.dt_stored == traj.dt_stored);
  CHECK(back.flow.kind == FlowKind::ChildressSoward);
  CHECK(back.flow.lambda == 0.25);
  CHECK(back.config.kappa == 0.3);
  CHECK(back.config.seed == c.seed);
  CHECK(back.config.realization == 3);
  CHECK(back.config.store_stride == 7);
}

TEST_CASE("bare t,x,y files are accepted") {
  std::istringstream in("t,x,y\n0,0,0\n0.5,1,2\n1.0,1.5,2.5\n");
  const Trajectory t = read_trajectory(in);
  CHECK(t.size() == 3);
  CHECK(t.dt_stored == 0.5);
  CHECK(t.positions(1, 2) == 2.5);
}

TEST_CASE("malformed trajectory files") {
  std::istringstream short_file("t,x,y\n0,0,0\n");
  CHECK_THROWS_AS(read_trajectory(short_file), ConfigError);
  std::istringstream bad_number("0,0,0\n1,abc,0\n");
  CHECK_THROWS_AS(read_trajectory(bad_number), ConfigError);
  std::istringstream extra("0,0,0,0\n1,1,1,1\n");
  CHECK_THROWS_AS(read_trajectory(extra), ConfigError);
  CHECK_THROWS_AS(read_trajectory("/nonexistent/path.csv"), ConfigError);
}

TEST_CASE("config files") {
  const char* text = R"(# OU sweep
[flow]
flow = ou_shear
ou_alpha = 1.0
ou_sigma = 0.1   ; stationary variance 0.1

[simulation]
kappa = 0.1
dt = 1e-3
t_final = 1000
seed = 42
store_stride = 100
x0 = 0.5
y0 = -0.5
eta0 = stationary
integrator = em

[estimation]
estimator = qv, shift
delta = 1 2 5, 10
theta = 0.05
direction = xi:1,1

[sweep]
realizations = 200
workers = 3
epsilons = 0.05, 0.4
alpha_exponent = 1
)";
  std::istringstream in(text);
  const ExperimentConfig c = parse_config(in);
  CHECK(c.flow.kind == FlowKind::OUShear);
  CHECK(c.flow.sigma == 0.1);
  CHECK(c.sim.kappa == 0.1);
  CHECK(c.sim.store_stride == 100);
  CHECK(c.sim.seed == 42);
  CHECK(c.sim.x0 == Vec2(0.5, -0.5));
  CHECK(!c.sim.eta0.has_value());
  CHECK(c.estimators == std::vector<EstimatorKind>{EstimatorKind::Qv, EstimatorKind::Shift});
  CHECK(c.deltas == std::vector<double>{1, 2, 5, 10});
  CHECK(c.resolved_deltas() == c.deltas);
  CHECK(c.theta == 0.05);
  CHECK(c.direction.kind == Direction::Kind::Xi);
  CHECK(c.realizations == 200);
  CHECK(c.workers == 3);
  CHECK(c.epsilons == std::vector<double>{0.05, 0.4});
  CHECK(c.estimator_specs().size() == 2);

  std::istringstream minimal("[simulation]\nstore_stride = 100\neta0 = 0.25\n");
  const ExperimentConfig m = parse_config(minimal);
  CHECK(m.flow.kind == FlowKind::SteadyShear);
  CHECK(m.sim.eta0 == 0.25);
  CHECK(m.resolved_deltas() == std::vector<double>{0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0});
}

TEST_CASE("config errors") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
  };
  CHECK_THROWS_AS(parse("[flows]\n"), ConfigError);
  CHECK_THROWS_AS(parse("kappa = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[simulation]\nkapa = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[simulation]\nkappa = 1\nkappa = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse("[simulation]\nkappa = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse("[simulation]\nkappa\n"), ConfigError);
  CHECK_THROWS_AS(parse("[simulation]\nseed = -4\n"), ConfigError);
  CHECK_THROWS_AS(parse("[flow]\nflow = turbulence\n"), ConfigError);
  CHECK_THROWS_AS(parse("[estimation]\nestimator = qv, mle\n"), ConfigError);
  CHECK_THROWS_AS(parse("[simulation]\nkappa = -1\n"), ParameterError);
  CHECK_THROWS_AS(parse("[flow]\nflow = childress_soward\ncs_lambda = 2\n"), ParameterError);
  CHECK_THROWS_AS(parse("[sweep]\nrealizations = 1\n"), ParameterError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), ConfigError);
}
