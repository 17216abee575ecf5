#include <doctest.h>

#include <cmath>
#include <limits>

#include "eddy/dynamics.hpp"
#include "eddy/estimators.hpp"
#include "eddy/theory.hpp"

using namespace eddy;

namespace {

struct Sample {
  double mean = 0.0;
  double var = 0.0;
  std::size_t n = 0;
};

Sample sample_stats(const std::vector<double>& v) {
  Sample s;
  s.n = v.size();
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(s.n);
  for (double x : v) s.var += (x - s.mean) * (x - s.mean);
  s.var /= static_cast<double>(s.n - 1);
  return s;
}

SimConfig short_config(double kappa, double t_final) {
  SimConfig c;
  c.kappa = kappa;
  c.t_final = t_final;
  c.dt = 1e-3;
  c.seed = 20240611;
  return c;
}

}  // namespace

TEST_CASE("stored sample count") {
  SimConfig c;
  c.t_final = 1.0;
  c.dt = 1e-3;
  c.store_stride = 10;
  CHECK(c.stored_count() == 101);
  CHECK(c.step_count() == 1000);
  CHECK(c.dt_stored() == doctest::Approx(0.01));

  c.t_final = 1000.0;
  c.store_stride = 1;
  CHECK(c.stored_count() == 1000001);

  c.t_final = 0.0105;
  c.store_stride = 1;
  CHECK(c.stored_count() == 11);  // trailing partial step dropped

  const Trajectory traj = simulate(FlowSpec::taylor_green(), short_config(0.1, 2.0));
  CHECK(traj.size() == 2001);
  CHECK(traj.positions.allFinite());
  CHECK(traj.positions.col(0) == Vec2::Zero());
  CHECK(traj.duration() == doctest::Approx(2.0));
}

TEST_CASE("config validation") {
  SimConfig c = short_config(0.1, 1.0);
  CHECK_NOTHROW(validate(c));

  SimConfig bad = c;
  bad.kappa = 0.0;
  CHECK_THROWS_AS(validate(bad), ParameterError);
  bad = c;
  bad.dt = -1e-3;
  CHECK_THROWS_AS(validate(bad), ParameterError);
  bad = c;
  bad.store_stride = 0;
  CHECK_THROWS_AS(validate(bad), ParameterError);
  bad = c;
  bad.x0 = Vec2(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(validate(bad), ParameterError);

  // Rescaled runs must resolve the fast scale: dt ≤ ε²/50.
  bad = c;
  bad.epsilon = 0.1;
  bad.dt = 1e-3;
  CHECK_THROWS_AS(validate(bad), ParameterError);
  bad.dt = 2e-4;
  CHECK_NOTHROW(validate(bad));
}

TEST_CASE("simulation is deterministic per (seed, realization)") {
  const FlowSpec flow = FlowSpec::ou_shear(1.0, 0.1);
  SimConfig c = short_config(0.1, 5.0);
  const Trajectory a = simulate(flow, c);
  const Trajectory b = simulate(flow, c);
  CHECK(a.positions == b.positions);

  c.realization = 1;
  const Trajectory other = simulate(flow, c);
  CHECK(!(other.positions == a.positions));

  c.realization = 0;
  c.seed += 1;
  CHECK(!(simulate(flow, c).positions == a.positions));
}

TEST_CASE("store_stride keeps every k-th step of the full path") {
  SimConfig c = short_config(0.1, 3.0);
  const Trajectory full = simulate(FlowSpec::taylor_green(), c);
  c.store_stride = 50;
  const Trajectory thin = simulate(FlowSpec::taylor_green(), c);
  REQUIRE(thin.size() == 61);
  for (Eigen::Index i = 0; i < thin.size(); ++i) CHECK(thin.positions.col(i) == full.positions.col(50 * i));
}

TEST_CASE("x-coordinate of a shear flow is Brownian motion") {
  SUBCASE("variance 2 kappa t at t = 1 over 1000 realizations") {
    SimConfig c = short_config(0.1, 1.0);
    c.store_stride = 1000;
    std::vector<double> x1;
    for (std::uint64_t r = 0; r < 1000; ++r) {
      c.realization = r;
      x1.push_back(simulate(FlowSpec::steady_shear(), c).positions(0, 1));
    }
    const Sample s = sample_stats(x1);
    const double se = 0.2 * std::sqrt(2.0 / (s.n - 1.0));
    CHECK(std::abs(s.var - 0.2) < 3 * se);
  }
  SUBCASE("increments have variance 2 kappa dt_stored for every shear-family flow") {
    for (const FlowSpec& f : {FlowSpec::steady_shear(), FlowSpec::periodic_shear(1.0),
                              FlowSpec::ou_shear(1.0, 0.1)}) {
      CAPTURE(flow_name(f.kind));
      SimConfig c = short_config(0.1, 200.0);
      c.store_stride = 10;
      const Trajectory traj = simulate(f, c);
      std::vector<double> inc;
      for (Eigen::Index i = 0; i + 1 < traj.size(); ++i)
        inc.push_back(traj.positions(0, i + 1) - traj.positions(0, i));
      const Sample s = sample_stats(inc);
      const double target = 2.0 * 0.1 * traj.dt_stored;
      CHECK(std::abs(s.mean) < 3 * std::sqrt(target / s.n));
      CHECK(std::abs(s.var - target) < 3 * target * std::sqrt(2.0 / (s.n - 1.0)));
    }
  }
}

TEST_CASE("OU transition") {
  CHECK(ou_step(1.0, 1.0, 0.0, std::log(2.0), 0.7) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ou_step(0.3, 2.0, 0.5, 1e-14, 1.0) == doctest::Approx(0.3).epsilon(1e-6));
  CHECK_THROWS_AS(ou_step(1.0, 0.0, 0.1, 0.1, 0.0), ParameterError);
  CHECK_THROWS_AS(ou_step(1.0, -1.0, 0.1, 0.1, 0.0), ParameterError);
  CHECK_THROWS_AS(ou_step(1.0, 1.0, -0.1, 0.1, 0.0), ParameterError);

  SUBCASE("stationary law is preserved") {
    GaussianStream init(1, 0, StreamTag::InitialEta);
    GaussianStream drive(1, 0, StreamTag::OUDriver);
    std::vector<double> out;
    for (int i = 0; i < 100000; ++i)
      out.push_back(ou_step(stationary_eta_draw(1.0, 0.1, init), 1.0, 0.1, 0.37, drive()));
    CHECK(std::abs(sample_stats(out).var - 0.1) < 0.002);
  }
  SUBCASE("stationary draw") {
    GaussianStream s(9, 0, StreamTag::InitialEta);
    CHECK(stationary_eta_draw(1.0, 0.0, s) == 0.0);
    std::vector<double> draws;
    for (int i = 0; i < 100000; ++i) draws.push_back(stationary_eta_draw(1.0, 0.1, s));
    CHECK(std::abs(sample_stats(draws).var - 0.1) < 0.002);
    GaussianStream a(4, 2, StreamTag::InitialEta), b(4, 2, StreamTag::InitialEta);
    CHECK(stationary_eta_draw(1.0, 0.1, a) == stationary_eta_draw(1.0, 0.1, b));
  }
}

TEST_CASE("rescaled dynamics is the unrescaled one in scaled variables") {
  // With ε a power of two the two pipelines round identically, so the paths of
  // ε·x(t/ε²) and of the rescaled SDE coincide bit for bit.
  for (const FlowSpec& f : {FlowSpec::taylor_green(), FlowSpec::ou_shear(1.0, 0.1),
                            FlowSpec::periodic_shear(1.0)}) {
    CAPTURE(flow_name(f.kind));
    const double eps = 0.5;
    SimConfig rescaled = short_config(0.1, 1.0);
    rescaled.epsilon = eps;
    rescaled.eta0 = 0.4;
    SimConfig plain = rescaled;
    plain.epsilon = 1.0;
    plain.dt = rescaled.dt / (eps * eps);
    plain.t_final = rescaled.t_final / (eps * eps);

    const Trajectory a = simulate(f, rescaled);
    const Trajectory b = simulate(f, plain);
    REQUIRE(a.size() == b.size());
    CHECK(a.positions == (eps * b.positions).eval());
  }
}

TEST_CASE("epsilon = 1 is the unrescaled pipeline") {
  SimConfig c = short_config(0.1, 2.0);
  const Trajectory a = simulate(FlowSpec::taylor_green(), c);
  c.epsilon = 1.0;
  CHECK(simulate(FlowSpec::taylor_green(), c).positions == a.positions);
}

TEST_CASE("exact shear sampler") {
  SUBCASE("rejects other flows and rescaling") {
    CHECK_THROWS_AS(simulate_shear_exact(FlowSpec::taylor_green(), short_config(0.1, 1.0)),
                    UnsupportedFlowError);
    SimConfig c = short_config(0.1, 1.0);
    c.epsilon = 0.5;
    CHECK_THROWS_AS(simulate_shear_exact(FlowSpec::steady_shear(), c), ParameterError);
  }
  SUBCASE("eta identically zero leaves pure Brownian motion in y") {
    SimConfig c = short_config(0.3, 100.0);
    c.integrator = Integrator::ShearExact;
    c.eta0 = 0.0;
    c.store_stride = 100;
    const Trajectory traj = simulate(FlowSpec::ou_shear(1.0, 0.0), c);
    std::vector<double> inc;
    for (Eigen::Index i = 0; i + 1 < traj.size(); ++i)
      inc.push_back(traj.positions(1, i + 1) - traj.positions(1, i));
    const Sample s = sample_stats(inc);
    const double target = 2.0 * 0.3 * traj.dt_stored;
    CHECK(std::abs(s.var - target) < 3 * target * std::sqrt(2.0 / (s.n - 1.0)));
  }
  SUBCASE("qv along the shear matches the closed form, and the EM integrator agrees") {
    const double kappa = 0.5, delta = 1.0;
    const std::size_t n = 100, m = 500;
    SimConfig c = short_config(kappa, n * delta);
    c.store_stride = 1000;
    std::vector<double> exact, em;
    for (std::uint64_t r = 0; r < m; ++r) {
      c.realization = r;
      c.integrator = Integrator::ShearExact;
      exact.push_back(qv_estimate(subsample(simulate(FlowSpec::steady_shear(), c), delta)).entries(1, 1));
      c.integrator = Integrator::EulerMaruyama;
      em.push_back(qv_estimate(subsample(simulate(FlowSpec::steady_shear(), c), delta)).entries(1, 1));
    }
    const Sample se = sample_stats(exact), sm = sample_stats(em);
    const double oracle = theory::qv_expectation_shear(kappa, n, delta);
    CHECK(std::abs(se.mean - oracle) < 3 * std::sqrt(se.var / m));
    CHECK(std::abs(se.mean - sm.mean) < 3 * std::sqrt(se.var / m + sm.var / m));
  }
}

TEST_CASE("burn-in shifts the stored window") {
  SimConfig c = short_config(0.1, 1.0);
  c.burn_in = 0.5;
  const Trajectory traj = simulate(FlowSpec::taylor_green(), c);
  CHECK(traj.size() == 1001);
  CHECK(traj.positions.col(0) != Vec2::Zero());

  SimConfig longer = short_config(0.1, 1.5);
  const Trajectory full = simulate(FlowSpec::taylor_green(), longer);
  CHECK(traj.positions.col(0) == full.positions.col(500));
  CHECK(traj.positions.col(1000) == full.positions.col(1500));
}

TEST_CASE("non-finite state raises a blow-up error") {
  SimConfig c;
  c.kappa = 1e300;
  c.dt = 1e300;
  c.t_final = 3e300;
  CHECK_THROWS_AS(simulate(FlowSpec::steady_shear(), c), BlowupError);
}
