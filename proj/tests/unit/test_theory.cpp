#include <doctest.h>

#include <cmath>

#include <Eigen/Core>

#include "eddy/theory.hpp"

using namespace eddy;
using namespace eddy::theory;

namespace {

// E of the 22-entry of the qv estimator for v = (0, sin x), x(0) = 0, summed
// increment by increment. With s ≤ u,
//   E[sin x(s) sin x(u)] = ½(e^{−κ(u−s)} − e^{−κ(3s+u)}),
// so each E(Δy)² = 2κδ + A − B with A, B the two double integrals below.
long double qv_shear_oracle(long double kappa, std::size_t n, long double delta) {
  const long double k = kappa;
  const long double x = k * delta;
  const long double a_term = (x + std::expm1l(-x)) / (k * k);
  long double sum = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const long double a = static_cast<long double>(i) * delta;
    const long double b_term = std::exp(-4 * k * a) / (k * k) *
                               (-std::expm1l(-4 * x) / 4 + std::exp(-x) * std::expm1l(-3 * x) / 3);
    sum += 2 * k * delta + a_term - b_term;
  }
  return sum / (2.0L * static_cast<long double>(n) * delta);
}

// Var(mean of bin 2 − mean of bin 1)/(2δ) for Brownian motion sampled J times
// per bin, from the explicit covariance matrix 2κ min(tₐ, t_b).
double box_oracle(double kappa, double delta, std::size_t J) {
  const Eigen::Index n = static_cast<Eigen::Index>(2 * J);
  const double h = delta / static_cast<double>(J);
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) cov(a, b) = 2.0 * kappa * h * static_cast<double>(std::min(a, b) + 1);
  Eigen::VectorXd w(n);
  w.head(J).setConstant(-1.0 / J);
  w.tail(J).setConstant(1.0 / J);
  return w.dot(cov * w) / (2.0 * delta);
}

}  // namespace

TEST_CASE("closed-form diffusivities") {
  CHECK(k_shear(0.1) == 5.1);
  CHECK(std::round(k_ou_shear(0.1, 1.0, 0.1) * 1000.0) / 1000.0 == 0.145);
  CHECK(k_ou_shear(0.1, 1.0, 0.1) == doctest::Approx(0.1 + 0.1 / 2.2).epsilon(1e-15));
  CHECK(k_periodic_shear(0.1, 1.0, PeriodicShearFormula::Printed) == doctest::Approx(0.1 + 1.0 / 4.04).epsilon(1e-15));
  CHECK(std::round(k_periodic_shear(0.1, 1.0) * 1e4) / 1e4 == 0.3475);
  CHECK(k_periodic_shear(0.1, 1.0, PeriodicShearFormula::FigureConsistent) ==
        doctest::Approx(0.12475247524752475).epsilon(1e-15));
  CHECK(k_ou_shear(0.3, 2.0, 0.0) == 0.3);

  CHECK(k_shear_family(FlowSpec::steady_shear(), 0.5, PeriodicShearFormula::Printed) == k_shear(0.5));
  CHECK(k_shear_family(FlowSpec::ou_shear(1.0, 0.1), 0.1, PeriodicShearFormula::Printed) ==
        k_ou_shear(0.1, 1.0, 0.1));
  CHECK_THROWS_AS(k_shear_family(FlowSpec::taylor_green(), 0.1, PeriodicShearFormula::Printed),
                  UnsupportedFlowError);
  CHECK_THROWS_AS(k_shear(0.0), ParameterError);
  CHECK_THROWS_AS(k_ou_shear(0.1, 0.0, 0.1), ParameterError);
  CHECK_THROWS_AS(k_periodic_shear(0.1, 0.0), ParameterError);
}

TEST_CASE("qv expectation for the shear flow") {
  SUBCASE("matches the increment-sum oracle across scales") {
    for (double kappa : {0.01, 0.1, 0.5, 2.0}) {
      for (double delta : {1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0, 1e3}) {
        for (std::size_t n : {1u, 10u, 100u}) {
          CAPTURE(kappa);
          CAPTURE(delta);
          CAPTURE(n);
          const double got = qv_expectation_shear(kappa, n, delta);
          const double want = static_cast<double>(qv_shear_oracle(kappa, n, delta));
          CHECK(std::abs(got - want) <= 1e-12 * want);
        }
      }
    }
  }
  SUBCASE("large kappa*delta") {
    // 1.5 − 1/(2κ²δ) − 1/(8κ²T) with the exponentials gone.
    const double v = qv_expectation_shear(0.5, 10, 1000.0);
    CHECK(v == doctest::Approx(1.49795).epsilon(1e-12));
    CHECK(v == doctest::Approx(static_cast<double>(qv_shear_oracle(0.5L, 10, 1000.0L))).epsilon(1e-14));
  }
  SUBCASE("tiny kappa*delta tends to kappa") {
    for (double delta : {1e-12, 1e-10, 1e-8}) {
      const double v = qv_expectation_shear(1.0, 10, delta);
      CHECK(std::isfinite(v));
      CHECK(std::abs(v - 1.0) < 10 * delta);
    }
    CHECK(std::isfinite(qv_expectation_shear(0.1, 1000, 1e6)));
    CHECK(qv_expectation_shear(0.1, 1000, 1e7) == doctest::Approx(k_shear(0.1)).epsilon(1e-6));
  }
  SUBCASE("no jump at the series switch") {
    for (double delta : {1e-2 * (1 - 1e-9), 1e-2, 1e-2 * (1 + 1e-9), 0.5e-2, 2e-2}) {
      CAPTURE(delta);
      const double want = static_cast<double>(qv_shear_oracle(1.0L, 50, delta));
      CHECK(std::abs(qv_expectation_shear(1.0, 50, delta) - want) <= 1e-13 * want);
    }
  }
  SUBCASE("small-delta regime of a long run") {
    const double v = qv_expectation_shear(0.1, 100000, 0.01);
    CHECK(v == doctest::Approx(0.1 + 0.01 / 4).epsilon(1e-3));
  }
  CHECK_THROWS_AS(qv_expectation_shear(0.1, 0, 1.0), ParameterError);
  CHECK_THROWS_AS(qv_expectation_shear(0.1, 10, 0.0), ParameterError);
  CHECK_THROWS_AS(qv_expectation_shear(-0.1, 10, 1.0), ParameterError);
}

TEST_CASE("subsampling bias limit") {
  CHECK(subsample_bias_limit_shear(1) == -0.625);
  CHECK(subsample_bias_limit_shear(100) == doctest::Approx(-0.50125));
  CHECK_THROWS_AS(subsample_bias_limit_shear(0), ParameterError);

  // κ^{−ε}(E K_{N,δ} − K) at δ = κ^{−2−ε} approaches the limit as κ → 0.
  const double eps = 0.3;
  for (std::size_t n : {1u, 4u, 50u}) {
    const double kappa = 1e-4;
    const double delta = std::pow(kappa, -2.0 - eps);
    const double scaled = std::pow(kappa, -eps) * (qv_expectation_shear(kappa, n, delta) - k_shear(kappa));
    CAPTURE(n);
    CHECK(scaled == doctest::Approx(subsample_bias_limit_shear(n)).epsilon(1e-6));
  }
}

TEST_CASE("box expectation on Brownian motion") {
  const double kappa = 0.1;
  CHECK(bm_box_expectation(kappa, 1.0, 1) == kappa);
  CHECK(bm_box_expectation(kappa, 37.5, 1) == kappa);
  CHECK(bm_box_expectation(kappa, 1.0, 2) == doctest::Approx(0.75 * kappa).epsilon(1e-15));
  CHECK(bm_box_expectation(kappa, 1.0, 1000) == doctest::Approx(2.0 * kappa / 3.0).epsilon(1e-6));

  for (std::size_t J : {1u, 2u, 3u, 10u, 100u}) {
    CAPTURE(J);
    for (double delta : {0.01, 1.0, 250.0}) {
      CHECK(bm_box_expectation(kappa, delta, J) == bm_box_expectation(kappa, 1.0, J));
      CHECK(bm_box_expectation(kappa, delta, J) == doctest::Approx(box_oracle(kappa, delta, J)).epsilon(1e-12));
    }
  }
  // The value is not κ/J.
  CHECK(std::abs(bm_box_expectation(kappa, 1.0, 10) - kappa / 10) > 0.5 * kappa);
  CHECK_THROWS_AS(bm_box_expectation(kappa, 1.0, 0), ParameterError);
  CHECK_THROWS_AS(bm_box_expectation(0.0, 1.0, 2), ParameterError);
}
