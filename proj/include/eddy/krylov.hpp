#pragma once

#include <cmath>
#include <complex>
#include <cstddef>

#include <Eigen/Core>

namespace eddy::krylov {

struct GmresOptions {
  double tolerance = 1e-10;  // on ‖b − Ax‖ / ‖b‖
  Eigen::Index restart = 60;
  std::size_t max_iterations = 50000;
};

struct GmresResult {
  bool converged = false;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

/// Restarted GMRES with right preconditioning, solving A x = b.
///
/// `apply(in, out)` writes A·in into out, `precondition(in, out)` writes M⁻¹·in.
/// `x` holds the initial guess on entry and the iterate on exit. The reported
/// residual is recomputed from the iterate at every restart, not taken from
/// the Hessenberg recurrence.
template <typename Scalar, typename Apply, typename Precondition>
GmresResult gmres(const Apply& apply, const Precondition& precondition,
                  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
                  Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x, const GmresOptions& options) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using std::abs;
  using std::conj;
  using std::sqrt;

  GmresResult result;
  const Eigen::Index n = b.size();
  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    x.setZero(n);
    result.converged = true;
    return result;
  }

  const Eigen::Index m = std::max<Eigen::Index>(1, std::min(options.restart, n));
  Matrix basis(n, m + 1);
  Matrix hessenberg = Matrix::Zero(m + 1, m);
  Eigen::VectorXd cosines(m);
  Vector sines(m);
  Vector rhs(m + 1);
  Vector z(n), w(n), r(n);

  auto true_residual = [&]() {
    apply(x, w);
    r = b - w;
    return r.norm();
  };

  double beta = true_residual();
  result.relative_residual = beta / b_norm;
  while (result.relative_residual > options.tolerance && result.iterations < options.max_iterations) {
    basis.col(0) = r / beta;
    rhs.setZero();
    rhs(0) = beta;
    hessenberg.setZero();

    Eigen::Index used = 0;
    for (Eigen::Index j = 0; j < m && result.iterations < options.max_iterations; ++j) {
      precondition(basis.col(j), z);
      apply(z, w);
      for (Eigen::Index i = 0; i <= j; ++i) {
        hessenberg(i, j) = basis.col(i).dot(w);
        w -= hessenberg(i, j) * basis.col(i);
      }
      const double h_next = w.norm();
      hessenberg(j + 1, j) = h_next;
      if (h_next > 0.0) basis.col(j + 1) = w / h_next;

      for (Eigen::Index i = 0; i < j; ++i) {
        const Scalar upper = cosines(i) * hessenberg(i, j) + sines(i) * hessenberg(i + 1, j);
        hessenberg(i + 1, j) = -conj(sines(i)) * hessenberg(i, j) + cosines(i) * hessenberg(i + 1, j);
        hessenberg(i, j) = upper;
      }
      const Scalar a = hessenberg(j, j);
      const double a_abs = abs(a);
      const double radius = std::hypot(a_abs, h_next);
      if (a_abs == 0.0) {
        cosines(j) = 0.0;
        sines(j) = Scalar(1);
        hessenberg(j, j) = h_next;
      } else {
        const Scalar phase = a / a_abs;
        cosines(j) = a_abs / radius;
        sines(j) = phase * h_next / radius;
        hessenberg(j, j) = phase * radius;
      }
      hessenberg(j + 1, j) = 0.0;
      rhs(j + 1) = -conj(sines(j)) * rhs(j);
      rhs(j) = cosines(j) * rhs(j);

      ++used;
      ++result.iterations;
      if (abs(rhs(j + 1)) / b_norm <= options.tolerance || h_next == 0.0) break;
    }

    const Vector y = hessenberg.topLeftCorner(used, used)
                         .template triangularView<Eigen::Upper>()
                         .solve(rhs.head(used));
    precondition(basis.leftCols(used) * y, z);
    x += z;

    beta = true_residual();
    result.relative_residual = beta / b_norm;
  }
  result.converged = result.relative_residual <= options.tolerance;
  return result;
}

}  // namespace eddy::krylov
