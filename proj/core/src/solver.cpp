#include "vie2d/solver.hpp"

#include <chrono>
#include <cmath>

namespace vie2d {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

SolveReport solve_direct(const SystemMatrices& sys, const VectorXcd& rhs,
                         int max_n) {
  if (sys.size() > max_n)
    throw std::invalid_argument(
        "solve_direct: system size exceeds the direct-solve cap (" +
        std::to_string(max_n) + ")");
  auto t0 = std::chrono::steady_clock::now();
  MatrixXcd a = sys.dense_sum();
  Eigen::PartialPivLU<MatrixXcd> lu(a);
  double rcond = lu.rcond();
  if (!(rcond > 1e-15))
    throw SingularSystemError(
        "solve_direct: numerically singular system (rcond estimate " +
            std::to_string(rcond) + ")",
        rcond);
  SolveReport rep;
  rep.solution = lu.solve(rhs);
  double nb = rhs.norm();
  rep.relative_residual =
      nb > 0.0 ? (a * rep.solution - rhs).norm() / nb : 0.0;
  rep.converged = true;
  rep.iterations = 0;
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

SolveReport gmres(const std::function<VectorXcd(const VectorXcd&)>& apply_op,
                  const VectorXcd& rhs, const IterativeOptions& options,
                  const VectorXcd* diag) {
  if (!(options.tol > 0.0))
    throw std::invalid_argument("gmres: tolerance must be positive");
  auto t0 = std::chrono::steady_clock::now();
  const Eigen::Index n = rhs.size();
  SolveReport rep;
  rep.solution = VectorXcd::Zero(n);
  const double normb = rhs.norm();
  if (normb == 0.0) {
    rep.converged = true;
    rep.wall_seconds = seconds_since(t0);
    return rep;
  }

  // Right Jacobi scaling: solve A D^{-1} y = b, x = D^{-1} y, so the
  // minimized residual is that of the original system.
  VectorXcd dinv = VectorXcd::Ones(n);
  if (diag && options.diagonal_scaling)
    for (Eigen::Index i = 0; i < n; ++i) {
      double mag = std::abs((*diag)(i));
      if (mag > 0.0) dinv(i) = 1.0 / mag;
    }
  auto apply = [&](const VectorXcd& v) {
    return apply_op(dinv.cwiseProduct(v));
  };

  const int restart = std::max(1, options.restart);
  VectorXcd y = VectorXcd::Zero(n);  // preconditioned iterate
  VectorXcd r = rhs;                 // residual of the original system
  double beta = normb;
  int matvecs = 0;

  MatrixXcd basis(n, restart + 1);
  MatrixXcd hess = MatrixXcd::Zero(restart + 1, restart);
  VectorXcd g(restart + 1);
  std::vector<double> cs(restart);
  std::vector<Complex> sn(restart);

  auto finish = [&](bool ok, double rel) {
    rep.solution = dinv.cwiseProduct(y);
    rep.converged = ok;
    rep.relative_residual = rel;
    rep.iterations = matvecs;
    rep.wall_seconds = seconds_since(t0);
    return rep;
  };

  while (matvecs < options.max_iter) {
    basis.col(0) = r / beta;
    g.setZero();
    g(0) = beta;
    int j = 0;
    for (; j < restart && matvecs < options.max_iter; ++j) {
      VectorXcd w = apply(basis.col(j));
      ++matvecs;
      for (int i = 0; i <= j; ++i) {
        Complex h = basis.col(i).dot(w);  // conjugated inner product
        hess(i, j) = h;
        w -= h * basis.col(i);
      }
      double hlast = w.norm();
      hess(j + 1, j) = hlast;
      if (hlast > 0.0) basis.col(j + 1) = w / hlast;

      // Apply stored rotations, then a new one to annihilate the
      // subdiagonal; |g(j+1)| tracks the cycle residual.
      for (int i = 0; i < j; ++i) {
        Complex t1 = hess(i, j), t2 = hess(i + 1, j);
        hess(i, j) = cs[i] * t1 + sn[i] * t2;
        hess(i + 1, j) = -std::conj(sn[i]) * t1 + cs[i] * t2;
      }
      Complex h1 = hess(j, j);
      double h2 = hlast;
      double denom = std::sqrt(std::norm(h1) + h2 * h2);
      if (denom == 0.0) {
        cs[j] = 1.0;
        sn[j] = 0.0;
      } else if (h1 == 0.0) {
        cs[j] = 0.0;
        sn[j] = 1.0;
      } else {
        cs[j] = std::abs(h1) / denom;
        sn[j] = (h1 / std::abs(h1)) * (h2 / denom);
      }
      hess(j, j) = cs[j] * h1 + sn[j] * h2;
      hess(j + 1, j) = 0.0;
      Complex t = g(j);
      g(j) = cs[j] * t;
      g(j + 1) = -std::conj(sn[j]) * t;

      double rel = std::abs(g(j + 1)) / normb;
      rep.residual_history.push_back(rel);
      if (rel <= options.tol) {
        ++j;
        break;
      }
      if (hlast == 0.0) {  // invariant subspace reached
        ++j;
        break;
      }
    }

    // Back-substitute the least-squares solution and update the iterate.
    VectorXcd yy(j);
    for (int i = j - 1; i >= 0; --i) {
      Complex s = g(i);
      for (int k = i + 1; k < j; ++k) s -= hess(i, k) * yy(k);
      yy(i) = s / hess(i, i);
    }
    y += basis.leftCols(j) * yy;

    r = rhs - apply(y);
    ++matvecs;
    beta = r.norm();
    double rel = beta / normb;
    if (rel <= options.tol) return finish(true, rel);
    if (matvecs >= options.max_iter) return finish(false, rel);
  }
  return finish(false, beta / normb);
}

SolveReport solve_iterative(const SystemMatrices& sys, const VectorXcd& rhs,
                            const IterativeOptions& options) {
  VectorXcd diag = sys.diagonal();
  return gmres([&sys](const VectorXcd& x) { return sys.apply(x); }, rhs,
               options, &diag);
}

}  // namespace vie2d
