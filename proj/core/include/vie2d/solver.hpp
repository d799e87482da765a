#ifndef VIE2D_SOLVER_HPP
#define VIE2D_SOLVER_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "vie2d/assembly.hpp"

namespace vie2d {

struct SolveReport {
  VectorXcd solution;
  int iterations = 0;        // total matrix-vector products
  double relative_residual = 0.0;
  double wall_seconds = 0.0;
  bool converged = false;
  std::vector<double> residual_history;  // per inner step, relative
};

struct IterativeOptions {
  double tol = 1e-6;
  int max_iter = 2000;
  int restart = 100;
  bool diagonal_scaling = true;  // right Jacobi preconditioning
};

class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, double rcond)
      : std::runtime_error(what), rcond_estimate(rcond) {}
  double rcond_estimate;
};

/// Partial-pivoting LU reference solve.  Refuses systems above max_n
/// (dense factorization cost guard) and throws SingularSystemError with
/// the reciprocal condition estimate when the factorization is
/// numerically singular.
SolveReport solve_direct(const SystemMatrices& sys, const VectorXcd& rhs,
                         int max_n = 6000);

/// Restarted GMRES accessing the matrix only through products; residual
/// norms are non-increasing within each cycle and the iteration count is
/// the number of operator applications.  Deterministic for fixed inputs.
SolveReport solve_iterative(const SystemMatrices& sys, const VectorXcd& rhs,
                            const IterativeOptions& options = {});

/// Operator-level entry point used by the wrapper above and by tests.
/// `diag` (optional) supplies the diagonal for the Jacobi scaling.
SolveReport gmres(const std::function<VectorXcd(const VectorXcd&)>& apply_op,
                  const VectorXcd& rhs, const IterativeOptions& options,
                  const VectorXcd* diag = nullptr);

}  // namespace vie2d

#endif
