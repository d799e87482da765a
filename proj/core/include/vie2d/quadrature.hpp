#ifndef VIE2D_QUADRATURE_HPP
#define VIE2D_QUADRATURE_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace vie2d {

using Eigen::Vector2d;

/// Symmetric Gaussian rule on the reference triangle.  Weights sum to 1
/// and are scaled by the physical triangle area at use sites.
struct TriRule {
  struct Node {
    std::array<double, 3> bary;
    double weight;
  };
  std::vector<Node> nodes;
  int degree = 0;  // polynomial exactness

  Vector2d map(const Node& n, const Vector2d& v0, const Vector2d& v1,
               const Vector2d& v2) const {
    return n.bary[0] * v0 + n.bary[1] * v1 + n.bary[2] * v2;
  }
};

/// Gauss-Legendre rule on [0,1]; weights sum to 1.
struct EdgeRule {
  struct Node {
    double t;
    double weight;
  };
  std::vector<Node> nodes;
};

// Supported point counts: 1 (degree 1), 3 (degree 2), 6 (degree 4),
// 12 (degree 6).  Anything else throws std::invalid_argument.
TriRule triangle_rule(int n_points);

EdgeRule edge_rule(int n_points);

// Closed-form potential integrals of the logarithmic kernel.  All are
// finite for observation points inside, on, or outside the element.

/// \int_segment ln|obs - r'| dl'
double log_integral_segment(const Vector2d& a, const Vector2d& b,
                            const Vector2d& obs);

/// \int_T ln|obs - r'| dA'
double log_integral_triangle(const Vector2d& v0, const Vector2d& v1,
                             const Vector2d& v2, const Vector2d& obs);

/// \int_T (r' - obs) ln|obs - r'| dA'  (first moment about obs; used to
/// integrate the singular kernel against linear basis functions)
Vector2d log_moment_triangle(const Vector2d& v0, const Vector2d& v1,
                             const Vector2d& v2, const Vector2d& obs);

}  // namespace vie2d

#endif
