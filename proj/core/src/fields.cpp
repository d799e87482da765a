#include "vie2d/fields.hpp"

#include <cmath>
#include <stdexcept>

#include "vie2d/specfun.hpp"

namespace vie2d {

namespace {

constexpr Complex kJ(0.0, 1.0);
constexpr double kMinObservationDistance = 1e-9;  // m

}  // namespace

Vector2c scattered_field(const VectorXcd& coeffs, const Mesh& mesh,
                         const std::vector<RwgEdge>& edges,
                         std::span<const Complex> chi, double k0,
                         const TriRule& tri_rule, const EdgeRule& edge_rule,
                         const Vector2d& point) {
  if (mesh.locate(point) >= 0)
    throw std::domain_error(
        "scattered_field: point inside the object (use interior_field)");
  const auto tri_edges = triangle_edge_table(mesh, edges);
  WaveParams wave;
  wave.k0 = k0;

  Complex ex = 0.0, ey = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (chi[t] == 0.0) continue;
    const auto& tri = mesh.triangle(t);
    std::array<Vector2d, 3> v;
    for (int i = 0; i < 3; ++i) v[i] = mesh.vertex(tri.v[i]);
    const double area = mesh.area(t);
    // Area charge of the discretized current on this triangle.
    Complex rho = 0.0;
    for (int a = 0; a < 3; ++a) {
      int n = tri_edges[t][a];
      if (n < 0) continue;
      rho += coeffs(n) * double(edges[n].sign(t)) * chi[t] / area;
    }
    for (const auto& node : tri_rule.nodes) {
      Vector2d rp = tri_rule.map(node, v[0], v[1], v[2]);
      double dist = (point - rp).norm();
      if (dist < kMinObservationDistance)
        throw std::domain_error("scattered_field: observation point "
                                "pathologically close to a source point");
      Complex g = 0.25 * kJ * specfun::hankel2_real(0, k0 * dist);
      Complex gg = -0.25 * kJ * k0 *
                   specfun::hankel2_real(1, k0 * dist) / dist;
      // Discrete current at the quadrature point.
      Complex jx = 0.0, jy = 0.0;
      for (int a = 0; a < 3; ++a) {
        int n = tri_edges[t][a];
        if (n < 0) continue;
        Vector2d f = (rp - v[a]) / (2.0 * area);
        Complex c = coeffs(n) * double(edges[n].sign(t));
        jx += c * f.x();
        jy += c * f.y();
      }
      const double w = node.weight * area;
      ex += w * (-kJ * k0 * chi[t] * g * jx +
                 rho / (kJ * k0) * gg * (point - rp).x());
      ey += w * (-kJ * k0 * chi[t] * g * jy +
                 rho / (kJ * k0) * gg * (point - rp).y());
    }
  }

  // Line charges on contrast-jump edges.
  for (const RwgEdge& e : edges) {
    Complex jump = chi[e.tri_plus] - chi[e.tri_minus];
    if (jump == 0.0) continue;
    Complex lambda = -coeffs(e.index) * jump / e.length;
    for (const auto& node : edge_rule.nodes) {
      Vector2d rp = e.edge_a + node.t * (e.edge_b - e.edge_a);
      double dist = (point - rp).norm();
      if (dist < kMinObservationDistance)
        throw std::domain_error("scattered_field: observation point "
                                "pathologically close to a source edge");
      Complex gg = -0.25 * kJ * k0 *
                   specfun::hankel2_real(1, k0 * dist) / dist;
      const double w = node.weight * e.length;
      ex += w * lambda / (kJ * k0) * gg * (point - rp).x();
      ey += w * lambda / (kJ * k0) * gg * (point - rp).y();
    }
  }
  return {ex, ey};
}

Vector2c interior_field(const VectorXcd& coeffs, const Mesh& mesh,
                        const std::vector<RwgEdge>& edges,
                        std::span<const Complex> chi, double k0,
                        const Vector2d& point) {
  int t = mesh.locate(point);
  if (t < 0)
    throw std::domain_error("interior_field: point not inside any triangle");
  const auto tri_edges = triangle_edge_table(mesh, edges);
  const auto& tri = mesh.triangle(t);
  Complex jx = 0.0, jy = 0.0;
  for (int a = 0; a < 3; ++a) {
    int n = tri_edges[t][a];
    if (n < 0) continue;
    Vector2d f = (point - mesh.vertex(tri.v[a])) / (2.0 * mesh.area(t));
    Complex c = coeffs(n) * double(edges[n].sign(t));
    jx += c * f.x();
    jy += c * f.y();
  }
  Complex front = (1.0 - chi[t]) / (kJ * k0);
  return {front * jx, front * jy};
}

std::pair<Complex, Complex> to_cylindrical(const Vector2c& e,
                                           const Vector2d& point,
                                           const Vector2d& center) {
  Vector2d d = point - center;
  double r = d.norm();
  if (r == 0.0)
    throw std::domain_error("to_cylindrical: point coincides with center");
  Vector2d rho_hat = d / r;
  Vector2d phi_hat(-rho_hat.y(), rho_hat.x());
  Complex e_rho = e.x() * rho_hat.x() + e.y() * rho_hat.y();
  Complex e_phi = e.x() * phi_hat.x() + e.y() * phi_hat.y();
  return {e_rho, e_phi};
}

double relative_error(std::span<const FieldSample> numeric,
                      std::span<const FieldSample> reference) {
  if (numeric.size() != reference.size())
    throw std::invalid_argument("relative_error: sample count mismatch");
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < numeric.size(); ++i) {
    num += std::norm(numeric[i].e_rho - reference[i].e_rho);
    num += std::norm(numeric[i].e_phi - reference[i].e_phi);
    den += std::norm(reference[i].e_rho);
    den += std::norm(reference[i].e_phi);
  }
  if (den == 0.0)
    throw std::invalid_argument("relative_error: zero reference norm");
  return std::sqrt(num / den);
}

}  // namespace vie2d
