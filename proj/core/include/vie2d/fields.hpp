#ifndef VIE2D_FIELDS_HPP
#define VIE2D_FIELDS_HPP

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "vie2d/assembly.hpp"
#include "vie2d/mesh.hpp"

namespace vie2d {

struct FieldSample {
  Vector2d position;
  Vector2c e_cartesian = Vector2c::Zero();
  Complex e_rho = 0.0;
  Complex e_phi = 0.0;
};

/// Scattered field at an exterior point, radiated by the solved current:
/// E_s = -j k0 \int G chi J + (1/(j k0)) \int grad G [div'(chi J)], the
/// charge term carrying both the constant area charges and the line
/// charges on contrast-jump edges.  Throws std::domain_error for points
/// inside or on the mesh.
Vector2c scattered_field(const VectorXcd& coeffs, const Mesh& mesh,
                         const std::vector<RwgEdge>& edges,
                         std::span<const Complex> chi, double k0,
                         const TriRule& tri_rule, const EdgeRule& edge_rule,
                         const Vector2d& point);

/// Total field inside the object: E = (1 - chi)/(j k0) sum d_n f_n over
/// the triangle containing the point.
Vector2c interior_field(const VectorXcd& coeffs, const Mesh& mesh,
                        const std::vector<RwgEdge>& edges,
                        std::span<const Complex> chi, double k0,
                        const Vector2d& point);

/// Cylindrical components about `center`: E_rho along the outward radial
/// direction, E_phi along its +90 degree rotation.
std::pair<Complex, Complex> to_cylindrical(const Vector2c& e,
                                           const Vector2d& point,
                                           const Vector2d& center);

/// ||E_num - E_ref||_2 / ||E_ref||_2 over both cylindrical components of
/// all samples.  Throws std::invalid_argument on length mismatch or zero
/// reference norm.
double relative_error(std::span<const FieldSample> numeric,
                      std::span<const FieldSample> reference);

}  // namespace vie2d

#endif
