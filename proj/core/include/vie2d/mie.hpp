#ifndef VIE2D_MIE_HPP
#define VIE2D_MIE_HPP

#include <Eigen/Dense>
#include <vector>

#include "vie2d/em.hpp"

namespace vie2d {

/// Concentric circular layers, innermost first; the exterior is vacuum.
struct LayeredCylinder {
  Vector2d center = Vector2d::Zero();
  std::vector<double> radii;      // strictly increasing, > 0
  std::vector<Material> layers;   // one per radius
};

/// Analytical expansion of the exterior axial magnetic field:
/// Hz_s = H0 sum_n a_n Hn2(k0 rho) e^{j n (phi - phi_inc)}, the
/// coefficients fixed by continuity of Hz and (1/eps) dHz/drho at every
/// interface (per-order linear systems of size 2L for L layers).
struct MieSolution {
  int n_max = 0;
  std::vector<Complex> a;                        // index n + n_max
  std::vector<std::vector<Complex>> layer_coefs; // per order, 2L-1 values
  WaveParams wave;
  LayeredCylinder geometry;
  Complex h0_effective;     // incident amplitude with the center phase
  double incidence_angle = 0.0;
  double max_interface_residual = 0.0;   // scaled backward error
  double truncation_ratio = 0.0;         // |a_{n_max}| / max_n |a_n|

  Complex coefficient(int n) const { return a[size_t(n + n_max)]; }
};

/// N_max = ceil(k0 R + 6 (k0 R)^{1/3} + 10), floored at 10.
int truncation_order(double k0, double outer_radius);

MieSolution solve_mie(const LayeredCylinder& cyl, const IncidentWave& inc,
                      const WaveParams& wave);

/// Scattered (E_rho, E_phi) at an exterior point (rho > outer radius).
std::pair<Complex, Complex> mie_scattered_field(const MieSolution& sol,
                                                const Vector2d& point);

struct ExteriorField {
  Complex hz;
  Complex e_rho;
  Complex e_phi;
};

/// Total (incident + scattered) exterior field; used for energy checks.
ExteriorField mie_exterior_total_field(const MieSolution& sol,
                                       const Vector2d& point);

}  // namespace vie2d

#endif
