#ifndef VIE2D_EM_HPP
#define VIE2D_EM_HPP

#include <Eigen/Dense>
#include <complex>

namespace vie2d {

using Complex = std::complex<double>;
using Eigen::Vector2d;
using Vector2c = Eigen::Vector2cd;

namespace constants {
inline constexpr double c0 = 299792458.0;               // m/s
inline constexpr double mu0 = 4.0e-7 * 3.14159265358979323846;
inline constexpr double eps0 = 1.0 / (mu0 * c0 * c0);   // F/m
inline constexpr double eta0 = mu0 * c0;                // ohm
}  // namespace constants

/// Time-harmonic free-space parameters, e^{+j omega t} convention.
struct WaveParams {
  double frequency = 0.0;  // Hz
  double omega = 0.0;      // rad/s
  double k0 = 0.0;         // rad/m
  double eta0 = 0.0;       // ohm
  double beta0 = 0.0;      // free-space phase constant, equal to k0

  static WaveParams from_frequency(double f_hz);
};

/// Homogeneous isotropic material: eps = eps_r eps0 - j sigma/omega.
struct Material {
  double eps_r = 1.0;  // >= 1
  double sigma = 0.0;  // S/m, >= 0
};

void validate(const Material& m);

/// TE-polarized plane wave.  Propagation k-hat = (cos angle, sin angle);
/// the electric field is perpendicular to k-hat with (E, Hz z-hat, k-hat)
/// right-handed, so Hz = H0 e^{-j k0 k.r} carries the axial magnetic field.
struct IncidentWave {
  double e0 = 1.0;          // V/m
  double angle_rad = 0.0;   // propagation direction

  Vector2d direction() const {
    return {std::cos(angle_rad), std::sin(angle_rad)};
  }
  Vector2d polarization() const {
    return {-std::sin(angle_rad), std::cos(angle_rad)};
  }
  double h0(const WaveParams& w) const { return e0 / w.eta0; }
};

Complex complex_permittivity(const Material& m, const WaveParams& w);

/// Modified contrast chi = (eps - eps0)/eps; zero in vacuum, and
/// 1 - chi = eps0/eps always holds.
Complex contrast(const Material& m, const WaveParams& w);

Vector2c incident_field(const IncidentWave& inc, const WaveParams& w,
                        const Vector2d& r);

/// Axial magnetic field of the incident wave, H0 e^{-j k0 k.r}.
Complex incident_hz(const IncidentWave& inc, const WaveParams& w,
                    const Vector2d& r);

/// Outgoing 2D Green's function (j/4) H0^(2)(k0 |r - rp|).
Complex green(const WaveParams& w, const Vector2d& r, const Vector2d& rp);

/// Gradient of green with respect to r.
Vector2c grad_green(const WaveParams& w, const Vector2d& r,
                    const Vector2d& rp);

/// Smooth remainder after extracting the log singularity:
/// green = (1/2pi) ln R + green_smooth, finite at R = 0 with limit
/// j/4 + (1/2pi)(ln(k0/2) + gamma).
Complex green_smooth(const WaveParams& w, const Vector2d& r,
                     const Vector2d& rp);

}  // namespace vie2d

#endif
