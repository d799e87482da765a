#include "vie2d/em.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vie2d/specfun.hpp"

namespace vie2d {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;
constexpr Complex kJ(0.0, 1.0);
}  // namespace

WaveParams WaveParams::from_frequency(double f_hz) {
  if (!(f_hz > 0.0))
    throw std::invalid_argument("WaveParams: frequency must be positive");
  WaveParams w;
  w.frequency = f_hz;
  w.omega = 2.0 * kPi * f_hz;
  w.k0 = w.omega / constants::c0;
  w.eta0 = constants::eta0;
  w.beta0 = w.k0;
  return w;
}

void validate(const Material& m) {
  if (!(m.eps_r >= 1.0))
    throw std::invalid_argument("Material: eps_r must be >= 1");
  if (!(m.sigma >= 0.0))
    throw std::invalid_argument("Material: sigma must be >= 0");
}

Complex complex_permittivity(const Material& m, const WaveParams& w) {
  return Complex(m.eps_r * constants::eps0, -m.sigma / w.omega);
}

Complex contrast(const Material& m, const WaveParams& w) {
  Complex eps = complex_permittivity(m, w);
  return (eps - constants::eps0) / eps;
}

Vector2c incident_field(const IncidentWave& inc, const WaveParams& w,
                        const Vector2d& r) {
  Complex phase = std::exp(-kJ * w.k0 * inc.direction().dot(r));
  Vector2d p = inc.polarization();
  return Vector2c(inc.e0 * phase * p.x(), inc.e0 * phase * p.y());
}

Complex incident_hz(const IncidentWave& inc, const WaveParams& w,
                    const Vector2d& r) {
  return inc.h0(w) * std::exp(-kJ * w.k0 * inc.direction().dot(r));
}

Complex green(const WaveParams& w, const Vector2d& r, const Vector2d& rp) {
  double dist = (r - rp).norm();
  if (dist == 0.0)
    throw std::domain_error("green: coincident points (use green_smooth)");
  return 0.25 * kJ * specfun::hankel2(0, Complex(w.k0 * dist, 0.0));
}

Vector2c grad_green(const WaveParams& w, const Vector2d& r,
                    const Vector2d& rp) {
  Vector2d diff = r - rp;
  double dist = diff.norm();
  if (dist == 0.0)
    throw std::domain_error("grad_green: coincident points");
  Complex factor = -0.25 * kJ * w.k0 *
                   specfun::hankel2(1, Complex(w.k0 * dist, 0.0)) / dist;
  return Vector2c(factor * diff.x(), factor * diff.y());
}

Complex green_smooth(const WaveParams& w, const Vector2d& r,
                     const Vector2d& rp) {
  double dist = (r - rp).norm();
  double x = w.k0 * dist;
  if (x > 0.5) {
    return green(w, r, rp) - std::log(dist) / (2.0 * kPi);
  }
  // Small arguments: fold the extracted log into the series for
  // (j/4) J0 + (1/4) Y0 so the subtraction stays exact as R -> 0.
  // green = (j/4) J0(x) + (1/(2pi)) [ (ln(x/2)+gamma) J0(x) + S(x) ]
  // with S(x) = sum_{k>=1} (-1)^{k+1} H_k (x^2/4)^k / (k!)^2.
  double q = 0.25 * x * x;
  double j0 = 1.0, term = 1.0;
  double s = 0.0, u = 1.0, h = 0.0, sign = 1.0;
  for (int k = 1; k <= 40; ++k) {
    term *= -q / (double(k) * double(k));
    j0 += term;
    u *= q / (double(k) * double(k));
    h += 1.0 / k;
    s += sign * h * u;
    sign = -sign;
    if (std::abs(term) < 1e-18 && u < 1e-18) break;
  }
  double lg = (x > 0.0) ? std::log(0.5 * x) + kEulerGamma : 0.0;
  // (ln(x/2)+gamma) J0 - ln R = (ln(x/2)+gamma)(J0-1) + ln(k0/2) + gamma
  double smooth_log =
      lg * (j0 - 1.0) + std::log(0.5 * w.k0) + kEulerGamma;
  return Complex(0.0, 0.25) * j0 + (smooth_log + s) / (2.0 * kPi);
}

}  // namespace vie2d
